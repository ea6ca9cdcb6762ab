"""Metrized graphs: parametrized edges, bridges, distances and divisors.

A metrized graph is a finite connected multigraph whose edges carry strictly
positive rational lengths.  Edge ``i`` is identified with the segment
``[0, L_i]``: offset ``0`` sits at the tail vertex, offset ``L_i`` at the
head, so the stored ``(tail, head)`` order fixes the parametrization.  A
point of the graph is an ``(edge, offset)`` pair; endpoints of different
edges may denote the same metric point.

Most of the heavier derived data (bridge sets, distance tables, the
connectivity matrix) is cached per graph value, which is safe because the
graph type is immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache
from heapq import heappop, heappush
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    GraphDisconnected,
    MetgraphError,
    NonpositiveLength,
    NotABridge,
    NotAdequate,
    PointOutOfRange,
)


class Edge(NamedTuple):
    tail: int
    head: int
    length: Fraction


class GraphPoint(NamedTuple):
    """A point on the graph: an edge index plus an offset measured from the tail."""

    edge: int
    offset: Fraction


@dataclass(frozen=True)
class MetrizedGraph:
    """Immutable metrized graph over an indexed vertex list.

    Vertices are addressed by position in ``vertices``; the labels are only
    used for display and serialization.  Construction normalizes lengths to
    ``Fraction`` and rejects empty graphs, dangling endpoints, nonpositive
    lengths and disconnected edge sets.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        if not verts:
            raise MetgraphError("a metrized graph needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise MetgraphError("vertex labels must be distinct")
        n = len(verts)
        norm = []
        for k, raw in enumerate(self.edges):
            tail, head, length = raw
            if not (0 <= int(tail) < n and 0 <= int(head) < n):
                raise MetgraphError(f"edge {k} references a vertex outside 0..{n - 1}")
            length = Fraction(length)
            if length <= 0:
                raise NonpositiveLength(f"edge {k} has nonpositive length {length}")
            norm.append(Edge(int(tail), int(head), length))
        if not norm:
            raise MetgraphError("a metrized graph needs at least one edge")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(norm))
        if len(self._component_of(0)) != n:
            raise GraphDisconnected("the edge set does not connect all vertices")

    def _component_of(self, start: int) -> set[int]:
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(e.tail, []).append(e.head)
            adj.setdefault(e.head, []).append(e.tail)
        seen = {start}
        stack = [start]
        while stack:
            for w in adj.get(stack.pop(), ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def valence(self, v: int) -> int:
        """Number of edge ends at vertex ``v``; a loop contributes two."""
        self._check_vertex(v)
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def incident_edges(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return tuple(i for i, e in enumerate(self.edges) if v in (e.tail, e.head))

    def scaled(self, factor: Fraction | int | str) -> "MetrizedGraph":
        """The same graph with every edge length multiplied by ``factor``."""
        factor = Fraction(factor)
        if factor <= 0:
            raise NonpositiveLength(f"scale factor must be positive, got {factor}")
        return MetrizedGraph(
            self.vertices,
            tuple(Edge(e.tail, e.head, e.length * factor) for e in self.edges),
        )

    def with_edge_reversed(self, i: int) -> "MetrizedGraph":
        """The same graph with edge ``i`` parametrized from the other end."""
        self._check_edge(i)
        e = self.edges[i]
        flipped = Edge(e.head, e.tail, e.length)
        return MetrizedGraph(
            self.vertices,
            self.edges[:i] + (flipped,) + self.edges[i + 1 :],
        )

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self.vertices):
            raise MetgraphError(f"vertex index {v} outside 0..{len(self.vertices) - 1}")

    def _check_edge(self, i: int) -> None:
        if not 0 <= i < len(self.edges):
            raise MetgraphError(f"edge index {i} outside 0..{len(self.edges) - 1}")


@dataclass(frozen=True)
class Divisor:
    """An integer coefficient per vertex."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(self.coefficients)
        for a in coeffs:
            if a != int(a):
                raise MetgraphError(f"divisor coefficients must be integers, got {a!r}")
        object.__setattr__(self, "coefficients", tuple(int(a) for a in coeffs))

    @classmethod
    def zero(cls, n: int) -> "Divisor":
        return cls((0,) * n)

    @property
    def degree(self) -> int:
        return sum(self.coefficients)

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, a in enumerate(self.coefficients) if a != 0)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k]

    def __add__(self, other: "Divisor") -> "Divisor":
        if len(other) != len(self):
            raise MetgraphError("divisor length mismatch")
        return Divisor(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))


def check_divisor(g: MetrizedGraph, d: Divisor) -> Divisor:
    if len(d) != g.n_vertices:
        raise MetgraphError(
            f"divisor has {len(d)} coefficients but the graph has {g.n_vertices} vertices"
        )
    return d


def canonical_divisor(
    g: MetrizedGraph, genus: Sequence[int] | Mapping[int, int] | None = None
) -> tuple[Divisor, bool]:
    """Canonical divisor (v(p) - 2 + 2q(p))_p for a vertex genus assignment.

    Returns the divisor together with a flag telling whether the polarization
    is admissible: all genera nonnegative and the divisor effective.
    """
    n = g.n_vertices
    if genus is None:
        q = [0] * n
    elif isinstance(genus, Mapping):
        q = [int(genus.get(v, 0)) for v in range(n)]
    else:
        q = [int(x) for x in genus]
        if len(q) != n:
            raise MetgraphError(f"genus list has {len(q)} entries for {n} vertices")
    coeffs = tuple(g.valence(v) - 2 + 2 * q[v] for v in range(n))
    polarized = all(x >= 0 for x in q) and all(c >= 0 for c in coeffs)
    return Divisor(coeffs), polarized


# ---------------------------------------------------------------------------
# points


def validate_point(g: MetrizedGraph, pt: GraphPoint | tuple) -> GraphPoint:
    """Normalize a point and check 0 <= offset <= edge length."""
    edge, offset = pt
    if not isinstance(edge, int) or not 0 <= edge < g.n_edges:
        raise PointOutOfRange(f"edge index {edge!r} outside 0..{g.n_edges - 1}")
    offset = Fraction(offset)
    if not 0 <= offset <= g.edges[edge].length:
        raise PointOutOfRange(
            f"offset {offset} outside [0, {g.edges[edge].length}] on edge {edge}"
        )
    return GraphPoint(edge, offset)


def vertex_at(g: MetrizedGraph, pt: GraphPoint) -> int | None:
    """The vertex a point sits on, or None for an interior point."""
    pt = validate_point(g, pt)
    e = g.edges[pt.edge]
    if pt.offset == 0:
        return e.tail
    if pt.offset == e.length:
        return e.head
    return None


def representations(g: MetrizedGraph, v: int) -> tuple[GraphPoint, ...]:
    """All (edge, offset) descriptions of vertex ``v``, in edge order.

    For each incident edge the tail description comes before the head one,
    so the first entry is the canonical representation used wherever a
    single description must be picked.
    """
    g._check_vertex(v)
    reps = []
    for i, e in enumerate(g.edges):
        if e.tail == v:
            reps.append(GraphPoint(i, Fraction(0)))
        if e.head == v:
            reps.append(GraphPoint(i, e.length))
    return tuple(reps)


def point_of_vertex(g: MetrizedGraph, v: int) -> GraphPoint:
    return representations(g, v)[0]


# ---------------------------------------------------------------------------
# adequacy and edge splitting


def validate_adequate(g: MetrizedGraph) -> bool:
    """True when the graph has no loops and no parallel edges."""
    seen = set()
    for e in g.edges:
        if e.tail == e.head:
            return False
        key = frozenset((e.tail, e.head))
        if key in seen:
            return False
        seen.add(key)
    return True


def require_adequate(g: MetrizedGraph) -> None:
    if not validate_adequate(g):
        raise NotAdequate(
            "vertex set admits loops or parallel edges; apply make_adequate first"
        )


class PointRelabeling:
    """Maps points of a graph into a refinement produced by splitting edges.

    Vertices keep their indices; a point of an old edge lands on the segment
    of the refinement that covers its offset.  Offsets exactly on a split
    land on the new vertex (described via the segment ending there).
    """

    def __init__(self, segments: Mapping[int, Sequence[tuple[int, Fraction, Fraction]]]):
        self._segments = {i: tuple(segs) for i, segs in segments.items()}

    def point(self, pt: GraphPoint) -> GraphPoint:
        edge, offset = pt
        for new_edge, start, end in self._segments[edge]:
            if start <= offset <= end:
                return GraphPoint(new_edge, offset - start)
        raise PointOutOfRange(f"offset {offset} outside edge {edge}")

    def vertex(self, v: int) -> int:
        return v

    def then(self, after: "PointRelabeling") -> "PointRelabeling":
        return _ChainedRelabeling(self, after)


class _ChainedRelabeling(PointRelabeling):
    def __init__(self, first: PointRelabeling, second: PointRelabeling):
        self._first = first
        self._second = second

    def point(self, pt: GraphPoint) -> GraphPoint:
        return self._second.point(self._first.point(pt))

    def vertex(self, v: int) -> int:
        return self._second.vertex(self._first.vertex(v))


def _fresh_labels(used: set[str]) -> Iterable[str]:
    k = 0
    while True:
        label = f"s{k}"
        if label not in used:
            yield label
        k += 1


def _split_edges(
    g: MetrizedGraph, cuts: Mapping[int, Iterable[Fraction]]
) -> tuple[MetrizedGraph, PointRelabeling]:
    """Split each edge at the given interior offsets.

    Original vertices keep their indices; one new vertex per cut is appended
    (edges in index order, offsets increasing).
    """
    labels = list(g.vertices)
    namer = _fresh_labels(set(labels))
    new_edges: list[Edge] = []
    segments: dict[int, list[tuple[int, Fraction, Fraction]]] = {}
    for i, e in enumerate(g.edges):
        offsets = sorted({Fraction(c) for c in cuts.get(i, ())})
        for off in offsets:
            if not 0 < off < e.length:
                raise PointOutOfRange(f"cut {off} is not interior to edge {i}")
        prev_vertex, prev_off = e.tail, Fraction(0)
        segs = []
        for off in offsets:
            v = len(labels)
            labels.append(next(namer))
            segs.append((len(new_edges), prev_off, off))
            new_edges.append(Edge(prev_vertex, v, off - prev_off))
            prev_vertex, prev_off = v, off
        segs.append((len(new_edges), prev_off, e.length))
        new_edges.append(Edge(prev_vertex, e.head, e.length - prev_off))
        segments[i] = segs
    return MetrizedGraph(tuple(labels), tuple(new_edges)), PointRelabeling(segments)


def make_adequate(g: MetrizedGraph) -> tuple[MetrizedGraph, PointRelabeling]:
    """Refine the vertex set until no loops or parallel edges remain.

    Loops are split at one and two thirds of their length; in each parallel
    class the lowest-index edge is kept whole and the others are split at
    their midpoint.  Already-adequate graphs come back unchanged with an
    identity relabeling.
    """
    cuts: dict[int, list[Fraction]] = {}
    classes: dict[frozenset[int], list[int]] = {}
    for i, e in enumerate(g.edges):
        if e.tail == e.head:
            cuts[i] = [e.length / 3, 2 * e.length / 3]
        else:
            classes.setdefault(frozenset((e.tail, e.head)), []).append(i)
    for members in classes.values():
        for i in sorted(members)[1:]:
            cuts[i] = [g.edges[i].length / 2]
    refined, relabeling = _split_edges(g, cuts)
    # one pass suffices: thirds and midpoints meet fresh valence-2 vertices
    assert validate_adequate(refined), "edge splitting left loops or parallels"
    return refined, relabeling


# ---------------------------------------------------------------------------
# bridges and distances


@cache
def bridges(g: MetrizedGraph) -> frozenset[int]:
    """Indices of all edges whose interior disconnects the graph."""
    out = set()
    for skip in range(g.n_edges):
        adj: dict[int, list[int]] = {}
        for i, e in enumerate(g.edges):
            if i == skip:
                continue
            adj.setdefault(e.tail, []).append(e.head)
            adj.setdefault(e.head, []).append(e.tail)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj.get(stack.pop(), ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != g.n_vertices:
            out.add(skip)
    return frozenset(out)


def is_bridge(g: MetrizedGraph, i: int) -> bool:
    g._check_edge(i)
    return i in bridges(g)


class Side(Enum):
    """Which component of the cut graph a target falls in: the bridge's tail
    side (P) or head side (Q)."""

    P = 0
    Q = 1


@cache
def _tail_side_vertices(g: MetrizedGraph, bridge: int) -> frozenset[int]:
    adj: dict[int, list[int]] = {}
    for i, e in enumerate(g.edges):
        if i == bridge:
            continue
        adj.setdefault(e.tail, []).append(e.head)
        adj.setdefault(e.head, []).append(e.tail)
    start = g.edges[bridge].tail
    seen = {start}
    stack = [start]
    while stack:
        for w in adj.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def bridge_side(
    g: MetrizedGraph,
    bridge: int,
    *,
    vertex: int | None = None,
    edge: int | None = None,
) -> Side:
    """Classify a vertex or a whole edge relative to a bridge.

    A bridge endpoint belongs to its own side.  An edge other than the
    bridge lies entirely in one component, so classifying its tail settles
    the whole edge.
    """
    if not is_bridge(g, bridge):
        raise NotABridge(f"edge {bridge} is not a bridge")
    if (vertex is None) == (edge is None):
        raise MetgraphError("pass exactly one of vertex= or edge=")
    if edge is not None:
        g._check_edge(edge)
        if edge == bridge:
            raise MetgraphError("cannot classify a bridge relative to itself")
        target = g.edges[edge].tail
    else:
        g._check_vertex(vertex)
        target = vertex
    return Side.P if target in _tail_side_vertices(g, bridge) else Side.Q


@cache
def _distances_from(g: MetrizedGraph, source: int) -> tuple[Fraction, ...]:
    dist: list[Fraction | None] = [None] * g.n_vertices
    heap: list[tuple[Fraction, int]] = [(Fraction(0), source)]
    while heap:
        d, v = heappop(heap)
        if dist[v] is not None:
            continue
        dist[v] = d
        for e in g.edges:
            for a, b in ((e.tail, e.head), (e.head, e.tail)):
                if a == v and dist[b] is None:
                    heappush(heap, (d + e.length, b))
    assert all(d is not None for d in dist)
    return tuple(dist)  # type: ignore[arg-type]


def shortest_distance(g: MetrizedGraph, u: int, v: int) -> Fraction:
    """Length of a shortest path between two vertices."""
    g._check_vertex(u)
    g._check_vertex(v)
    return _distances_from(g, u)[v]


def closest_neighbours(g: MetrizedGraph, i: int, j: int) -> tuple[int, int]:
    """The endpoint pair of two distinct bridges at minimal distance.

    The minimum is strict because crossing either bridge costs its full
    positive length, hence the assertion can only fire on corrupted data.
    """
    if i == j:
        raise MetgraphError("closest neighbours need two distinct edges")
    for k in (i, j):
        if not is_bridge(g, k):
            raise NotABridge(f"edge {k} is not a bridge")
    ei, ej = g.edges[i], g.edges[j]
    pairs = [
        (ei.tail, ej.tail),
        (ei.tail, ej.head),
        (ei.head, ej.tail),
        (ei.head, ej.head),
    ]
    dists = [shortest_distance(g, a, b) for a, b in pairs]
    best = min(dists)
    assert dists.count(best) == 1, "ambiguous closest-neighbour pair"
    return pairs[dists.index(best)]


# ---------------------------------------------------------------------------
# connectivity matrix


class NeighbourPair(Enum):
    """Which endpoints of two bridges face each other, as a two-digit code
    whose digits mean tail (0) or head (1)."""

    PP = 0
    PQ = 1
    QP = 10
    QQ = 11


class EntryKind(Enum):
    NOT_APPLICABLE = "not applicable"
    SELF_BRIDGE = "self bridge"
    SIDE = "side"
    BRIDGE_PAIR = "bridge pair"


@dataclass(frozen=True)
class ConnectivityEntry:
    """One cell of the connectivity matrix.

    ``side`` carries which component of the (first) bridge the other edge
    falls in; ``neighbours`` carries the facing endpoints when both edges
    are bridges.  ``code`` packs the entry into the decimal scheme
    {0, 1, 10, 11, 100, 101, 110, 111} used for display.
    """

    kind: EntryKind
    side: Side | None = None
    neighbours: NeighbourPair | None = None

    def __post_init__(self) -> None:
        wants_side = self.kind in (EntryKind.SIDE, EntryKind.BRIDGE_PAIR)
        if wants_side != (self.side is not None):
            raise MetgraphError(f"kind {self.kind} and side {self.side} disagree")
        wants_pair = self.kind is EntryKind.BRIDGE_PAIR
        if wants_pair != (self.neighbours is not None):
            raise MetgraphError(f"kind {self.kind} and neighbours {self.neighbours} disagree")

    @property
    def code(self) -> int:
        if self.kind is EntryKind.NOT_APPLICABLE:
            return 0
        if self.kind is EntryKind.SELF_BRIDGE:
            return 1
        if self.kind is EntryKind.SIDE:
            return self.side.value
        return 100 * self.side.value + self.neighbours.value

    @classmethod
    def bridge_pair_from_code(cls, code: int) -> "ConnectivityEntry":
        side, pair = divmod(code, 100)
        if side not in (0, 1):
            raise MetgraphError(f"code {code} is not a bridge-pair code")
        try:
            neighbours = NeighbourPair(pair)
        except ValueError:
            raise MetgraphError(f"code {code} is not a bridge-pair code") from None
        return cls(EntryKind.BRIDGE_PAIR, Side(side), neighbours)


@dataclass(frozen=True)
class ConnectivityMatrix:
    entries: tuple[tuple[ConnectivityEntry, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> ConnectivityEntry:
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise MetgraphError(f"entry ({i}, {j}) outside a {self.size}-edge matrix")
        return self.entries[i][j]

    def codes(self) -> list[list[int]]:
        return [[entry.code for entry in row] for row in self.entries]


def _facing_endpoints(g: MetrizedGraph, i: int, j: int) -> NeighbourPair:
    xi, xj = closest_neighbours(g, i, j)
    first = "P" if xi == g.edges[i].tail else "Q"
    second = "P" if xj == g.edges[j].tail else "Q"
    return NeighbourPair[first + second]


@cache
def connectivity_matrix(g: MetrizedGraph) -> ConnectivityMatrix:
    """Bridge bookkeeping for every edge pair.

    Diagonal: is the edge a bridge.  Off-diagonal with exactly one bridge:
    which side of the bridge the other edge lies on (entry shared by both
    orders).  Two distinct bridges: side plus facing endpoints, stored for
    each order separately.
    """
    require_adequate(g)
    m = g.n_edges
    br = bridges(g)
    blank = ConnectivityEntry(EntryKind.NOT_APPLICABLE)
    rows = [[blank for _ in range(m)] for _ in range(m)]
    for i in range(m):
        if i in br:
            rows[i][i] = ConnectivityEntry(EntryKind.SELF_BRIDGE)
    for i in range(m):
        for j in range(i + 1, m):
            i_br, j_br = i in br, j in br
            if i_br and j_br:
                rows[i][j] = ConnectivityEntry(
                    EntryKind.BRIDGE_PAIR,
                    bridge_side(g, i, edge=j),
                    _facing_endpoints(g, i, j),
                )
                rows[j][i] = ConnectivityEntry(
                    EntryKind.BRIDGE_PAIR,
                    bridge_side(g, j, edge=i),
                    _facing_endpoints(g, j, i),
                )
            elif i_br or j_br:
                bridge, other = (i, j) if i_br else (j, i)
                shared = ConnectivityEntry(
                    EntryKind.SIDE, bridge_side(g, bridge, edge=other)
                )
                rows[i][j] = rows[j][i] = shared
    return ConnectivityMatrix(tuple(tuple(row) for row in rows))
