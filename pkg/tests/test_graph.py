"""Graph construction, adequacy, bridges, distances and connectivity entries."""

from fractions import Fraction

import pytest

import metgraph as mg
from conftest import (
    build_banana,
    build_circle,
    build_circle_with_tail,
    build_segment,
    build_two_bridges,
    standing_graphs,
)


def build_raw_banana(a=1, b=2, c=3):
    """Two vertices joined by three parallel edges; not adequate."""
    return mg.MetrizedGraph(
        ("p0", "p1"),
        (
            mg.Edge(0, 1, Fraction(a)),
            mg.Edge(0, 1, Fraction(b)),
            mg.Edge(0, 1, Fraction(c)),
        ),
    )


def build_loop(length=3):
    return mg.MetrizedGraph(("p0",), (mg.Edge(0, 0, Fraction(length)),))


class TestConstruction:
    def test_lengths_normalized_to_fractions(self):
        g = mg.MetrizedGraph(("a", "b"), (mg.Edge(0, 1, "3/7"),))
        assert g.edges[0].length == Fraction(3, 7)

    def test_zero_length_rejected(self):
        with pytest.raises(mg.NonpositiveLength):
            mg.MetrizedGraph(("a", "b"), (mg.Edge(0, 1, 0),))

    def test_negative_length_rejected(self):
        with pytest.raises(mg.NonpositiveLength):
            mg.MetrizedGraph(("a", "b"), (mg.Edge(0, 1, Fraction(-1, 2)),))

    def test_disconnected_rejected(self):
        with pytest.raises(mg.GraphDisconnected):
            mg.MetrizedGraph(
                ("a", "b", "c", "d"),
                (mg.Edge(0, 1, 1), mg.Edge(2, 3, 1)),
            )

    def test_dangling_endpoint_rejected(self):
        with pytest.raises(mg.MetgraphError):
            mg.MetrizedGraph(("a", "b"), (mg.Edge(0, 2, 1),))

    def test_empty_rejected(self):
        with pytest.raises(mg.MetgraphError):
            mg.MetrizedGraph((), ())
        with pytest.raises(mg.MetgraphError):
            mg.MetrizedGraph(("a",), ())

    def test_duplicate_labels_rejected(self):
        with pytest.raises(mg.MetgraphError):
            mg.MetrizedGraph(("a", "a"), (mg.Edge(0, 1, 1),))

    def test_hashable_and_equal_by_value(self):
        assert build_circle() == build_circle()
        assert hash(build_circle()) == hash(build_circle())

    def test_valence_counts_loop_twice(self):
        assert build_loop().valence(0) == 2
        assert build_two_bridges().valence(1) == 3
        assert build_two_bridges().valence(5) == 1

    def test_total_length(self):
        assert build_circle().total_length == 2
        assert build_banana(1, 2, 3).total_length == 6


class TestAdequacy:
    def test_standing_graphs_are_adequate(self):
        for _, g, _ in standing_graphs():
            assert mg.validate_adequate(g)

    def test_parallel_edges_not_adequate(self):
        assert not mg.validate_adequate(build_raw_banana())

    def test_loop_not_adequate(self):
        assert not mg.validate_adequate(build_loop())

    def test_make_adequate_identity_on_adequate_graph(self):
        g = build_circle()
        refined, relabel = mg.make_adequate(g)
        assert refined == g
        pt = mg.GraphPoint(1, Fraction(1, 3))
        assert relabel.point(pt) == pt
        assert relabel.vertex(2) == 2

    def test_make_adequate_splits_parallel_class(self):
        g = build_raw_banana(1, 2, 3)
        refined, relabel = mg.make_adequate(g)
        assert mg.validate_adequate(refined)
        assert refined.n_vertices == 4
        assert refined.n_edges == 5
        assert refined.total_length == g.total_length
        # lowest-index member kept whole, the others split at their midpoint
        assert refined.edges[0] == mg.Edge(0, 1, Fraction(1))
        assert relabel.point(mg.GraphPoint(1, Fraction(1))).offset == Fraction(1)

    def test_make_adequate_trisects_loop(self):
        refined, relabel = mg.make_adequate(build_loop(3))
        assert mg.validate_adequate(refined)
        assert refined.n_vertices == 3
        assert refined.n_edges == 3
        assert all(e.length == 1 for e in refined.edges)
        assert mg.vertex_at(refined, relabel.point(mg.GraphPoint(0, Fraction(1)))) == 1

    def test_make_adequate_preserves_vertex_distances(self):
        g = build_raw_banana(2, 3, 5)
        refined, _ = mg.make_adequate(g)
        for u in range(g.n_vertices):
            for v in range(g.n_vertices):
                assert mg.shortest_distance(g, u, v) == mg.shortest_distance(
                    refined, u, v
                )

    def test_require_adequate_raises(self):
        with pytest.raises(mg.NotAdequate):
            mg.laplacian(build_raw_banana())


class TestBridges:
    def test_two_bridges_graph(self):
        g = build_two_bridges()
        assert mg.bridges(g) == frozenset({0, 5})
        assert mg.is_bridge(g, 0)
        assert not mg.is_bridge(g, 3)

    def test_circle_has_none(self):
        assert mg.bridges(build_circle()) == frozenset()

    def test_segment_is_a_bridge(self):
        assert mg.bridges(build_segment()) == frozenset({0})

    def test_loop_is_not_a_bridge(self):
        assert mg.bridges(build_loop()) == frozenset()

    def test_matches_cycle_based_search(self):
        # independent oracle: depth-first lowpoints on the multigraph
        def lowpoint_bridges(g):
            adj = [[] for _ in range(g.n_vertices)]
            for idx, e in enumerate(g.edges):
                adj[e.tail].append((e.head, idx))
                adj[e.head].append((e.tail, idx))
            disc = [None] * g.n_vertices
            low = [0] * g.n_vertices
            found = set()
            timer = 0

            def dfs(u, entered_by):
                nonlocal timer
                disc[u] = low[u] = timer
                timer += 1
                for v, idx in adj[u]:
                    if idx == entered_by:
                        continue
                    if disc[v] is None:
                        dfs(v, idx)
                        low[u] = min(low[u], low[v])
                        if low[v] > disc[u]:
                            found.add(idx)
                    else:
                        low[u] = min(low[u], disc[v])

            dfs(0, None)
            return frozenset(found)

        cases = [g for _, g, _ in standing_graphs()]
        cases += [build_circle_with_tail(), build_raw_banana(), build_loop()]
        for g in cases:
            assert mg.bridges(g) == lowpoint_bridges(g)


class TestBridgeSide:
    def test_vertices_of_two_bridges_graph(self):
        g = build_two_bridges()
        assert mg.bridge_side(g, 0, vertex=0) is mg.Side.P
        assert mg.bridge_side(g, 0, vertex=4) is mg.Side.Q
        assert mg.bridge_side(g, 5, vertex=0) is mg.Side.P
        assert mg.bridge_side(g, 5, vertex=5) is mg.Side.Q

    def test_bridge_endpoints_classify_to_own_side(self):
        g = build_two_bridges()
        assert mg.bridge_side(g, 0, vertex=0) is mg.Side.P
        assert mg.bridge_side(g, 0, vertex=1) is mg.Side.Q

    def test_edges(self):
        g = build_two_bridges()
        assert mg.bridge_side(g, 0, edge=5) is mg.Side.Q
        assert mg.bridge_side(g, 5, edge=0) is mg.Side.P
        assert mg.bridge_side(g, 0, edge=1) is mg.Side.Q

    def test_partition_is_consistent_with_edges(self):
        g = build_circle_with_tail()
        for e in mg.bridges(g):
            for j in range(g.n_edges):
                if j == e:
                    continue
                side = mg.bridge_side(g, e, edge=j)
                for endpoint in (g.edges[j].tail, g.edges[j].head):
                    if endpoint in (g.edges[e].tail, g.edges[e].head):
                        continue
                    assert mg.bridge_side(g, e, vertex=endpoint) is side

    def test_rejects_non_bridge(self):
        with pytest.raises(mg.NotABridge):
            mg.bridge_side(build_circle(), 0, vertex=1)

    def test_needs_exactly_one_target(self):
        g = build_segment()
        with pytest.raises(mg.MetgraphError):
            mg.bridge_side(g, 0)
        with pytest.raises(mg.MetgraphError):
            mg.bridge_side(g, 0, vertex=0, edge=0)


class TestDistances:
    def test_two_bridges(self):
        g = build_two_bridges()
        assert mg.shortest_distance(g, 0, 5) == 4
        assert mg.shortest_distance(g, 0, 4) == 3
        assert mg.shortest_distance(g, 2, 3) == 2

    def test_circle_takes_shorter_arc(self):
        g = build_circle()
        assert mg.shortest_distance(g, 0, 2) == Fraction(1, 2)
        assert mg.shortest_distance(g, 1, 2) == 1

    def test_symmetric_and_zero_on_diagonal(self):
        g = build_banana()
        for u in range(g.n_vertices):
            assert mg.shortest_distance(g, u, u) == 0
            for v in range(g.n_vertices):
                assert mg.shortest_distance(g, u, v) == mg.shortest_distance(g, v, u)


class TestClosestNeighbours:
    def test_two_bridges(self):
        g = build_two_bridges()
        assert mg.closest_neighbours(g, 0, 5) == (1, 4)
        assert mg.closest_neighbours(g, 5, 0) == (4, 1)

    def test_sharing_a_vertex(self):
        g = mg.MetrizedGraph(
            ("a", "b", "c"), (mg.Edge(0, 1, 1), mg.Edge(1, 2, 1))
        )
        assert mg.closest_neighbours(g, 0, 1) == (1, 1)

    def test_agrees_with_bridge_sides(self):
        # the closest endpoint of a bridge is the one facing the other bridge
        g = build_two_bridges()
        for i, j in ((0, 5), (5, 0)):
            xi, xj = mg.closest_neighbours(g, i, j)
            side = mg.bridge_side(g, i, edge=j)
            expected = g.edges[i].head if side is mg.Side.Q else g.edges[i].tail
            assert xi == expected

    def test_rejects_non_bridges_and_same_edge(self):
        g = build_two_bridges()
        with pytest.raises(mg.NotABridge):
            mg.closest_neighbours(g, 0, 1)
        with pytest.raises(mg.MetgraphError):
            mg.closest_neighbours(g, 0, 0)


class TestCanonicalDivisor:
    def test_banana(self):
        divisor, polarized = mg.canonical_divisor(build_banana())
        assert divisor.coefficients == (1, 1, 0, 0)
        assert polarized

    def test_circle_is_zero(self):
        divisor, polarized = mg.canonical_divisor(build_circle())
        assert divisor.coefficients == (0, 0, 0)
        assert polarized

    def test_circle_with_tail_and_genus(self):
        divisor, polarized = mg.canonical_divisor(
            build_circle_with_tail(), {2: 1, 3: 1}
        )
        assert divisor.coefficients == (0, 0, 3, 1)
        assert polarized

    def test_pendant_vertex_breaks_effectivity(self):
        divisor, polarized = mg.canonical_divisor(build_circle_with_tail())
        assert divisor.coefficients == (0, 0, 1, -1)
        assert not polarized

    def test_negative_genus_not_polarized(self):
        _, polarized = mg.canonical_divisor(build_circle(), {0: -1})
        assert not polarized

    def test_genus_list_length_checked(self):
        with pytest.raises(mg.MetgraphError):
            mg.canonical_divisor(build_circle(), [0, 0])


class TestDivisor:
    def test_degree_and_support(self):
        d = mg.Divisor((1, 0, -2, 3))
        assert d.degree == 2
        assert d.support() == (0, 2, 3)
        assert len(d) == 4
        assert d[3] == 3

    def test_addition(self):
        a = mg.Divisor((1, 0)) + mg.Divisor((2, -1))
        assert a.coefficients == (3, -1)

    def test_zero(self):
        assert mg.Divisor.zero(3).coefficients == (0, 0, 0)

    def test_non_integer_rejected(self):
        with pytest.raises(mg.MetgraphError):
            mg.Divisor((Fraction(1, 2),))


class TestPoints:
    def test_validate_point(self):
        g = build_circle()
        pt = mg.validate_point(g, (1, "1/3"))
        assert pt == mg.GraphPoint(1, Fraction(1, 3))

    def test_out_of_range(self):
        g = build_circle()
        with pytest.raises(mg.PointOutOfRange):
            mg.validate_point(g, (0, Fraction(2, 3)))
        with pytest.raises(mg.PointOutOfRange):
            mg.validate_point(g, (7, 0))
        with pytest.raises(mg.PointOutOfRange):
            mg.validate_point(g, (0, Fraction(-1, 5)))

    def test_vertex_at(self):
        g = build_circle()
        assert mg.vertex_at(g, mg.GraphPoint(0, Fraction(0))) == 1
        assert mg.vertex_at(g, mg.GraphPoint(0, Fraction(1, 2))) == 0
        assert mg.vertex_at(g, mg.GraphPoint(0, Fraction(1, 4))) is None

    def test_representations(self):
        g = build_circle()
        reps = mg.representations(g, 0)
        assert reps == (
            mg.GraphPoint(0, Fraction(1, 2)),
            mg.GraphPoint(2, Fraction(0)),
        )
        assert mg.point_of_vertex(g, 0) == reps[0]


class TestTransforms:
    def test_scaled(self):
        g = build_circle().scaled(3)
        assert g.total_length == 6
        with pytest.raises(mg.NonpositiveLength):
            build_circle().scaled(0)

    def test_with_edge_reversed(self):
        g = build_circle()
        flipped = g.with_edge_reversed(1)
        assert flipped.edges[1] == mg.Edge(2, 1, Fraction(1))
        assert flipped.edges[0] == g.edges[0]
        assert flipped.with_edge_reversed(1) == g


class TestConnectivityEntry:
    ALL_CODES = (0, 1, 10, 11, 100, 101, 110, 111)

    def test_bridge_pair_codes_round_trip(self):
        for code in self.ALL_CODES:
            entry = mg.ConnectivityEntry.bridge_pair_from_code(code)
            assert entry.code == code
            assert entry.kind is mg.EntryKind.BRIDGE_PAIR

    def test_bridge_pair_codes_are_distinct(self):
        entries = {
            mg.ConnectivityEntry.bridge_pair_from_code(c) for c in self.ALL_CODES
        }
        assert len(entries) == len(self.ALL_CODES)

    def test_invalid_codes_rejected(self):
        for code in (2, 12, 99, 112, 211, -1):
            with pytest.raises(mg.MetgraphError):
                mg.ConnectivityEntry.bridge_pair_from_code(code)

    def test_field_validation(self):
        with pytest.raises(mg.MetgraphError):
            mg.ConnectivityEntry(mg.EntryKind.SIDE)
        with pytest.raises(mg.MetgraphError):
            mg.ConnectivityEntry(mg.EntryKind.NOT_APPLICABLE, side=mg.Side.P)
        with pytest.raises(mg.MetgraphError):
            mg.ConnectivityEntry(mg.EntryKind.BRIDGE_PAIR, side=mg.Side.P)

    def test_simple_codes(self):
        assert mg.ConnectivityEntry(mg.EntryKind.NOT_APPLICABLE).code == 0
        assert mg.ConnectivityEntry(mg.EntryKind.SELF_BRIDGE).code == 1
        assert mg.ConnectivityEntry(mg.EntryKind.SIDE, mg.Side.P).code == 0
        assert mg.ConnectivityEntry(mg.EntryKind.SIDE, mg.Side.Q).code == 1


class TestConnectivityMatrix:
    def test_two_bridges_golden(self, two_bridges):
        assert mg.connectivity_matrix(two_bridges).codes() == [
            [1, 1, 1, 1, 1, 110],
            [1, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 1],
        ]

    def test_circle_all_zero(self, circle):
        assert mg.connectivity_matrix(circle).codes() == [[0] * 3 for _ in range(3)]

    def test_segment(self, segment):
        assert mg.connectivity_matrix(segment).codes() == [[1]]

    def test_pendant_edge(self):
        g = build_circle_with_tail()
        codes = mg.connectivity_matrix(g).codes()
        assert codes[3][3] == 1
        for j in range(3):
            assert codes[3][j] == 0
            assert codes[j][3] == 0
            assert codes[j][j] == 0

    def test_requires_adequate(self):
        with pytest.raises(mg.NotAdequate):
            mg.connectivity_matrix(build_raw_banana())

    def test_entry_bounds(self, circle):
        with pytest.raises(mg.MetgraphError):
            mg.connectivity_matrix(circle).entry(0, 3)
