"""Shared graph fixtures and the acceptance summary hook.

The five standing test graphs double as golden fixtures: a circle with a
chosen vertex (matrix vertex order p1, p0, p2), two circles joined at a
point, a hypercube over four bits, a three-edge banana refined to an
adequate vertex set, and a path-with-diamond carrying two bridges.
"""

from contextlib import contextmanager
from fractions import Fraction

import pytest

import metgraph as mg


def build_circle() -> mg.MetrizedGraph:
    return mg.MetrizedGraph(
        ("p1", "p0", "p2"),
        (
            mg.Edge(1, 0, Fraction(1, 2)),
            mg.Edge(1, 2, Fraction(1)),
            mg.Edge(0, 2, Fraction(1, 2)),
        ),
    )


def build_joint_circles(l1=Fraction(3), l2=Fraction(6)) -> mg.MetrizedGraph:
    l1, l2 = Fraction(l1), Fraction(l2)
    return mg.MetrizedGraph(
        ("p0", "p1", "p2", "p3", "p4"),
        (
            mg.Edge(0, 1, l1 / 3),
            mg.Edge(1, 2, l1 / 3),
            mg.Edge(2, 0, l1 / 3),
            mg.Edge(0, 3, l2 / 3),
            mg.Edge(3, 4, l2 / 3),
            mg.Edge(4, 0, l2 / 3),
        ),
    )


def build_banana(a=1, b=2, c=3) -> mg.MetrizedGraph:
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    return mg.MetrizedGraph(
        ("p0", "p1", "p2", "p3"),
        (
            mg.Edge(0, 1, b),
            mg.Edge(0, 2, a / 2),
            mg.Edge(2, 1, a / 2),
            mg.Edge(0, 3, c / 2),
            mg.Edge(3, 1, c / 2),
        ),
    )


def build_tesseract() -> mg.MetrizedGraph:
    edges = []
    for i in range(16):
        for j in range(i + 1, 16):
            if bin(i ^ j).count("1") == 1:
                edges.append(mg.Edge(i, j, Fraction(1)))
    return mg.MetrizedGraph(tuple(f"p{k}" for k in range(16)), tuple(edges))


def build_two_bridges() -> mg.MetrizedGraph:
    return mg.MetrizedGraph(
        tuple(f"p{k}" for k in range(6)),
        (
            mg.Edge(0, 1, Fraction(1)),
            mg.Edge(1, 2, Fraction(1)),
            mg.Edge(1, 3, Fraction(1)),
            mg.Edge(2, 4, Fraction(1)),
            mg.Edge(3, 4, Fraction(1)),
            mg.Edge(4, 5, Fraction(1)),
        ),
    )


def build_circle_with_tail(a=1, b=1, c=2) -> mg.MetrizedGraph:
    """A circle of length a + b with one pendant edge of length c at p2."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    return mg.MetrizedGraph(
        ("p0", "p1", "p2", "p3"),
        (
            mg.Edge(0, 1, a / 2),
            mg.Edge(0, 2, a / 2),
            mg.Edge(1, 2, b),
            mg.Edge(2, 3, c),
        ),
    )


def build_segment(length=1) -> mg.MetrizedGraph:
    return mg.MetrizedGraph(("p", "q"), (mg.Edge(0, 1, Fraction(length)),))


STANDING = (
    ("circle", build_circle, (0, 2, 0)),
    ("joint_circles", build_joint_circles, (2, 0, 0, 0, 0)),
    ("banana", build_banana, (1, 1, 0, 0)),
    ("two_bridges", build_two_bridges, (1, 0, 0, 0, 0, 2)),
    ("tesseract", build_tesseract, tuple(range(16))),
)


def standing_graphs() -> list[tuple[str, mg.MetrizedGraph, mg.Divisor]]:
    return [(name, builder(), mg.Divisor(coeffs)) for name, builder, coeffs in STANDING]


@pytest.fixture(params=STANDING, ids=lambda item: item[0])
def standing(request):
    name, builder, coeffs = request.param
    return name, builder(), mg.Divisor(coeffs)


@pytest.fixture
def circle():
    return build_circle()


@pytest.fixture
def joint_circles():
    return build_joint_circles()


@pytest.fixture
def banana():
    return build_banana()


@pytest.fixture
def tesseract():
    return build_tesseract()


@pytest.fixture
def two_bridges():
    return build_two_bridges()


@pytest.fixture
def segment():
    return build_segment()


def sample_offsets(length: Fraction, count: int) -> list[Fraction]:
    """Endpoints plus evenly spread interior offsets."""
    inner = [length * k / (count + 1) for k in range(1, count + 1)]
    return [Fraction(0), *inner, length]


def sample_points(g: mg.MetrizedGraph, count: int) -> list[mg.GraphPoint]:
    """A deterministic spread of points across all edges."""
    out = []
    for k in range(count):
        i = k % g.n_edges
        offset = g.edges[i].length * (k + 1) / (count + 3)
        out.append(mg.GraphPoint(i, offset))
    return out


# ---------------------------------------------------------------------------
# acceptance reporting

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


@pytest.fixture
def criterion():
    """Context manager recording one acceptance line, pass or fail."""

    @contextmanager
    def _criterion(label: str):
        try:
            yield
        except BaseException:
            _ACCEPTANCE_RESULTS.append((label, False))
            raise
        _ACCEPTANCE_RESULTS.append((label, True))

    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
