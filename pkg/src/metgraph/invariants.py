"""Epsilon invariant and whole-graph consistency checks.

Epsilon comes out of two unrelated computations: summing Green values at
the divisor's support against a base point, and a closed form in the tau
constant and pairwise resistances.  Agreement of the two is itself a strong
correctness check, so neither route is ever expressed through the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import BadDegree
from .graph import (
    Divisor,
    GraphPoint,
    MetrizedGraph,
    check_divisor,
    point_of_vertex,
    representations,
)
from .green import ValueMatrix, value_matrix
from .linalg import pinv, resistance_at_vertices, voltage_at_vertices
from .potential import c_mu, tau_constant, vertex_resistance


def epsilon_via_green(g: MetrizedGraph, divisor: Divisor, base: int | None = None) -> Fraction:
    """Epsilon from Green values: (deg D + 2) sum_k a_k g(p, p_k) plus the
    resistance of the base point against the divisor.

    The result does not depend on the base vertex; by default the tail of
    edge 0 is used.
    """
    check_divisor(g, divisor)
    deg = divisor.degree
    if deg == -2:
        raise BadDegree("divisor degree -2 admits no admissible measure")
    if base is None:
        base = g.edges[0].tail
    g._check_vertex(base)
    matrix = value_matrix(g, divisor)
    base_pt = point_of_vertex(g, base)
    green_sum = Fraction(0)
    resist_sum = Fraction(0)
    for k, ak in enumerate(divisor.coefficients):
        if ak == 0:
            continue
        green_sum += ak * matrix.evaluate(base_pt, point_of_vertex(g, k))
        resist_sum += ak * vertex_resistance(g, base, k)
    return (deg + 2) * green_sum + resist_sum


def epsilon_via_resistance(g: MetrizedGraph, divisor: Divisor) -> Fraction:
    """Epsilon from the closed form in tau and pairwise resistances."""
    check_divisor(g, divisor)
    deg = divisor.degree
    if deg == -2:
        raise BadDegree("divisor degree -2 admits no admissible measure")
    support = divisor.support()
    quad = Fraction(0)
    for k in support:
        for l in support:
            quad += divisor[k] * divisor[l] * vertex_resistance(g, k, l)
    return (4 * tau_constant(g) * deg + quad) / (deg + 2)


class CheckMismatch(NamedTuple):
    location: str
    expected: Fraction
    got: Fraction


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one consistency check: comparison count plus every failure."""

    name: str
    comparisons: int
    mismatches: tuple[CheckMismatch, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_representation_independence(
    g: MetrizedGraph, divisor: Divisor, matrix: ValueMatrix | None = None
) -> CheckReport:
    """Vertex values must not depend on which incident edge describes them.

    For every vertex pair whose first member has valence at least two, all
    combinations of edge descriptions are evaluated and compared.
    """
    if matrix is None:
        matrix = value_matrix(g, check_divisor(g, divisor))
    comparisons = 0
    mismatches = []
    for p in range(g.n_vertices):
        reps_p = representations(g, p)
        if len(reps_p) < 2:
            continue
        for q in range(g.n_vertices):
            reps_q = representations(g, q)
            expected = matrix.evaluate(reps_p[0], reps_q[0])
            for rp in reps_p:
                for rq in reps_q:
                    comparisons += 1
                    got = matrix.evaluate(rp, rq)
                    if got != expected:
                        mismatches.append(
                            CheckMismatch(
                                f"g(v{p}, v{q}) via z[{rp.edge}][{rq.edge}]",
                                expected,
                                got,
                            )
                        )
    return CheckReport("representation independence", comparisons, tuple(mismatches))


def check_vertex_formula(
    g: MetrizedGraph, divisor: Divisor, matrix: ValueMatrix | None = None
) -> CheckReport:
    """Closed forms must reproduce the direct pseudoinverse formula at vertices.

    The direct value is (sum_s a_s j_s(p, q) + 4 tau - r(p, q)) / (deg + 2)
    minus the normalization constant, computed without any edge functions.
    """
    check_divisor(g, divisor)
    deg = divisor.degree
    if deg == -2:
        raise BadDegree("divisor degree -2 admits no admissible measure")
    if matrix is None:
        matrix = value_matrix(g, divisor)
    lp = pinv(g)
    tau = tau_constant(g)
    shift = c_mu(g, divisor)
    comparisons = 0
    mismatches = []
    for p in range(g.n_vertices):
        rp = point_of_vertex(g, p)
        for q in range(g.n_vertices):
            comparisons += 1
            weighted = Fraction(0)
            for s, a_s in enumerate(divisor.coefficients):
                if a_s:
                    weighted += a_s * voltage_at_vertices(lp, s, p, q)
            direct = (
                weighted + 4 * tau - resistance_at_vertices(lp, p, q)
            ) / (deg + 2) - shift
            got = matrix.evaluate(rp, point_of_vertex(g, q))
            if got != direct:
                mismatches.append(CheckMismatch(f"g(v{p}, v{q})", direct, got))
    return CheckReport("vertex formula", comparisons, tuple(mismatches))
