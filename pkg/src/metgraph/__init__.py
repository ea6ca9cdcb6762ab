"""Exact potential theory on metrized graphs.

Admissible Green functions, tau constants, effective resistances and
epsilon invariants over rational edge lengths, all in exact arithmetic.
"""

from . import cli, graph, green, invariants, linalg, oracle, potential
from .errors import (
    BadDegree,
    GraphDisconnected,
    GraphFormatError,
    MetgraphError,
    NonpositiveLength,
    NotABridge,
    NotAdequate,
    PointOutOfRange,
    SingularShift,
)
from .graph import (
    ConnectivityEntry,
    ConnectivityMatrix,
    Divisor,
    Edge,
    EntryKind,
    GraphPoint,
    MetrizedGraph,
    NeighbourPair,
    Side,
    bridge_side,
    bridges,
    canonical_divisor,
    closest_neighbours,
    connectivity_matrix,
    is_bridge,
    make_adequate,
    point_of_vertex,
    representations,
    shortest_distance,
    validate_adequate,
    validate_point,
    vertex_at,
)
from .green import EdgePairFunction, ValueMatrix, evaluate_green, value_matrix
from .invariants import (
    CheckReport,
    check_representation_independence,
    check_vertex_formula,
    epsilon_via_green,
    epsilon_via_resistance,
)
from .linalg import (
    RationalMatrix,
    laplacian,
    pinv,
    pseudo_inverse,
    resistance_at_vertices,
    voltage_at_vertices,
)
from .oracle import (
    SubdividedGraph,
    oracle_green,
    oracle_resistance,
    subdivide_at_points,
)
from .potential import (
    EdgeFunction,
    TauFunctionPair,
    c_mu,
    r_D_on_edge,
    resistance_point,
    resistance_to_divisor,
    tau_constant,
    tau_function_pair,
    vertex_resistance,
    vertex_voltage,
)

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every per-graph cache; mainly useful for timing fresh runs."""
    for fn in (
        graph.bridges,
        graph._tail_side_vertices,
        graph._distances_from,
        graph.connectivity_matrix,
        linalg.laplacian,
        linalg.pinv,
        potential.tau_constant,
        potential.r_D_on_edge,
        potential.c_mu,
        green.value_matrix,
    ):
        fn.cache_clear()
