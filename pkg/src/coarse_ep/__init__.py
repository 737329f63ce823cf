"""Certified coarse packing-or-hitting dichotomy for cycles.

``solve(G, k, d)`` returns either ``k`` cycles pairwise at distance more
than ``d`` or a set ``X`` with ``|X| <= f(k)`` such that deleting every
vertex within ``19 d`` of ``X`` leaves a forest.  ``verify`` re-checks
either certificate from scratch.
"""

from .errors import InstanceTooLarge, InvariantViolation, LimitExceeded, PreconditionError
from .graph_core import Cycle, Graph, ball, build_graph, distance, read_graph, write_graph
from .solver import Certificate, SolverConfig, f_bound, g_bound, solve, verify

__all__ = [
    "Certificate",
    "Cycle",
    "Graph",
    "InstanceTooLarge",
    "InvariantViolation",
    "LimitExceeded",
    "PreconditionError",
    "SolverConfig",
    "ball",
    "build_graph",
    "distance",
    "f_bound",
    "g_bound",
    "read_graph",
    "solve",
    "verify",
    "write_graph",
]
