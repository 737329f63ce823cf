import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.acceptance import random_subcubic
from coarse_ep.errors import PreconditionError
from coarse_ep.graph_core import build_graph
from coarse_ep.oracle import max_d_packing
from coarse_ep.subcubic import SubcubicGraph, find_disjoint_cycles, s_bound, shortest_cycle, two_core

from conftest import cycle_graph, path_edges

K4_EDGES = [(a, b) for a in range(4) for b in range(a + 1, 4)]


def test_s_bound_values():
    assert s_bound(1) == 2
    assert s_bound(2) == 40
    assert s_bound(3) == 75
    assert s_bound(4) == 112
    with pytest.raises(PreconditionError):
        s_bound(0)


def test_s_bound_is_increasing():
    values = [s_bound(k) for k in range(1, 60)]
    assert values == sorted(values) and len(set(values)) == len(values)


def test_k4_one_triangle():
    (C,) = find_disjoint_cycles(build_graph(4, K4_EDGES), 1)
    assert len(C) == 3


def test_two_k4_copies():
    edges = K4_EDGES + [(a + 4, b + 4) for a, b in K4_EDGES]
    A, B = find_disjoint_cycles(build_graph(8, edges), 2)
    assert max(A.vertices) < 4 <= min(B.vertices)


def test_theta_graph():
    G = build_graph(5, path_edges([0, 2, 1]) + path_edges([0, 3, 1]) + path_edges([0, 4, 1]))
    (C,) = find_disjoint_cycles(G, 1)
    assert C.is_valid_in(G) and {0, 1} <= C.vertex_set


def test_backtracking_beats_greedy():
    # Two 5-cycles joined by edges 0-5 and 1-6.  Greedy takes the 4-cycle
    # 0,1,6,5 first and kills both 5-cycles; backtracking finds them.
    G = build_graph(10, cycle_graph(5) + cycle_graph(5, 5) + [(0, 5), (1, 6)])
    A, B = find_disjoint_cycles(G, 2)
    assert {A.vertex_set, B.vertex_set} == {frozenset(range(5)), frozenset(range(5, 10))}


def test_rejects_bad_degrees_and_missing_cycles():
    with pytest.raises(PreconditionError, match="degree"):
        SubcubicGraph(build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)]))
    with pytest.raises(PreconditionError):
        find_disjoint_cycles(build_graph(3, cycle_graph(3)), 2)


def test_two_core_and_shortest_cycle():
    G = build_graph(7, cycle_graph(4) + [(0, 4), (4, 5), (5, 6)])
    assert two_core(G, set(range(7))) == {0, 1, 2, 3}
    assert shortest_cycle(G, {0, 1, 2, 3}).vertices == (0, 1, 2, 3)
    assert shortest_cycle(G, {4, 5, 6}) is None


@given(st.integers(3, 16), st.integers(0, 10**6), st.integers(1, 3))
def test_matches_oracle(n, seed, k):
    G = random_subcubic(n, random.Random(seed))
    feasible = max_d_packing(G, 0, stop_at=k) >= k
    try:
        found = find_disjoint_cycles(G, k)
    except PreconditionError:
        assert not feasible
        return
    assert feasible and len(found) == k
    for a, b in itertools.combinations(found, 2):
        assert not (a.vertex_set & b.vertex_set)
    assert all(c.is_valid_in(G) for c in found)
