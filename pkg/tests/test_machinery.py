import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.bfs_unicycle import build_bfs_unicycle, non_tree_edges
from coarse_ep.cycle_tools import is_d_packing
from coarse_ep.errors import PreconditionError
from coarse_ep.generators import random_gnm
from coarse_ep.graph_core import Cycle, ball, build_graph
from coarse_ep.machinery import (
    all_the_ys,
    control_bound,
    double_unicycle,
    fundamental_cycles,
    greedy_independent,
    grow_unicycle,
    half_s,
)
from coarse_ep.solver import SeedState, seed_cycles
from coarse_ep.subcubic import s_bound

from conftest import cycle_graph, path_edges

C6 = Cycle(tuple(range(6)))
TRI_A = Cycle((0, 1, 2))


def two_triangles(gap):
    """Triangles {0,1,2} and {3,4,5} joined by a path of ``gap`` edges from 2 to 3."""
    inner = list(range(6, 6 + gap - 1))
    G = build_graph(6 + gap - 1, cycle_graph(3) + cycle_graph(3, 3) + path_edges([2] + inner + [3]))
    return G, TRI_A, Cycle((3, 4, 5))


def test_half_s():
    assert half_s(1) == 1 and half_s(2) == 20 and half_s(3) == 38


def test_greedy_independent_dominates():
    near = [frozenset({0, 1}), frozenset({1, 2}), frozenset({5})]
    own = [frozenset({0}), frozenset({1}), frozenset({5})]
    assert greedy_independent(near, own) == [0, 2]


def test_grow_without_non_tree_edges():
    G = build_graph(6, cycle_graph(6))
    U = build_bfs_unicycle(G, C6, 1)
    out = grow_unicycle(G, C6, U, 1, 1, 2)
    assert not out.is_packing and out.X == frozenset() and out.Y == frozenset()


def test_grow_single_non_tree_edge():
    G = build_graph(9, cycle_graph(6) + [(1, 6), (2, 8), (6, 7), (7, 8)])
    U = build_bfs_unicycle(G, C6, 2)
    assert non_tree_edges(G, U) == [(7, 8)]
    out = grow_unicycle(G, C6, U, 2, 1, 1)
    assert not out.is_packing
    assert out.X == {7, 8}
    assert out.Y in ({7}, {8})


def test_grow_null_edge_packs_for_k1():
    # A triangle hanging at depth 1 off the cycle gives a C-null non-tree edge.
    G = build_graph(9, cycle_graph(6) + [(0, 6), (6, 7), (6, 8), (7, 8)])
    U = build_bfs_unicycle(G, C6, 3)
    infos = fundamental_cycles(G, C6, U)
    assert [f.null for f in infos] == [True]
    out = grow_unicycle(G, C6, U, 3, 1, 1)
    assert out.is_packing and out.packing == (Cycle((6, 7, 8)),)


def test_grow_rejects_bad_preconditions():
    G = build_graph(6, cycle_graph(6))
    U = build_bfs_unicycle(G, C6, 1)
    with pytest.raises(PreconditionError):
        grow_unicycle(G, C6, U, 1, 2, 1)
    H = build_graph(8, cycle_graph(6) + [(0, 6), (6, 7)])
    with pytest.raises(PreconditionError, match="span"):
        grow_unicycle(H, C6, build_bfs_unicycle(H, C6, 2), 1, 1, 1)
    K4 = build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    with pytest.raises(PreconditionError, match="unicyclic"):
        grow_unicycle(K4, TRI_A, build_bfs_unicycle(K4, TRI_A, 1), 1, 1, 1)


def _unicycles(G, C1, C2, r):
    return build_bfs_unicycle(G, C1, r), build_bfs_unicycle(G, C2, r)


def test_double_far_apart():
    G, C1, C2 = two_triangles(10)
    U1, U2 = _unicycles(G, C1, C2, 2)
    out = double_unicycle(G, C1, U1, frozenset(), C2, U2, frozenset(), 2, 1, 2)
    assert not out.is_packing and out.X == frozenset() and out.Y == frozenset()


def test_double_midpoint_of_long_path():
    d, r = 1, 6
    G, C1, C2 = two_triangles(2 * r)
    U1, U2 = _unicycles(G, C1, C2, r)
    out = double_unicycle(G, C1, U1, frozenset(), C2, U2, frozenset(), r, d, 2)
    assert not out.is_packing
    assert out.Y == ball(G, C1.vertices, r) & ball(G, C2.vertices, r)
    assert len(out.Y) == 1
    assert len(out.X) < s_bound(2)
    assert out.Y <= ball(G, out.X, 2 * r + d)


def test_double_interesting_element_packs_for_k1():
    G, C1, C2 = two_triangles(12)
    U1, U2 = _unicycles(G, C1, C2, 6)
    out = double_unicycle(G, C1, U1, frozenset(), C2, U2, frozenset(), 6, 1, 1)
    assert out.is_packing and len(out.packing) == 1


def test_double_reports_distance():
    G, C1, C2 = two_triangles(2)
    U1, U2 = _unicycles(G, C1, C2, 2)
    with pytest.raises(PreconditionError, match="distance 2"):
        double_unicycle(G, C1, U1, frozenset(), C2, U2, frozenset(), 2, 1, 2)


def test_all_the_ys_examples():
    G = build_graph(9, cycle_graph(6) + [(0, 6), (6, 7), (7, 8)])
    empty = all_the_ys(G, [], 2, 1, 2)
    assert not empty.is_packing and empty.X == frozenset() and empty.unicycles == ()
    out = all_the_ys(G, [C6], 2, 1, 2)
    assert not out.is_packing and out.X == frozenset() and out.Y == frozenset()
    G2, C1, C2 = two_triangles(5)
    assert all_the_ys(G2, [C1, C2], 2, 1, 2).packing == (C1, C2)


def test_uncovered_overlap_vertex_is_added_to_x():
    # Vertex 9 lies in both balls, but its path between the cycles runs
    # through the subtree below Y_1 along its U_2-leg only.
    G = random_gnm(46, 44, 27)
    C1 = Cycle.from_sequence((0, 25, 8, 31))
    C2 = Cycle.from_sequence((19, 27, 34, 45))
    out = all_the_ys(G, [C1, C2], 6, 1, 3)
    assert not out.is_packing
    assert out.extra == {9}
    assert len(out.X - out.extra) < control_bound(3)
    assert out.Y <= ball(G, out.X, 13)


@given(st.integers(10, 50), st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 2))
def test_all_the_ys_on_seed_cycles(n, seed, k, d):
    G = random_gnm(n, min(n + n // 4, n * (n - 1) // 2), seed)
    state = seed_cycles(G, k, d)
    if not isinstance(state, SeedState):
        return
    r = 6 * d
    out = all_the_ys(G, state.C_list, r, d, k)
    if out.is_packing:
        assert len(out.packing) == k and is_d_packing(G, out.packing, d)
        return
    balls = [ball(G, C.vertices, r) for C in state.C_list]
    for U in out.unicycles:
        for e in non_tree_edges(G, U):
            assert out.Y.intersection(e)
    for a in range(len(balls)):
        for b in range(a + 1, len(balls)):
            assert balls[a] & balls[b] <= out.Y
    assert out.Y <= ball(G, out.X, 2 * r + d)
    assert len(out.X - out.extra) < control_bound(k)
