import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.bfs_unicycle import build_bfs_unicycle, descendants, leg, non_tree_edges
from coarse_ep.errors import PreconditionError
from coarse_ep.graph_core import Cycle, ball, bfs_distances, build_graph, cycle_rank, find_cycle_avoiding

from conftest import cycle_graph, graphs, path_edges

C4 = Cycle((0, 1, 2, 3))


def test_already_unicyclic():
    G = build_graph(5, cycle_graph(4) + [(0, 4)])
    U = build_bfs_unicycle(G, C4, 1)
    assert U.edges() == G.edges()
    assert U.parent == {4: 0}
    assert non_tree_edges(G, U) == []


def test_min_id_parent():
    G = build_graph(5, cycle_graph(4) + [(1, 4), (3, 4)])
    U = build_bfs_unicycle(G, C4, 1)
    assert U.parent[4] == 1
    assert (1, 4) in U.edges()
    assert non_tree_edges(G, U) == [(3, 4)]


def test_radius_zero_is_the_cycle():
    G = build_graph(6, cycle_graph(4) + [(0, 4), (4, 5)])
    U = build_bfs_unicycle(G, C4, 0)
    assert U.edges() == C4.edges() and U.parent == {}


def test_k4_non_tree_edges():
    K4 = build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    U = build_bfs_unicycle(K4, Cycle((0, 1, 2)), 1)
    assert len(non_tree_edges(K4, U)) == cycle_rank(K4) - 1 == 2


def test_descendants_and_legs():
    # Triangle 0,1,2; chain 1-5-6-7 and a leaf 3 on 0.
    G = build_graph(8, cycle_graph(3) + [(0, 3)] + path_edges([1, 5, 6, 7]))
    U = build_bfs_unicycle(G, Cycle((0, 1, 2)), 3)
    assert descendants(U, 3) == {3}
    assert descendants(U, 2) == {2}
    assert descendants(U, 5) == {5, 6, 7}
    assert leg(U, 0) == [0]
    assert leg(U, 3) == [3, 0]
    assert leg(U, 7) == [7, 6, 5, 1]
    with pytest.raises(PreconditionError):
        descendants(build_bfs_unicycle(G, Cycle((0, 1, 2)), 1), 7)


def test_dump_lists_every_vertex():
    G = build_graph(5, cycle_graph(4) + [(0, 4)])
    table = build_bfs_unicycle(G, C4, 1).dump().splitlines()
    assert table[0] == "vertex parent depth" and len(table) == 6


@given(graphs(min_n=3, max_n=14, max_extra=8), st.integers(0, 3))
def test_bfs_unicycle_invariants(G, r):
    C = find_cycle_avoiding(G)
    if C is None:
        return
    U = build_bfs_unicycle(G, C, r)
    region = ball(G, C.vertices, r)
    assert U.vertices == region
    assert len(U.edges()) == len(region)
    assert cycle_rank(build_graph(G.n, U.edges()), region) == 1
    assert U.depth == bfs_distances(U.host, C.vertices)
    for v, p in U.parent.items():
        assert U.depth[p] == U.depth[v] - 1 and G.has_edge(v, p)
        assert len(leg(U, v)) - 1 == U.depth[v]
    for u, v in non_tree_edges(G, U):
        assert u in region and v in region and G.has_edge(u, v)
    # Subtrees hanging from distinct depth-1 vertices are disjoint.
    tops = [v for v in U.vertices if U.depth[v] == 1]
    seen = set()
    for v in tops:
        sub = descendants(U, v)
        assert not (sub & seen)
        seen |= sub
