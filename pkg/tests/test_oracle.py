import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.errors import LimitExceeded
from coarse_ep.graph_core import build_graph, cycle_rank
from coarse_ep.oracle import OracleLimits, enumerate_cycles, max_d_packing, min_ball_hitting

from conftest import cycle_graph, graphs, path_edges

K4 = build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
TREE = build_graph(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])


def barbell(gap):
    inner = list(range(6, 6 + gap - 1))
    return build_graph(6 + gap - 1, cycle_graph(3) + cycle_graph(3, 3) + path_edges([2] + inner + [3]))


def test_enumerate_cycles_examples():
    assert len(enumerate_cycles(build_graph(4, cycle_graph(4)))) == 1
    cycles = enumerate_cycles(K4)
    assert len(cycles) == 7
    assert sorted(len(c) for c in cycles) == [3, 3, 3, 3, 4, 4, 4]
    assert enumerate_cycles(TREE) == []


def test_max_d_packing_examples():
    G = barbell(3)
    assert max_d_packing(G, 2) == 2
    assert max_d_packing(G, 3) == 1
    assert max_d_packing(TREE, 5) == 0


def test_min_ball_hitting_examples():
    assert min_ball_hitting(TREE, 0) == 0
    assert min_ball_hitting(build_graph(3, cycle_graph(3)), 0) == 1
    # Triangles at distance 3 > 2 need two centres at radius 1.
    assert min_ball_hitting(barbell(3), 1) == 2
    # At distance 2 a single centre on the connecting path suffices.
    assert min_ball_hitting(barbell(2), 1) == 1


def test_limits_refuse_loudly(monkeypatch):
    big = build_graph(20, cycle_graph(20))
    with pytest.raises(LimitExceeded):
        enumerate_cycles(big)
    with pytest.raises(LimitExceeded):
        min_ball_hitting(big, 1)
    with pytest.raises(LimitExceeded, match="cycles"):
        enumerate_cycles(K4, OracleLimits(max_vertices=10, max_cycles=3))
    monkeypatch.setenv("COARSE_EP_LIMITS", "25,10")
    assert OracleLimits.from_env() == OracleLimits(25, 10)
    assert len(enumerate_cycles(big)) == 1


def _brute_cycles(G):
    """Cycles as edge sets: connected 2-regular edge subsets."""
    edges = G.edges()
    found = set()
    for size in range(3, G.n + 1):
        for subset in itertools.combinations(edges, size):
            deg = {}
            for u, v in subset:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if any(x != 2 for x in deg.values()):
                continue
            H = build_graph(G.n, subset)
            if cycle_rank(H) == 1:
                found.add(frozenset(subset))
    return found


@given(graphs(max_n=7, max_extra=4))
def test_enumeration_matches_brute_force(G):
    cycles = enumerate_cycles(G)
    assert len(set(cycles)) == len(cycles)
    assert {frozenset(c.edges()) for c in cycles} == _brute_cycles(G)


@given(graphs(max_n=9, max_extra=4))
def test_monotone_in_d_and_radius(G):
    packs = [max_d_packing(G, d) for d in range(4)]
    assert packs == sorted(packs, reverse=True)
    hits = [min_ball_hitting(G, r) for r in range(3)]
    assert hits == sorted(hits, reverse=True)


@given(graphs(max_n=9, max_extra=4), st.integers(0, 3))
def test_stop_at_saturates(G, d):
    full = max_d_packing(G, d)
    assert max_d_packing(G, d, stop_at=1) >= min(full, 1)
    assert max_d_packing(G, d, stop_at=full + 1) == full
