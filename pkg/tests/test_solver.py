import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.errors import InstanceTooLarge, PreconditionError
from coarse_ep.forest_helly import ell_star
from coarse_ep.generators import random_gnm
from coarse_ep.graph_core import Cycle, ball, build_graph, cycle_rank
from coarse_ep.machinery import all_the_ys
from coarse_ep.oracle import max_d_packing, min_ball_hitting
from coarse_ep.solver import (
    Certificate,
    SeedState,
    SolverConfig,
    enumerate_admissible,
    f_bound,
    g_bound,
    hitting_certificate,
    packing_certificate,
    seed_cycles,
    solve,
    verify,
)

from conftest import cycle_graph, graphs, path_edges

TRIANGLE = build_graph(3, cycle_graph(3))
TREE = build_graph(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])


def looped_ten_cycle(outer=10):
    """A 10-cycle with legs of length 5 at 4 and 6, joined far away by a path."""
    edges = cycle_graph(10) + path_edges([4, 10, 11, 12, 13, 14]) + path_edges([6, 15, 16, 17, 18, 19])
    edges += path_edges([14] + list(range(20, 20 + outer)) + [19])
    return build_graph(20 + outer, edges)


def handles(h, length, gap=4):
    """A long cycle with ``h`` handles of ``length`` edges, one every ``gap`` vertices."""
    N = h * gap
    edges = cycle_graph(N)
    nxt = N
    for t in range(h):
        chain = [gap * t] + list(range(nxt, nxt + length - 1)) + [gap * t + 1]
        nxt += length - 1
        edges += path_edges(chain)
    return build_graph(nxt, edges)


def test_bounds():
    assert g_bound(1) == 19 and g_bound(3) == 57
    assert f_bound(1) == 6 + ell_star(2, 3) == 18102416
    assert f_bound(2) > f_bound(1)
    with pytest.raises(PreconditionError):
        f_bound(0)
    with pytest.raises(PreconditionError):
        g_bound(0)


def test_forest_gets_empty_hitting_set():
    cert = solve(TREE, 2, 1)
    assert cert.tag == "hitting" and cert.X == ()
    assert verify(TREE, cert, 2, 1)


def test_triangle_k1_packs():
    cert = solve(TRIANGLE, 1, 1)
    assert cert.is_packing and cert.cycles[0].vertex_set == {0, 1, 2}


def test_triangle_k2_hits():
    cert = solve(TRIANGLE, 2, 1)
    assert cert.tag == "hitting" and 1 <= len(cert.X) <= f_bound(2)
    assert cert.radius == 19
    rest = set(range(3)) - ball(TRIANGLE, cert.X, 38)
    assert cycle_rank(TRIANGLE, rest) == 0
    assert min_ball_hitting(TRIANGLE, 19) == 1


def test_k_zero_is_empty_packing():
    cert = solve(TRIANGLE, 0, 1)
    assert cert.is_packing and cert.cycles == ()
    with pytest.raises(PreconditionError):
        solve(TRIANGLE, 1, 0)


def test_seed_examples():
    assert seed_cycles(TREE, 2, 1) == SeedState((), ())
    assert isinstance(seed_cycles(TRIANGLE, 1, 1), Certificate)
    state = seed_cycles(TRIANGLE, 2, 1)
    assert isinstance(state, SeedState) and len(state.C_list) + len(state.Dprime_list) == 1


def test_enumerate_admissible_examples():
    d, r = 1, 6
    G = looped_ten_cycle()
    C1 = Cycle(tuple(range(10)))
    seed = SeedState((C1,), ())
    tuples = enumerate_admissible(G, seed, all_the_ys(G, [C1], r, d, 2), 2, d)
    assert sorted((t.e, t.e2) for t in tuples) == [((14, 20), (19, 29)), ((19, 29), (14, 20))]
    for t in tuples:
        assert len(t.P1) - 1 == len(t.P2) - 1 == r - d

    # One exit edge only: cut the outer path.
    H = build_graph(G.n, [e for e in G.edges() if e != (24, 25)])
    assert enumerate_admissible(H, seed, all_the_ys(H, [C1], r, d, 2), 2, d) == []

    # No seeds at all.
    empty = SeedState((), ())
    assert enumerate_admissible(TREE, empty, all_the_ys(TREE, [], r, d, 2), 2, d) == []


def test_enumeration_cap():
    G = looped_ten_cycle()
    C1 = Cycle(tuple(range(10)))
    control = all_the_ys(G, [C1], 6, 1, 2)
    with pytest.raises(InstanceTooLarge):
        enumerate_admissible(G, SeedState((C1,), ()), control, 2, 1, max_tuples=1)


def test_verify_reasons():
    G = build_graph(7, cycle_graph(3) + cycle_graph(3, 3) + [(2, 6), (6, 3)])
    bad_hit = hitting_certificate(2, 1, [])
    verdict = verify(G, bad_hit, 2, 1)
    assert not verdict and "not a forest" in verdict.reason
    close = packing_certificate(2, 2, [Cycle((0, 1, 2)), Cycle((3, 4, 5))])
    verdict = verify(G, close, 2, 2)
    assert not verdict and "distance not > d" in verdict.reason
    assert verify(G, packing_certificate(2, 1, close.cycles), 2, 1)
    assert not verify(G, close, 3, 2)
    fake = packing_certificate(1, 1, [Cycle((0, 1, 6))])
    assert "not a cycle" in verify(G, fake, 1, 1).reason


def test_certificate_json_round_trip():
    for cert in (solve(TRIANGLE, 1, 2), solve(TRIANGLE, 2, 1), solve(TREE, 1, 1)):
        assert Certificate.from_json(cert.to_json()) == cert
    with pytest.raises(PreconditionError):
        Certificate.from_json("not json")
    with pytest.raises(PreconditionError):
        Certificate.from_json('{"type": "other"}')
    with pytest.raises(PreconditionError):
        Certificate.from_json("[1, 2]")


def test_handles_graph_packs_through_helly():
    G = handles(24, 20)
    cert = solve(G, 2, 1)
    assert cert.is_packing and len(cert.cycles) == 2
    assert verify(G, cert, 2, 1)
    with pytest.raises(InstanceTooLarge):
        solve(G, 2, 1, SolverConfig(max_good_tuples=5))


def test_coarse_grouping_mode():
    G = handles(24, 20)
    cert = solve(G, 2, 1, SolverConfig(refined=False))
    assert verify(G, cert, 2, 1)


def test_deterministic():
    G = random_gnm(40, 55, 3)
    assert solve(G, 2, 1).to_json() == solve(G, 2, 1).to_json()


@given(graphs(max_n=11, max_extra=5), st.integers(1, 3), st.integers(1, 2))
def test_solve_agrees_with_oracle(G, k, d):
    cert = solve(G, k, d)
    assert verify(G, cert, k, d)
    if cert.is_packing:
        assert max_d_packing(G, d, stop_at=k) >= k
    else:
        assert len(set(cert.X)) <= f_bound(k)


@given(st.integers(10, 60), st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 2))
def test_solve_on_sparse_random_graphs(n, seed, k, d):
    G = random_gnm(n, min(n + n // 3, n * (n - 1) // 2), seed)
    cert = solve(G, k, d)
    assert verify(G, cert, k, d)
