import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarse_ep.acceptance import refinement_violation
from coarse_ep.cycle_tools import (
    Refinement,
    is_d_packing,
    is_r_unicyclic,
    short_or_unicyclic,
)
from coarse_ep.errors import PreconditionError
from coarse_ep.generators import random_gnm
from coarse_ep.graph_core import Cycle, ball, build_graph, find_cycle_avoiding
from coarse_ep.oracle import enumerate_cycles

from conftest import cycle_graph, graphs, path_edges

K4 = build_graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])


def barbell(gap):
    """Triangles {0,1,2} and {3,4,5} with a path of ``gap`` edges from 2 to 3."""
    inner = list(range(6, 6 + gap - 1))
    return build_graph(6 + gap - 1, cycle_graph(3) + cycle_graph(3, 3) + path_edges([2] + inner + [3]))


def test_is_d_packing_examples():
    G = barbell(3)
    pair = [Cycle((0, 1, 2)), Cycle((3, 4, 5))]
    assert is_d_packing(G, pair, 2)
    assert not is_d_packing(G, pair, 3)
    assert is_d_packing(G, pair[:1], 100)


def test_is_d_packing_names_bad_cycle():
    with pytest.raises(PreconditionError, match="#1"):
        is_d_packing(barbell(3), [Cycle((0, 1, 2)), Cycle((0, 3, 4))], 1)


def test_is_r_unicyclic_examples():
    assert is_r_unicyclic(K4, Cycle((0, 1, 2)), 0)
    assert not is_r_unicyclic(K4, Cycle((0, 1, 2)), 1)
    G = build_graph(7, cycle_graph(6) + [(0, 6)])
    assert is_r_unicyclic(G, Cycle(tuple(range(6))), 1)


def test_refinement_on_unicyclic_graph_returns_input():
    G = build_graph(8, cycle_graph(5) + [(0, 5), (5, 6), (6, 7)])
    C = Cycle(tuple(range(5)))
    for r in range(4):
        out = short_or_unicyclic(G, C, r)
        assert out.tag is Refinement.UNICYCLIC and out.cycle == C


def test_refinement_k4_is_short():
    out = short_or_unicyclic(K4, Cycle((0, 1, 2)), 1)
    assert out.tag is Refinement.SHORT
    assert len(out.cycle) <= 8 and out.cycle.vertex_set <= ball(K4, {0, 1, 2}, 3)


def test_refinement_ignores_far_lobe():
    # C6 on 0..5, a path of 8 edges from 0, and a chorded 4-cycle at its end.
    tail = list(range(6, 14))
    lobe = [(13, 14), (14, 15), (15, 16), (16, 13), (13, 15)]
    G = build_graph(17, cycle_graph(6) + path_edges([0] + tail) + lobe)
    C = Cycle(tuple(range(6)))
    out = short_or_unicyclic(G, C, 2)
    assert out.tag is Refinement.UNICYCLIC and out.cycle == C


@given(graphs(min_n=3, max_n=14, max_extra=8), st.integers(1, 3), st.data())
def test_refinement_invariants(G, r, data):
    C = find_cycle_avoiding(G, data.draw(st.sets(st.integers(0, G.n - 1), max_size=2)))
    if C is None:
        return
    assert refinement_violation(G, C, r) == ""
    out = short_or_unicyclic(G, C, r)
    assert 1 <= out.iterations <= len(C)
    assert short_or_unicyclic(G, C, r) == out


def test_refinement_every_cycle_of_small_graphs():
    for seed in range(30):
        G = random_gnm(9, 14, seed)
        for C in enumerate_cycles(G)[:40]:
            for r in (1, 2):
                assert refinement_violation(G, C, r) == ""
