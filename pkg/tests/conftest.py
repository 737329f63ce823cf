import itertools
import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coarse_ep.graph_core import build_graph

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", deadline=None, max_examples=500, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=12, max_extra=6):
    """Small random graphs: a random edge subset with at most n + max_extra edges."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return build_graph(n, [])
    m = draw(st.integers(0, min(len(pairs), n + max_extra)))
    edges = draw(st.lists(st.sampled_from(pairs), min_size=m, max_size=m, unique=True))
    return build_graph(n, edges)


def cycle_graph(n, offset=0):
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


def path_edges(vertices):
    return list(zip(vertices, vertices[1:]))
