"""Deterministic instance generators.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister
MT19937), so a ``(kind, params, seed)`` triple always yields the same graph
on every platform.
"""

from __future__ import annotations

import itertools
import random

from .errors import PreconditionError
from .graph_core import Graph, build_graph

KINDS = ("grid", "random-gnm", "disjoint-cycles", "subdivision")


def _positive(**params: int) -> None:
    for name, value in params.items():
        if value < 1:
            raise PreconditionError(f"{name} must be positive, got {value}")


def grid(rows: int, cols: int) -> Graph:
    _positive(rows=rows, cols=cols)
    idx = lambda a, b: a * cols + b  # noqa: E731
    edges = [(idx(a, b), idx(a, b + 1)) for a in range(rows) for b in range(cols - 1)]
    edges += [(idx(a, b), idx(a + 1, b)) for a in range(rows - 1) for b in range(cols)]
    return build_graph(rows * cols, edges)


def random_gnm(n: int, m: int, seed: int = 0) -> Graph:
    _positive(n=n)
    pairs = list(itertools.combinations(range(n), 2))
    if not 0 <= m <= len(pairs):
        raise PreconditionError(f"m must lie in [0, {len(pairs)}] for n={n}, got {m}")
    rng = random.Random(seed)
    return build_graph(n, rng.sample(pairs, m))


def disjoint_cycles(k: int, length: int, gap: int) -> Graph:
    """``k`` vertex-disjoint cycles of the given length as separate
    components, so any two are at infinite distance, which exceeds ``gap``."""
    _positive(k=k)
    if length < 3:
        raise PreconditionError(f"cycle length must be at least 3, got {length}")
    if gap < 0:
        raise PreconditionError(f"gap must be nonnegative, got {gap}")
    edges = []
    for c in range(k):
        base = c * length
        edges += [(base + i, base + (i + 1) % length) for i in range(length)]
    return build_graph(k * length, edges)


def subdivision(n: int, m: int, t: int, seed: int = 0) -> Graph:
    """A ``random_gnm(n, m, seed)`` graph with every edge subdivided ``t`` times."""
    if t < 0:
        raise PreconditionError(f"t must be nonnegative, got {t}")
    base = random_gnm(n, m, seed)
    edges = []
    nxt = n
    for u, v in base.edges():
        chain = [u] + list(range(nxt, nxt + t)) + [v]
        nxt += t
        edges += list(zip(chain, chain[1:]))
    return build_graph(nxt, edges)


def generate(kind: str, params: dict[str, int], seed: int = 0) -> Graph:
    try:
        if kind == "grid":
            return grid(params["rows"], params["cols"])
        if kind == "random-gnm":
            return random_gnm(params["n"], params["m"], seed)
        if kind == "disjoint-cycles":
            return disjoint_cycles(params["k"], params["length"], params["gap"])
        if kind == "subdivision":
            return subdivision(params["n"], params["m"], params["t"], seed)
    except KeyError as exc:
        raise PreconditionError(f"{kind} needs parameter {exc.args[0]!r}") from None
    raise PreconditionError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
