"""Exhaustive ground truth for small graphs.

These routines are deliberately naive: simple-cycle enumeration, an exact
branch-and-bound independent set on the cycle conflict graph, and subset
enumeration for ball hitting sets.  They refuse (loudly) to run on instances
beyond :class:`OracleLimits`.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .errors import LimitExceeded, PreconditionError
from .graph_core import Cycle, Graph, bfs_distances, cycle_rank

ENV_VAR = "COARSE_EP_LIMITS"


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = 18
    max_cycles: int = 5000

    @classmethod
    def from_env(cls) -> OracleLimits:
        """Read ``COARSE_EP_LIMITS="max_vertices,max_cycles"`` if set."""
        raw = os.environ.get(ENV_VAR)
        if not raw:
            return cls()
        try:
            a, b = (int(tok) for tok in raw.split(","))
        except ValueError:
            raise PreconditionError(
                f"{ENV_VAR} must look like 'max_vertices,max_cycles', got {raw!r}"
            ) from None
        return cls(a, b)

    def check_graph(self, G: Graph) -> None:
        if G.n > self.max_vertices:
            raise LimitExceeded(
                f"oracle refuses graphs with {G.n} > {self.max_vertices} vertices"
            )


def enumerate_cycles(G: Graph, limits: OracleLimits | None = None) -> list[Cycle]:
    """All simple cycles of ``G`` in canonical form, sorted."""
    limits = limits or OracleLimits.from_env()
    limits.check_graph(G)
    adj = G.adjacency
    found: list[Cycle] = []
    for s in range(G.n):
        # Paths s -> ... using only vertices > s; each cycle is seen twice
        # (once per direction) and kept when path[1] < path[-1].
        path = [s]
        on_path = {s}
        stack = [iter(w for w in adj[s] if w > s)]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                if len(path) >= 3 and s in adj[w] and path[1] < w:
                    found.append(Cycle(tuple(path)))
                    if len(found) > limits.max_cycles:
                        raise LimitExceeded(
                            f"more than {limits.max_cycles} cycles; oracle refuses"
                        )
                stack.append(iter(x for x in adj[w] if x > s))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    # Sequences above are already canonical: start at min, then the smaller
    # neighbour; normalise anyway so the invariant is not implicit.
    return sorted({Cycle.from_sequence(c.vertices) for c in found})


def max_independent_set_size(adj_masks: list[int], stop_at: int | None = None) -> int:
    """Exact maximum independent set size of a graph given as bitmasks.

    Branch and bound: branch on a maximum-degree candidate, prune with a
    greedy clique-cover upper bound.  ``stop_at`` returns early once an
    independent set of that size is known.
    """
    n = len(adj_masks)
    best = 0

    def clique_cover_bound(cand: int) -> int:
        bound = 0
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            clique = low
            common = adj_masks[v] & rest
            while common:
                lw = common & -common
                w = lw.bit_length() - 1
                clique |= lw
                common &= adj_masks[w]
            rest &= ~clique
            bound += 1
        return bound

    def search(cand: int, size: int) -> None:
        nonlocal best
        if stop_at is not None and best >= stop_at:
            return
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        if size + clique_cover_bound(cand) <= best:
            return
        pick, pick_deg = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            deg = (adj_masks[v] & cand).bit_count()
            if deg > pick_deg:
                pick, pick_deg = v, deg
            rest ^= low
        if pick_deg == 0:
            best = max(best, size + cand.bit_count())
            return
        bit = 1 << pick
        search(cand & ~adj_masks[pick] & ~bit, size + 1)
        search(cand & ~bit, size)

    search((1 << n) - 1, 0)
    return best


def _vertex_mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def conflict_masks(G: Graph, cycles: list[Cycle], d: int) -> list[int]:
    """Bitmask adjacency of the graph on ``cycles`` joining pairs at distance <= d."""
    near = [_vertex_mask(bfs_distances(G, c.vertices, cutoff=d)) for c in cycles]
    own = [_vertex_mask(c.vertices) for c in cycles]
    masks = [0] * len(cycles)
    for i, j in itertools.combinations(range(len(cycles)), 2):
        if near[i] & own[j]:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


def max_d_packing(
    G: Graph, d: int, limits: OracleLimits | None = None, stop_at: int | None = None
) -> int:
    """Largest number of cycles pairwise at distance > ``d``.

    ``d = 0`` gives the maximum number of vertex-disjoint cycles.
    """
    if d < 0:
        raise PreconditionError(f"d must be nonnegative, got {d}")
    cycles = enumerate_cycles(G, limits)
    if not cycles:
        return 0
    return max_independent_set_size(conflict_masks(G, cycles, d), stop_at=stop_at)


def min_ball_hitting(G: Graph, radius: int, limits: OracleLimits | None = None) -> int:
    """Smallest ``|X|`` with ``G - B(X, radius)`` a forest."""
    limits = limits or OracleLimits.from_env()
    limits.check_graph(G)
    if radius < 0:
        raise PreconditionError(f"radius must be nonnegative, got {radius}")
    if cycle_rank(G) == 0:
        return 0
    balls = [frozenset(bfs_distances(G, [v], cutoff=radius)) for v in range(G.n)]
    # Only vertices of the 2-core can matter for hitting cycles, but every
    # vertex is a legal centre; enumerate them all.
    for size in range(1, G.n + 1):
        for X in itertools.combinations(range(G.n), size):
            covered = frozenset().union(*(balls[x] for x in X))
            rest = [v for v in range(G.n) if v not in covered]
            if cycle_rank(G, rest) == 0:
                return size
    raise AssertionError("the whole vertex set always hits every cycle")
