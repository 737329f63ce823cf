"""Vertex-disjoint cycles in graphs of maximum degree three.

``s_bound(k)`` is the number of degree-3 vertices that forces ``k``
vertex-disjoint cycles in a graph whose degrees are all 2 or 3.  The search
itself is greedy shortest-cycle-first, with an exhaustive backtracking
fallback for small graphs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import InvariantViolation, LimitExceeded, PreconditionError, check
from .graph_core import Cycle, Graph, build_graph
from .oracle import OracleLimits, enumerate_cycles

# Backtracking enumerates every cycle; beyond this many vertices in the
# 2-core it is not attempted.
BACKTRACK_MAX_VERTICES = 40
BACKTRACK_MAX_CYCLES = 200_000


def s_bound(k: int) -> int:
    if k < 1:
        raise PreconditionError(f"s(k) needs k >= 1, got {k}")
    if k == 1:
        return 2
    lg = math.log2(k)
    return math.ceil(4 * k * (lg + math.log2(lg) + 4))


@dataclass(frozen=True)
class SubcubicGraph:
    """A graph whose non-isolated vertices all have degree 2 or 3.

    Isolated vertices are ignored: subgraphs keep the host's id space.
    """

    underlying: Graph

    def __post_init__(self) -> None:
        bad = [v for v in self.underlying.vertices() if self.underlying.degree(v) not in (0, 2, 3)]
        if bad:
            raise PreconditionError(
                f"vertex {bad[0]} has degree {self.underlying.degree(bad[0])}, expected 2 or 3"
            )

    def branch_vertices(self) -> list[int]:
        return [v for v in self.underlying.vertices() if self.underlying.degree(v) == 3]


def two_core(G: Graph, alive: set[int]) -> set[int]:
    """Strip degree-<=1 vertices from ``G[alive]`` until none remain."""
    alive = set(alive)
    deg = {v: sum(1 for w in G.adjacency[v] if w in alive) for v in alive}
    queue = deque(v for v in sorted(alive) if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for w in G.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1:
                    queue.append(w)
    return alive


def shortest_cycle(G: Graph, alive: set[int]) -> Cycle | None:
    """A shortest cycle of ``G[alive]``; ties broken by canonical order."""
    best: tuple[int, Cycle] | None = None
    adj = G.adjacency
    for s in sorted(alive):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 > best[0]:
                break
            for w in adj[u]:
                if w not in alive:
                    continue
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and dist[w] >= dist[u]:
                    length = dist[u] + dist[w] + 1
                    if best is not None and length > best[0]:
                        continue
                    a, b = [u], [w]
                    while a[-1] != s:
                        a.append(parent[a[-1]])
                    while b[-1] != s:
                        b.append(parent[b[-1]])
                    seq = a[::-1] + b[:-1]
                    if len(set(seq)) != len(seq):
                        continue
                    cyc = Cycle.from_sequence(seq)
                    if best is None or (len(cyc), cyc) < best:
                        best = (len(cyc), cyc)
    return None if best is None else best[1]


def _greedy(G: Graph, k: int) -> list[Cycle]:
    alive = two_core(G, set(G.non_isolated()))
    out: list[Cycle] = []
    while len(out) < k and alive:
        cyc = shortest_cycle(G, alive)
        if cyc is None:
            break
        out.append(cyc)
        alive = two_core(G, alive - cyc.vertex_set)
    return out


def _backtrack(G: Graph, k: int) -> list[Cycle] | None:
    core = two_core(G, set(G.non_isolated()))
    if len(core) > BACKTRACK_MAX_VERTICES:
        raise LimitExceeded(f"backtracking refused: 2-core has {len(core)} vertices")
    # Enumerate on a compact relabelling of the 2-core.
    order = sorted(core)
    idx = {v: i for i, v in enumerate(order)}
    small = build_graph(
        len(order), [(idx[u], idx[v]) for u, v in G.edges() if u in core and v in core]
    )
    limits = OracleLimits(max_vertices=len(order), max_cycles=BACKTRACK_MAX_CYCLES)
    cycles = sorted(enumerate_cycles(small, limits), key=lambda c: (len(c), c))
    masks = [sum(1 << v for v in c.vertices) for c in cycles]
    chosen: list[int] = []

    def search(start: int, used: int) -> bool:
        if len(chosen) == k:
            return True
        for i in range(start, len(cycles)):
            if len(cycles) - i < k - len(chosen):
                return False
            if masks[i] & used == 0:
                chosen.append(i)
                if search(i + 1, used | masks[i]):
                    return True
                chosen.pop()
        return False

    if not search(0, 0):
        return None
    return [Cycle.from_sequence([order[v] for v in cycles[i].vertices]) for i in chosen]


def find_disjoint_cycles(G: SubcubicGraph | Graph, k: int) -> list[Cycle]:
    """``k`` pairwise vertex-disjoint cycles of ``G``.

    Raises :class:`PreconditionError` when the graph has neither ``s(k)``
    branch vertices (nor a cycle, for ``k = 1``) and the search finds no
    packing; raises :class:`InvariantViolation` if the search fails although
    the branch-vertex count guarantees success.
    """
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    sub = G if isinstance(G, SubcubicGraph) else SubcubicGraph(G)
    H = sub.underlying
    guaranteed = len(sub.branch_vertices()) >= s_bound(k)

    found = _greedy(H, k)
    if len(found) < k:
        try:
            found = _backtrack(H, k) or []
        except LimitExceeded:
            if guaranteed:
                raise InvariantViolation(
                    f"greedy found {len(found)} < {k} cycles and the graph is too "
                    "large for backtracking, despite enough branch vertices"
                ) from None
            raise
    if len(found) < k:
        if guaranteed:
            raise InvariantViolation(
                f"no {k} disjoint cycles despite {len(sub.branch_vertices())} >= s({k}) "
                "branch vertices"
            )
        raise PreconditionError(f"graph has no {k} vertex-disjoint cycles")

    seen: set[int] = set()
    for c in found:
        check(c.is_valid_in(H), f"returned cycle {c} is not in the graph")
        check(not (seen & c.vertex_set), "returned cycles share a vertex")
        seen |= c.vertex_set
    return found
