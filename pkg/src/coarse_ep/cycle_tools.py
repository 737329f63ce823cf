"""Cycle predicates and the "short or locally unicyclic" refinement.

:func:`short_or_unicyclic` walks from an arbitrary cycle ``C`` to either a
cycle whose radius-``r`` ball graph has cyclomatic number one (staying inside
``B(V(C), 2r)``), or a cycle of length at most ``6r + 2`` inside
``B(V(C), 3r)``.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import PreconditionError, check
from .graph_core import (
    Cycle,
    Edge,
    Graph,
    ball,
    bfs_distances,
    build_graph,
    cycle_rank,
    find_cycle_avoiding,
    norm_edge,
)

__all__ = [
    "Cycle",
    "Refinement",
    "RefinementOutcome",
    "is_d_packing",
    "is_r_unicyclic",
    "short_or_unicyclic",
    "validate_cycle",
]


def validate_cycle(G: Graph, C: Cycle, label: str = "cycle") -> None:
    if not C.is_valid_in(G):
        raise PreconditionError(f"{label} {C} is not a cycle of the graph")


def is_d_packing(G: Graph, cycles: Sequence[Cycle], d: int) -> bool:
    """True iff every two cycles are at distance strictly greater than ``d``."""
    for idx, C in enumerate(cycles):
        validate_cycle(G, C, f"cycle #{idx}")
    for a in range(len(cycles)):
        near = bfs_distances(G, cycles[a].vertices, cutoff=d)
        for b in range(a + 1, len(cycles)):
            if any(v in near for v in cycles[b].vertices):
                return False
    return True


def is_r_unicyclic(G: Graph, C: Cycle, r: int) -> bool:
    validate_cycle(G, C)
    return cycle_rank(G, ball(G, C.vertices, r)) <= 1


class Refinement(enum.Enum):
    UNICYCLIC = "unicyclic"
    SHORT = "short"


@dataclass(frozen=True)
class RefinementOutcome:
    tag: Refinement
    cycle: Cycle
    iterations: int = 0


def _cycle_from_edges(n: int, edges: list[Edge]) -> Cycle | None:
    return find_cycle_avoiding(build_graph(n, edges))


def _path_edges(path: Sequence[int]) -> list[Edge]:
    return [norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def _shortest_path_from(parent: dict[int, int], v: int) -> list[int]:
    """Parent chain from ``v`` back to a source (``parent[source] == -1``)."""
    path = [v]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path


def _bfs_parents(G: Graph, sources: Sequence[int], allowed: frozenset[int]) -> dict[int, int]:
    """BFS tree where each vertex's parent is its smallest-id neighbour one
    level closer to ``sources``."""
    dist = bfs_distances(G, sources, allowed=allowed)
    parent: dict[int, int] = {}
    for v, dv in dist.items():
        if dv == 0:
            parent[v] = -1
        else:
            parent[v] = min(w for w in G.adjacency[v] if dist.get(w) == dv - 1)
    return parent


def _other_cycle(G: Graph, cyc: list[int], region: frozenset[int]) -> list[int]:
    """Vertices of a cycle of ``G[region]`` other than ``cyc`` (which is chordless)."""
    parent = _bfs_parents(G, cyc, region)
    cyc_edges = {norm_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
    tree = set(cyc_edges)
    tree.update(norm_edge(v, p) for v, p in parent.items() if p != -1)
    extra = sorted(
        norm_edge(v, w)
        for v in region
        for w in G.adjacency[v]
        if w in region and norm_edge(v, w) not in tree
    )
    check(bool(extra), "ball graph has rank >= 2 but no non-tree edge")
    a, b = extra[0]
    # The fundamental cycle of a non-tree edge in (unicycle - one cycle edge).
    e0 = min(cyc_edges)
    spanning = [e for e in tree if e != e0]
    sub = build_graph(G.n, spanning + [(a, b)])
    # A spanning tree plus one edge has exactly one cycle, and it uses (a, b).
    found = find_cycle_avoiding(sub)
    check(found is not None and (a, b) in found.edges(), "fundamental cycle not found")
    return list(found.vertices)


def short_or_unicyclic(G: Graph, C: Cycle, r: int) -> RefinementOutcome:
    """Refine ``C`` into an ``r``-unicyclic cycle or a short cycle nearby.

    Maintains a cycle ``cyc`` whose first ``a + 1`` vertices form a path
    ``Q`` lying on ``C``; the remaining arc ``P`` (from ``cyc[a]`` back to
    ``cyc[0]``) has at most ``4r + 1`` edges.  Each round either stops or
    shortens ``Q``.
    """
    validate_cycle(G, C)
    if r < 0:
        raise PreconditionError(f"r must be nonnegative, got {r}")
    c_vertices = C.vertex_set
    c_edges = set(C.edges())
    ball_c2 = ball(G, C.vertices, 2 * r)
    ball_c3 = ball(G, C.vertices, 3 * r)

    # Q0 = C minus its smallest edge, P0 = that edge.
    x0, y0 = min(c_edges)
    seq = list(C.vertices)
    if seq[(seq.index(x0) + 1) % len(seq)] != y0:
        seq.reverse()
    i = seq.index(y0)
    seq = seq[i:] + seq[:i]
    # seq runs y0 -> ... -> x0, so P = (x0, y0) closes the cycle.
    check(norm_edge(seq[0], seq[-1]) == (x0, y0), "bad initial orientation")
    cyc = seq
    a = len(cyc) - 1

    def short(edges: list[Edge], it: int) -> RefinementOutcome:
        found = _cycle_from_edges(G.n, edges)
        check(found is not None, "expected a cycle in the short-cycle witness")
        check(len(found) <= 6 * r + 2, f"short cycle {found} longer than 6r+2")
        check(found.vertex_set <= ball_c3, f"short cycle {found} leaves B(C, 3r)")
        return RefinementOutcome(Refinement.SHORT, found, it)

    for it in range(1, len(C) + 2):
        L = len(cyc)
        q_path = cyc[: a + 1]
        p_path = cyc[a:] + [cyc[0]]
        check(len(q_path) >= 2, "Q_i must contain an edge")
        check(len(p_path) - 1 <= 4 * r + 1, "P_i has more than 4r+1 edges")
        check(all(norm_edge(q_path[j], q_path[j + 1]) in c_edges for j in range(a)),
              "Q_i left C")
        check(set(cyc) <= ball_c2, "C_i left B(C, 2r)")

        cur = Cycle.from_sequence(cyc)
        region = ball(G, cyc, r)
        if cycle_rank(G, region) <= 1:
            return RefinementOutcome(Refinement.UNICYCLIC, cur, it)

        pos = {v: j for j, v in enumerate(cyc)}
        cyc_edges = set(cur.edges())
        chords = sorted(
            norm_edge(v, w)
            for v in cyc
            for w in G.adjacency[v]
            if w in pos and norm_edge(v, w) not in cyc_edges
        )
        if chords:
            path = list(chords[0])
        else:
            D = _other_cycle(G, cyc, region)
            parent = _bfs_parents(G, cyc, frozenset(G.vertices()))
            depth = {v: len(_shortest_path_from(parent, v)) - 1 for v in D}
            far = max(depth.values())
            check(far >= 1, "chordless C_i but D lies on C_i")
            u = min(v for v in D if depth[v] == far)
            pu = _shortest_path_from(parent, u)[::-1]  # C_i ... u
            j = D.index(u)
            d_nbrs = {D[j - 1], D[(j + 1) % len(D)]}
            v = min(w for w in d_nbrs if w not in pu)
            pv = _shortest_path_from(parent, v)[::-1]
            check(u not in pv, "P(v) passes through u")
            witness = _path_edges(pu) + _path_edges(pv) + [norm_edge(u, v)]
            if cycle_rank(build_graph(G.n, witness)) > 0:
                return short(witness, it)
            path = pu + pv[::-1]

        x, y = path[0], path[-1]
        check(x in pos and y in pos and x != y, "P endpoints must be distinct C_i vertices")
        check(all(w not in pos for w in path[1:-1]), "P has an interior vertex on C_i")
        check(len(path) - 1 <= 2 * r + 1, "P longer than 2r+1")
        px, py = pos[x], pos[y]
        in_p = lambda j: j == 0 or j >= a  # noqa: E731 - positions on P_i
        p_interior = path[1:-1]

        if in_p(px) and in_p(py):
            # Case 1: close P with the sub-path of P_i between its endpoints.
            jx, jy = (px - a) % L, (py - a) % L  # offsets along p_path
            lo, hi = sorted((jx, jy))
            sub = p_path[lo : hi + 1]
            return short(_path_edges(sub) + _path_edges(path), it)

        if not in_p(px) and not in_p(py):
            # Case 2: both endpoints strictly inside Q.
            if px > py:
                px, py = py, px
                path = path[::-1]
                p_interior = path[1:-1]
            cyc = cyc[px : py + 1] + p_interior[::-1]
            a = py - px
            continue

        # Case 3: exactly one endpoint on P_i.
        if in_p(px):
            px, py = py, px
            path = path[::-1]
            p_interior = path[1:-1]
        # x = cyc[px] inside Q, y = cyc[py] on P_i.
        back = p_interior[::-1]  # from y to x
        # Arc A: forward from x through cyc[a] to y.
        q_fwd = cyc[px : a + 1]
        tail_fwd = cyc[a + 1 :] + [cyc[0]] if py == 0 else cyc[a + 1 : py + 1]
        cand_a = (q_fwd + tail_fwd + back, len(q_fwd) - 1, len(tail_fwd))
        # Arc B: backward from x through cyc[0] to y.
        q_bwd = cyc[px::-1]
        tail_bwd = [] if py == 0 else cyc[:py - 1 : -1]
        cand_b = (q_bwd + tail_bwd + back, len(q_bwd) - 1, len(tail_bwd))
        options = [c for c in (cand_a, cand_b) if c[2] <= 2 * r]
        check(bool(options), "neither case-3 cycle uses at most 2r edges of P_i")
        options.sort(key=lambda c: Cycle.from_sequence(c[0]).edges())
        cyc, a, _ = options[0]
        check(len(cyc) == len(set(cyc)), "case-3 cycle repeats a vertex")

    check(False, "refinement did not terminate within len(C) rounds")
    raise AssertionError  # unreachable
