"""Packing-or-control analysis around locally unicyclic cycles.

Given a cycle ``C`` whose radius-``d`` ball is unicyclic and a BFS unicycle
``U`` of its radius-``r`` ball, :func:`grow_unicycle` either finds a
``d``-packing of ``k`` cycles or returns small sets ``X``, ``Y`` such that
``Y`` meets every edge of the ball missing from ``U`` and ``B(X, 2r + d)``
swallows everything hanging below ``Y`` in ``U``.  :func:`double_unicycle`
does the same for the overlap of two such balls and :func:`all_the_ys`
combines both over a whole family of cycles.

Every outcome is checked before it is returned.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .bfs_unicycle import BFSUnicycle, build_bfs_unicycle, descendants, leg, non_tree_edges
from .cycle_tools import is_d_packing, is_r_unicyclic, validate_cycle
from .errors import PreconditionError, check
from .graph_core import Cycle, Edge, Graph, ball, bfs_distances, build_graph, distance, norm_edge
from .subcubic import find_disjoint_cycles, s_bound


class Outcome(enum.Enum):
    PACKING = "packing"
    CONTROL = "control"


@dataclass(frozen=True)
class MachineryOutcome:
    tag: Outcome
    packing: tuple[Cycle, ...] = ()
    X: frozenset[int] = frozenset()
    Y: frozenset[int] = frozenset()
    extra: frozenset[int] = frozenset()
    unicycles: tuple[BFSUnicycle, ...] = field(default=(), repr=False)

    @property
    def is_packing(self) -> bool:
        return self.tag is Outcome.PACKING


@dataclass(frozen=True)
class FundamentalCycleInfo:
    edge: Edge
    cycle: Cycle
    path_edges: tuple[Edge, ...]
    path_vertices: frozenset[int]
    null: bool


def half_s(k: int) -> int:
    """``s(k) / 2`` rounded up, used wherever a cardinality threshold needs it."""
    return math.ceil(s_bound(k) / 2)


def _packing(G: Graph, cycles: Sequence[Cycle], d: int, k: int) -> MachineryOutcome:
    cycles = tuple(cycles)
    check(len(cycles) == k, f"packing has {len(cycles)} cycles, expected {k}")
    check(is_d_packing(G, cycles, d), f"claimed packing is not a {d}-packing")
    return MachineryOutcome(Outcome.PACKING, packing=cycles)


def greedy_independent(near: Sequence[frozenset[int]], own: Sequence[frozenset[int]]) -> list[int]:
    """Maximal independent set (in index order) of the graph where ``a ~ b``
    iff ``near[a]`` meets ``own[b]``; asserts it dominates."""
    chosen: list[int] = []
    for i in range(len(own)):
        if all(not (near[j] & own[i]) for j in chosen):
            chosen.append(i)
    for i in range(len(own)):
        check(i in chosen or any(near[j] & own[i] for j in chosen),
              "greedy independent set does not dominate")
    return chosen


def _disjoint_from_subcubic(
    G: Graph, edges: set[Edge], k: int, d: int
) -> MachineryOutcome:
    """Run the subcubic extraction on the union graph ``edges``."""
    H = build_graph(G.n, edges)
    degs = {H.degree(v) for v in H.non_isolated()}
    check(degs <= {2, 3}, f"union graph has degrees {sorted(degs)}, expected only 2 and 3")
    branch = sum(1 for v in H.vertices() if H.degree(v) == 3)
    check(branch >= s_bound(k), f"union graph has {branch} < s({k}) branch vertices")
    return _packing(G, find_disjoint_cycles(H, k), d, k)


def _check_unicycle(G: Graph, C: Cycle, U: BFSUnicycle, r: int) -> None:
    if U.root_cycle != C:
        raise PreconditionError("BFS unicycle is rooted at a different cycle")
    if U.vertices != ball(G, C.vertices, r):
        raise PreconditionError("BFS unicycle does not span the radius-r ball")


def _check_common(G: Graph, C: Cycle, r: int, d: int, k: int) -> None:
    if not 1 <= d <= r:
        raise PreconditionError(f"need 1 <= d <= r, got d={d}, r={r}")
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    validate_cycle(G, C)
    if not is_r_unicyclic(G, C, d):
        raise PreconditionError(f"cycle {C} is not {d}-unicyclic")


class _Tree:
    """Rooted spanning tree with path queries."""

    def __init__(self, edges: Sequence[Edge], root: int):
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        self.parent = {root: -1}
        self.depth = {root: 0}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj.get(v, ())):
                if w not in self.depth:
                    self.parent[w] = v
                    self.depth[w] = self.depth[v] + 1
                    queue.append(w)

    def path(self, u: int, v: int) -> list[int]:
        left, right = [u], [v]
        while self.depth[left[-1]] > self.depth[right[-1]]:
            left.append(self.parent[left[-1]])
        while self.depth[right[-1]] > self.depth[left[-1]]:
            right.append(self.parent[right[-1]])
        while left[-1] != right[-1]:
            left.append(self.parent[left[-1]])
            right.append(self.parent[right[-1]])
        return left + right[-2::-1]


def fundamental_cycles(G: Graph, C: Cycle, U: BFSUnicycle) -> list[FundamentalCycleInfo]:
    """For each edge of the ball graph outside ``U``: its cycle avoiding the
    smallest edge of ``C``, and the part of that cycle off ``C``."""
    e0 = min(C.edges())
    tree = _Tree([e for e in U.edges() if e != e0], C.vertices[0])
    c_edges = set(C.edges())
    out = []
    for u, v in non_tree_edges(G, U):
        seq = tree.path(u, v)
        cyc = Cycle.from_sequence(seq)
        off = tuple(e for e in cyc.edges() if e not in c_edges)
        pv = frozenset(x for e in off for x in e)
        out.append(FundamentalCycleInfo((u, v), cyc, off, pv, null=len(off) == len(cyc)))
    return out


def grow_unicycle(
    G: Graph, C: Cycle, U: BFSUnicycle, r: int, d: int, k: int
) -> MachineryOutcome:
    _check_common(G, C, r, d, k)
    _check_unicycle(G, C, U, r)

    infos = fundamental_cycles(G, C, U)
    own = [f.path_vertices for f in infos]
    near = [frozenset(bfs_distances(G, f.path_vertices, cutoff=d)) for f in infos]
    independent = greedy_independent(near, own)

    null_ids = [i for i in independent if infos[i].null]
    if len(null_ids) >= k:
        return _packing(G, [infos[i].cycle for i in null_ids[:k]], d, k)

    if len(independent) >= k + half_s(k):
        edges = set(C.edges())
        for i in independent:
            if not infos[i].null:
                edges.update(infos[i].path_edges)
        return _disjoint_from_subcubic(G, edges, k, d)

    X = frozenset(x for i in independent for x in infos[i].edge)
    Y: set[int] = set()
    for idx, f in enumerate(infos):
        partner = idx if idx in independent else next(
            j for j in independent if near[j] & own[idx]
        )
        reach = frozenset(bfs_distances(G, infos[partner].edge, cutoff=r + d))
        u, v = f.edge
        covered = [w for w in (u, v) if reach.intersection(leg(U, w))]
        check(bool(covered), f"no endpoint of {f.edge} has a leg near its partner")
        Y.add(min(covered))
    out = MachineryOutcome(Outcome.CONTROL, X=X, Y=frozenset(Y))
    _verify_grow(G, U, r, d, k, infos, out)
    return out


def _verify_grow(G, U, r, d, k, infos, out: MachineryOutcome) -> None:
    for f in infos:
        check(bool(out.Y.intersection(f.edge)), f"Y misses both endpoints of {f.edge}")
    check(len(out.X) < 2 * k + s_bound(k), f"|X| = {len(out.X)} >= 2k + s(k)")
    reach = ball(G, out.X, 2 * r + d) if out.X else frozenset()
    for y in out.Y:
        check(descendants(U, y) <= reach, f"descendants of {y} escape B(X, 2r+d)")


def _shortest_between(edges: Sequence[Edge], sources: set[int], targets: set[int]) -> list[int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent = {s: -1 for s in sorted(sources) if s in adj}
    queue = deque(parent)
    while queue:
        v = queue.popleft()
        if v in targets:
            path = [v]
            while parent[path[-1]] != -1:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    raise AssertionError("no path between the two cycles inside Q_x")


def _path_edge_list(path: Sequence[int]) -> list[Edge]:
    return [norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def double_unicycle(
    G: Graph,
    C1: Cycle,
    U1: BFSUnicycle,
    Y1: frozenset[int],
    C2: Cycle,
    U2: BFSUnicycle,
    Y2: frozenset[int],
    r: int,
    d: int,
    k: int,
) -> MachineryOutcome:
    _check_common(G, C1, r, d, k)
    _check_common(G, C2, r, d, k)
    _check_unicycle(G, C1, U1, r)
    _check_unicycle(G, C2, U2, r)
    gap = distance(G, C1.vertices, C2.vertices)
    if not gap > 2 * d:
        raise PreconditionError(f"cycles are at distance {gap}, need more than {2 * d}")
    for U, Yi, name in ((U1, Y1, "Y1"), (U2, Y2, "Y2")):
        for e in non_tree_edges(G, U):
            if not Yi.intersection(e):
                raise PreconditionError(f"{name} misses both endpoints of non-tree edge {e}")

    below = [
        frozenset().union(*(descendants(U, y) for y in Yi if U.contains(y)))
        for U, Yi in ((U1, Y1), (U2, Y2))
    ]
    hidden = below[0] | below[1]
    c1, c2 = set(C1.vertices), set(C2.vertices)
    Y = sorted(U1.vertices & U2.vertices)

    paths: dict[int, list[int]] = {}
    for x in Y:
        q_edges = _path_edge_list(leg(U1, x)) + _path_edge_list(leg(U2, x))
        p = _shortest_between(q_edges, c1, c2)
        check(1 <= len(p) - 1 <= 2 * r, f"P_x for x={x} has length {len(p) - 1}")
        paths[x] = p

    interesting = [x for x in Y if not hidden.intersection(paths[x])]
    own = [frozenset(paths[x]) for x in interesting]
    near = [frozenset(bfs_distances(G, paths[x], cutoff=d)) for x in interesting]
    chosen = [interesting[i] for i in greedy_independent(near, own)]

    if len(chosen) >= half_s(k):
        edges = set(C1.edges()) | set(C2.edges())
        for x in chosen:
            edges.update(_path_edge_list(paths[x]))
        return _disjoint_from_subcubic(G, edges, k, d)

    X = frozenset(v for x in chosen for v in (paths[x][0], paths[x][-1]))
    check(len(X) < s_bound(k), f"|X| = {len(X)} >= s(k)")
    reach = ball(G, X, 2 * r + d) if X else frozenset()
    # An uninteresting vertex need not lie below Y_1 or Y_2: its path can meet
    # the subtree of Y_1 along its U_2-leg only.  Cover such strays directly.
    strays = [y for y in Y if y not in hidden and y not in reach]
    extra: set[int] = set()
    while strays:
        y = strays[0]
        extra.add(y)
        near = bfs_distances(G, [y], cutoff=2 * r + d)
        strays = [z for z in strays if z not in near]
    out = MachineryOutcome(Outcome.CONTROL, X=X | extra, Y=frozenset(Y), extra=frozenset(extra))
    reach = ball(G, out.X, 2 * r + d) if out.X else frozenset()
    for y in Y:
        check(y in hidden or y in reach, f"overlap vertex {y} is neither below Y_i nor near X")
    return out


def all_the_ys(G: Graph, cycles: Sequence[Cycle], r: int, d: int, k: int) -> MachineryOutcome:
    """Combine :func:`grow_unicycle` and :func:`double_unicycle` over ``cycles``.

    ``cycles`` must be a ``2d``-packing of ``d``-unicyclic cycles.
    """
    if not 1 <= d <= r:
        raise PreconditionError(f"need 1 <= d <= r, got d={d}, r={r}")
    cycles = list(cycles)
    if not is_d_packing(G, cycles, 2 * d):
        raise PreconditionError(f"cycles do not form a {2 * d}-packing")
    if len(cycles) >= k:
        return _packing(G, cycles[:k], d, k)

    unicycles = []
    X: set[int] = set()
    Y: set[int] = set()
    extra: set[int] = set()
    per_cycle_Y = []
    for C in cycles:
        U = build_bfs_unicycle(G, C, r)
        res = grow_unicycle(G, C, U, r, d, k)
        if res.is_packing:
            return res
        unicycles.append(U)
        per_cycle_Y.append(res.Y)
        X |= res.X
        Y |= res.Y
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            res = double_unicycle(
                G,
                cycles[i], unicycles[i], per_cycle_Y[i],
                cycles[j], unicycles[j], per_cycle_Y[j],
                r, d, k,
            )
            if res.is_packing:
                return res
            X |= res.X
            Y |= res.Y
            extra |= res.extra

    out = MachineryOutcome(
        Outcome.CONTROL, X=frozenset(X), Y=frozenset(Y), extra=frozenset(extra),
        unicycles=tuple(unicycles),
    )
    verify_control(G, cycles, out, r, d, k)
    return out


def control_bound(k: int) -> int:
    """Strict upper bound on ``|X|`` from :func:`all_the_ys`."""
    return 2 * k * k + (k * (k - 1) // 2 + k) * s_bound(k)


def verify_control(
    G: Graph, cycles: Sequence[Cycle], out: MachineryOutcome, r: int, d: int, k: int
) -> None:
    for C, U in zip(cycles, out.unicycles):
        check(U.root_cycle == C, "unicycles out of order")
        for e in non_tree_edges(G, U):
            check(bool(out.Y.intersection(e)), f"Y misses non-tree edge {e} of U({C})")
    balls = [ball(G, C.vertices, r) for C in cycles]
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            check(balls[i] & balls[j] <= out.Y, f"overlap of balls {i},{j} not inside Y")
    core = out.X - out.extra
    check(len(core) < control_bound(k), f"|X| = {len(core)} exceeds the control bound")
    if out.Y:
        check(out.Y <= ball(G, out.X, 2 * r + d), "Y is not inside B(X, 2r+d)")
