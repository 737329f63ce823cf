"""The coarse Erdős–Pósa dichotomy, end to end.

:func:`solve` returns either ``k`` cycles pairwise at distance more than ``d``
or a set ``X`` of at most ``f_bound(k)`` vertices such that removing the
radius-``19d`` ball around ``X`` leaves a forest.  The pipeline:

1. seed cycles: locally unicyclic cycles far apart, plus short cycles;
2. control sets around the unicyclic seeds (see :mod:`coarse_ep.machinery`);
3. exit edges from the seed balls into the leftover forest, and the walks
   they define;
4. a forest pack-or-hit over the balls around those walks;
5. either a hitting set, or a packing extracted from the walks.

Whatever comes out is checked by :func:`verify` before it is returned.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .bfs_unicycle import leg
from .cycle_tools import Refinement, is_d_packing, short_or_unicyclic
from .errors import InstanceTooLarge, PreconditionError, check
from .forest_helly import RootedForest, ell_star, subgraphs_pack_or_hit
from .graph_core import (
    Cycle,
    Graph,
    ball,
    bfs_distances,
    build_graph,
    components,
    cycle_rank,
    distance,
    find_cycle_avoiding,
    find_cycle_in_edges,
    is_forest,
    norm_edge,
)
from .machinery import MachineryOutcome, all_the_ys, control_bound, half_s
from .subcubic import find_disjoint_cycles, s_bound

PACKING = "packing"
HITTING = "hitting"


# ---------------------------------------------------------------- bounds


def g_bound(d: int) -> int:
    if d < 1:
        raise PreconditionError(f"d must be positive, got {d}")
    return 19 * d


def f_bound(k: int) -> int:
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    s = s_bound(k)
    return 2 * k + 2 * k * k + (math.comb(k, 2) + k) * s + ell_star(k + math.ceil(s / 2), 3)


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Certificate:
    tag: str
    k: int
    d: int
    cycles: tuple[Cycle, ...] = ()
    X: tuple[int, ...] = ()
    radius: int = 0
    budget: int = 0

    @property
    def is_packing(self) -> bool:
        return self.tag == PACKING

    def to_dict(self) -> dict:
        out: dict = {"type": self.tag, "k": self.k, "d": self.d}
        if self.is_packing:
            out["cycles"] = [list(c.vertices) for c in self.cycles]
        else:
            out["X"] = list(self.X)
            out["radius"] = self.radius
            out["budget"] = self.budget
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        try:
            tag = data["type"]
            k, d = int(data["k"]), int(data["d"])
            if tag == PACKING:
                cycles = tuple(Cycle.from_sequence([int(v) for v in c]) for c in data["cycles"])
                return cls(PACKING, k, d, cycles=cycles)
            if tag == HITTING:
                X = tuple(sorted(int(v) for v in data["X"]))
                return cls(HITTING, k, d, X=X, radius=int(data["radius"]),
                           budget=int(data["budget"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise PreconditionError(f"malformed certificate: {exc}") from None
        raise PreconditionError(f"unknown certificate type {tag!r}")

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"certificate is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise PreconditionError("certificate must be a JSON object")
        return cls.from_dict(data)


def packing_certificate(k: int, d: int, cycles: Sequence[Cycle]) -> Certificate:
    return Certificate(PACKING, k, d, cycles=tuple(cycles))


def hitting_certificate(k: int, d: int, X) -> Certificate:
    return Certificate(HITTING, k, d, X=tuple(sorted(set(X))), radius=g_bound(d),
                       budget=f_bound(k))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify(G: Graph, cert: Certificate, k: int, d: int) -> Verdict:
    """Re-check ``cert`` from scratch using graph primitives only."""
    if cert.k != k or cert.d != d:
        return Verdict(False, f"certificate is for k={cert.k}, d={cert.d}")
    if cert.is_packing:
        if len(cert.cycles) != k:
            return Verdict(False, f"packing has {len(cert.cycles)} cycles, expected {k}")
        for C in cert.cycles:
            if not C.is_valid_in(G):
                return Verdict(False, f"{C} is not a cycle of the graph")
        for a, b in itertools.combinations(range(len(cert.cycles)), 2):
            gap = distance(G, cert.cycles[a].vertices, cert.cycles[b].vertices)
            if gap <= d:
                return Verdict(False, f"distance not > d: cycles {a} and {b} are {gap} apart")
        return Verdict(True)
    if cert.tag != HITTING:
        return Verdict(False, f"unknown certificate type {cert.tag!r}")
    if cert.radius != g_bound(d):
        return Verdict(False, f"radius {cert.radius} differs from 19d = {g_bound(d)}")
    if cert.budget != f_bound(k):
        return Verdict(False, "budget differs from f(k)")
    if len(set(cert.X)) > cert.budget:
        return Verdict(False, f"|X| = {len(set(cert.X))} exceeds f(k)")
    if any(not 0 <= v < G.n for v in cert.X):
        return Verdict(False, "X has a vertex outside the graph")
    covered = ball(G, cert.X, cert.radius) if cert.X else frozenset()
    rest = [v for v in range(G.n) if v not in covered]
    if cycle_rank(G, rest) != 0:
        return Verdict(False, "not a forest: G - B(X, 19d) still has a cycle")
    return Verdict(True)


# ---------------------------------------------------------------- seeds


@dataclass(frozen=True)
class SeedState:
    C_list: tuple[Cycle, ...]
    Dprime_list: tuple[Cycle, ...]


def seed_cycles(G: Graph, k: int, d: int) -> Certificate | SeedState:
    """Grow far-apart seeds until every cycle comes within ``4d`` of one."""
    if k < 1 or d < 1:
        raise PreconditionError(f"need k, d >= 1, got k={k}, d={d}")
    C_list: list[Cycle] = []
    D_list: list[Cycle] = []
    for _ in range(2 * k - 1):
        seeds = [v for c in C_list + D_list for v in c.vertices]
        blocked = ball(G, seeds, 4 * d) if seeds else frozenset()
        D = find_cycle_avoiding(G, blocked)
        if D is None:
            break
        out = short_or_unicyclic(G, D, d)
        if out.tag is Refinement.UNICYCLIC:
            for C in C_list:
                check(distance(G, C.vertices, out.cycle.vertices) > 2 * d,
                      "new unicyclic seed is within 2d of an earlier one")
            C_list.append(out.cycle)
            if len(C_list) == k:
                return packing_certificate(k, d, C_list)
        else:
            check(len(out.cycle) <= 6 * d + 2, "short seed longer than 6d+2")
            for C in D_list:
                check(distance(G, C.vertices, out.cycle.vertices) > d,
                      "new short seed is within d of an earlier one")
            D_list.append(out.cycle)
            if len(D_list) == k:
                return packing_certificate(k, d, D_list)
    state = SeedState(tuple(C_list), tuple(D_list))
    seeds = [v for c in C_list + D_list for v in c.vertices]
    blocked = ball(G, seeds, 4 * d) if seeds else frozenset()
    check(find_cycle_avoiding(G, blocked) is None, "seed process stopped with a free cycle")
    return state


# ---------------------------------------------------------------- admissible tuples


@dataclass
class Context:
    """Everything the tuple stage needs, derived from the seeds and control sets."""

    G: Graph
    d: int
    r: int
    cycles: tuple[Cycle, ...]
    unicycles: tuple
    Y_hat: frozenset[int]
    X_hat: frozenset[int]
    F0: frozenset[int]
    F0_minus: frozenset[int]
    F: tuple[frozenset[int], ...]  # F_1..F_p
    inner: tuple[frozenset[int], ...]  # B(C_i, r - d)


def build_context(G: Graph, seed: SeedState, control: MachineryOutcome, d: int) -> Context:
    r = 6 * d
    cycles = seed.C_list
    X0 = {min(D.vertices) for D in seed.Dprime_list}
    Y0 = ball(G, [v for D in seed.Dprime_list for v in D.vertices], 4 * d) \
        if seed.Dprime_list else frozenset()
    Y2 = X2 = {min(C.vertices) for C in cycles}
    Y_hat = frozenset(Y0 | control.Y | Y2)
    X_hat = frozenset(X0 | control.X | X2)
    near = [ball(G, C.vertices, r - 2 * d) for C in cycles]
    inner = tuple(ball(G, C.vertices, r - d) for C in cycles)
    outer = [ball(G, C.vertices, r) for C in cycles]
    everything = frozenset(G.vertices())
    F0 = everything - Y_hat - frozenset().union(*near)
    F0_minus = everything - Y_hat - frozenset().union(*inner)
    F = tuple(B - Y_hat for B in outer)
    check(is_forest(G, F0), "F0 is not a forest")
    for i, Fi in enumerate(F):
        check(is_forest(G, Fi), f"F_{i + 1} is not a forest")
    check(not Y_hat or Y_hat <= ball(G, X_hat, 13 * d), "Y_hat is not inside B(X_hat, 13d)")
    return Context(G, d, r, cycles, control.unicycles, Y_hat, X_hat, F0, F0_minus, F, inner)


@dataclass(frozen=True)
class AdmissibleTuple:
    e: tuple[int, int]  # (endpoint in the i-th ball, endpoint in F0-)
    i: int  # 1-based seed index
    e2: tuple[int, int]
    j: int
    P1: tuple[int, ...]  # cycle vertex ... ball endpoint of e
    P0: tuple[int, ...]  # forest endpoint of e ... forest endpoint of e2
    P2: tuple[int, ...]  # ball endpoint of e2 ... cycle vertex
    psi: tuple[frozenset[int], ...] = field(repr=False)

    @property
    def walk(self) -> tuple[int, ...]:
        return self.P1 + self.P0 + self.P2

    def walk_edges(self) -> set[tuple[int, int]]:
        w = self.walk
        return {norm_edge(w[a], w[a + 1]) for a in range(len(w) - 1)}


@dataclass(frozen=True)
class _Exit:
    edge: tuple[int, int]
    i: int
    leg: tuple[int, ...]
    near: frozenset[int]  # B(leg + outside endpoint, d)


def _exit_edges(ctx: Context) -> list[_Exit]:
    G, d, r = ctx.G, ctx.d, ctx.r
    out = []
    for idx, (inner, U) in enumerate(zip(ctx.inner, ctx.unicycles), start=1):
        for a in sorted(inner):
            for b in G.adjacency[a]:
                if b not in ctx.F0_minus:
                    continue
                check(U.depth[a] == r - d, f"exit edge {a}-{b} has inner depth {U.depth[a]}")
                path = tuple(reversed(leg(U, a)))
                check(len(path) - 1 == r - d, "first leg does not have r - d edges")
                near = frozenset(bfs_distances(G, path + (b,), cutoff=d))
                out.append(_Exit((a, b), idx, path, near))
    return out


def _forest_path(G: Graph, allowed: frozenset[int], s: int, t: int) -> tuple[int, ...]:
    parent = {s: -1}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            break
        for w in G.adjacency[v]:
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    path = [t]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return tuple(reversed(path))


def _psi(ctx: Context, P0, P1, i, P2, j) -> tuple[frozenset[int], ...]:
    G, d = ctx.G, ctx.d
    p = len(ctx.cycles)
    psi: list[frozenset[int]] = [frozenset(bfs_distances(G, P0, cutoff=d))]
    b1 = frozenset(bfs_distances(G, P1, cutoff=d))
    b2 = frozenset(bfs_distances(G, P2, cutoff=d))
    for ell in range(1, p + 1):
        part = frozenset()
        if ell == i:
            part |= b1
        if ell == j:
            part |= b2
        psi.append(part)
    return tuple(psi)


def _check_shape(ctx: Context, t: AdmissibleTuple) -> None:
    G = ctx.G
    check(t.psi[0] <= ctx.F0, "Psi_0 leaves F0")
    check(len(components(G, t.psi[0])) == 1, "Psi_0 is not connected")
    total = 0
    for ell in range(1, len(t.psi)):
        if t.psi[ell]:
            check(t.psi[ell] <= ctx.F[ell - 1], f"Psi_{ell} leaves F_{ell}")
            total += len(components(G, t.psi[ell]))
    check(total <= 2, f"Psi_1..Psi_p have {total} > 2 components")


def enumerate_admissible(
    G: Graph,
    seed: SeedState,
    control: MachineryOutcome,
    k: int,
    d: int,
    max_tuples: int = 10**6,
    ctx: Context | None = None,
) -> list[AdmissibleTuple]:
    ctx = ctx or build_context(G, seed, control, d)
    if not ctx.cycles:
        return []
    exits = [x for x in _exit_edges(ctx) if not (x.near & ctx.Y_hat)]
    comp_of: dict[int, int] = {}
    for q, comp in enumerate(components(G, ctx.F0_minus)):
        for v in comp:
            comp_of[v] = q
    by_comp: dict[int, list[_Exit]] = {}
    for x in exits:
        by_comp.setdefault(comp_of[x.edge[1]], []).append(x)
    budget = sum(len(xs) * (len(xs) - 1) for xs in by_comp.values())
    if budget > max_tuples:
        raise InstanceTooLarge(f"{budget} good tuples exceed the cap of {max_tuples}")

    out: list[AdmissibleTuple] = []
    for q in sorted(by_comp):
        xs = by_comp[q]
        for x1, x2 in itertools.permutations(xs, 2):
            P0 = _forest_path(G, ctx.F0_minus, x1.edge[1], x2.edge[1])
            near0 = bfs_distances(G, P0, cutoff=d)
            if any(v in ctx.Y_hat for v in near0):
                continue
            P2 = tuple(reversed(x2.leg))
            t = AdmissibleTuple(
                x1.edge, x1.i, x2.edge, x2.i, x1.leg, P0, P2,
                _psi(ctx, P0, x1.leg, x1.i, P2, x2.i),
            )
            check(ball(G, t.walk, d).isdisjoint(ctx.Y_hat), "admissible walk too close to Y_hat")
            _check_shape(ctx, t)
            out.append(t)
    return out


# ---------------------------------------------------------------- main pipeline


@dataclass(frozen=True)
class SolverConfig:
    max_good_tuples: int = 10**6
    refined: bool = True


def _star_forest(ctx: Context) -> tuple[RootedForest, int]:
    """Disjoint copies of F0, F1, ..., Fp; copy ``l`` of ``v`` is ``l*n + v``."""
    G = ctx.G
    n = G.n
    parts = (ctx.F0,) + ctx.F
    edges = []
    for ell, part in enumerate(parts):
        for u in part:
            for v in G.adjacency[u]:
                if v in part and u < v:
                    edges.append((ell * n + u, ell * n + v))
    return RootedForest.from_graph(build_graph(len(parts) * n, edges)), n


def _psi_star(t: AdmissibleTuple, n: int) -> frozenset[int]:
    return frozenset(ell * n + v for ell, part in enumerate(t.psi) for v in part)


def _walk_cycle(G: Graph, t: AdmissibleTuple) -> Cycle | None:
    if len(set(t.walk)) == len(t.walk):
        return None
    cyc = find_cycle_in_edges(G.n, t.walk_edges())
    check(cyc is not None, "walk repeats a vertex but has no cycle")
    return cyc


def _finish(G: Graph, cert: Certificate, k: int, d: int) -> Certificate:
    verdict = verify(G, cert, k, d)
    check(verdict.ok, f"solver produced an invalid certificate: {verdict.reason}")
    return cert


def solve(G: Graph, k: int, d: int, config: SolverConfig | None = None) -> Certificate:
    config = config or SolverConfig()
    if k < 0 or d < 1:
        raise PreconditionError(f"need k >= 0 and d >= 1, got k={k}, d={d}")
    if k == 0:
        return packing_certificate(0, d, ())

    seeded = seed_cycles(G, k, d)
    if isinstance(seeded, Certificate):
        return _finish(G, seeded, k, d)
    seed = seeded
    r = 6 * d

    control = all_the_ys(G, seed.C_list, r, d, k)
    if control.is_packing:
        return _finish(G, packing_certificate(k, d, control.packing), k, d)
    check(len(control.X - control.extra) < control_bound(k), "control set too large")

    ctx = build_context(G, seed, control, d)
    tuples = enumerate_admissible(G, seed, control, k, d, config.max_good_tuples, ctx)
    F_star, n = _star_forest(ctx)
    family = [_psi_star(t, n) for t in tuples]
    for A in family:
        check(len(components(F_star.underlying, A)) <= 3, "Psi* has more than 3 components")

    k_star = k + half_s(k)
    res = subgraphs_pack_or_hit(F_star, family, k_star, 3, refined=config.refined)

    if not res.is_pack:
        X3 = {x % n for x in res.hit[0]}
        for t in tuples:
            check(any(X3 & part for part in t.psi), "X3 misses an admissible tuple")
        X = ctx.X_hat | X3
        check(len(X) <= f_bound(k), f"|X| = {len(X)} exceeds f(k)")
        return _finish(G, hitting_certificate(k, d, X), k, d)

    chosen = [tuples[i] for i in res.pack]
    for a, b in itertools.combinations(chosen, 2):
        check(distance(G, a.walk, b.walk) > d, "packed walks are within distance d")
    with_cycle = [(t, c) for t in chosen if (c := _walk_cycle(G, t)) is not None]
    if len(with_cycle) >= k:
        cycles = [c for _, c in with_cycle[:k]]
        return _finish(G, packing_certificate(k, d, cycles), k, d)

    paths = [t for t in chosen if _walk_cycle(G, t) is None]
    check(len(paths) >= half_s(k), "too few path walks for the subcubic step")
    ends = {t.walk[0] for t in paths} | {t.walk[-1] for t in paths}
    edges: set[tuple[int, int]] = set()
    for C in seed.C_list:
        if ends & C.vertex_set:
            edges.update(C.edges())
    for t in paths:
        edges |= t.walk_edges()
    H = build_graph(G.n, edges)
    degs = {H.degree(v) for v in H.non_isolated()}
    check(degs <= {2, 3}, f"union of walks and seeds has degrees {sorted(degs)}")
    branch = sum(1 for v in H.vertices() if H.degree(v) == 3)
    check(branch >= s_bound(k), f"only {branch} branch vertices, need s(k) = {s_bound(k)}")
    cycles = find_disjoint_cycles(H, k)
    check(is_d_packing(G, cycles, d), "subcubic cycles are not a d-packing")
    return _finish(G, packing_certificate(k, d, cycles), k, d)
