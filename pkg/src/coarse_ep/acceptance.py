"""The acceptance suite: a fixed instance corpus and one check per criterion.

Each ``criterion_*`` function returns a :class:`CriterionResult`; the CLI
``selftest`` command and ``tests/test_acceptance.py`` both run them.  All
randomness is drawn from ``random.Random`` with fixed seeds, so the corpus
and every derived number are reproducible.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import random
import subprocess
import sys
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .cycle_tools import Refinement, is_d_packing, is_r_unicyclic, short_or_unicyclic
from .errors import PreconditionError
from .forest_helly import (
    ForestTuple,
    RootedForest,
    budgets,
    check_subgraphs_result,
    check_tuples_result,
    ell,
    ell_star,
    independent,
    subgraphs_pack_or_hit,
    tuples_pack_or_hit,
)
from .generators import generate
from .graph_core import Cycle, Graph, ball, build_graph, components, cycle_rank, find_cycle_avoiding
from .oracle import OracleLimits, max_d_packing, min_ball_hitting
from .solver import Certificate, f_bound, g_bound, solve, verify
from .subcubic import find_disjoint_cycles, s_bound

# ell*(2, 3) evaluated once by the recurrence and frozen here.
PINNED_ELL_STAR_2_3 = 18102410
SMALL_N = 14


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str
    params: tuple[tuple[str, int], ...]
    seed: int
    k: int
    d: int

    def graph(self) -> Graph:
        return generate(self.kind, dict(self.params), self.seed)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


@dataclass(frozen=True)
class Solved:
    instance: Instance
    n: int
    m: int
    cert_json: str
    runtime_ms: float
    error: str = ""

    @property
    def cert(self) -> Certificate:
        return Certificate.from_json(self.cert_json)


# ---------------------------------------------------------------- corpus


def _inst(rng: random.Random, idx: int, kind: str, **params: int) -> Instance:
    return Instance(
        f"{idx:04d}-{kind}", kind, tuple(sorted(params.items())), idx,
        rng.randint(1, 3), rng.randint(1, 2),
    )


def build_corpus(count: int = 1000, seed: int = 0) -> list[Instance]:
    """``count`` instances; the first 30% have at most ``SMALL_N`` vertices."""
    rng = random.Random(seed)
    out: list[Instance] = []
    small = (3 * count) // 10
    for idx in range(count):
        pick = rng.random()
        if idx < small:
            if pick < 0.6:
                n = rng.randint(4, SMALL_N)
                m = rng.randint(max(0, n - 3), min(math.comb(n, 2), n + 4))
                out.append(_inst(rng, idx, "random-gnm", n=n, m=m))
            elif pick < 0.75:
                rows = rng.randint(1, 3)
                out.append(_inst(rng, idx, "grid", rows=rows, cols=rng.randint(1, SMALL_N // rows)))
            elif pick < 0.85:
                length = rng.randint(3, 6)
                kk = rng.randint(1, SMALL_N // length)
                out.append(_inst(rng, idx, "disjoint-cycles", k=kk, length=length, gap=rng.randint(0, 4)))
            else:
                n = rng.randint(3, 5)
                m = rng.randint(n - 1, min(math.comb(n, 2), n + 1))
                t = rng.randint(0, max(0, (SMALL_N - n) // m))
                out.append(_inst(rng, idx, "subdivision", n=n, m=m, t=t))
            continue
        if pick < 0.45:
            n = rng.randint(5, 60)
            m = rng.randint(max(0, n - 5), min(120, math.comb(n, 2), int(1.4 * n)))
            out.append(_inst(rng, idx, "random-gnm", n=n, m=m))
        elif pick < 0.65:
            out.append(_inst(rng, idx, "grid", rows=rng.randint(1, 8), cols=rng.randint(1, 8)))
        elif pick < 0.8:
            out.append(_inst(rng, idx, "disjoint-cycles", k=rng.randint(1, 4),
                             length=rng.randint(3, 10), gap=rng.randint(0, 6)))
        else:
            n = rng.randint(4, 16)
            m = rng.randint(n - 2, min(math.comb(n, 2), n + 6))
            out.append(_inst(rng, idx, "subdivision", n=n, m=m, t=rng.randint(0, 4)))
    return out


def solve_instance(inst: Instance) -> Solved:
    G = inst.graph()
    t0 = time.perf_counter()
    try:
        cert = solve(G, inst.k, inst.d)
    except Exception as exc:  # recorded, reported as a failure
        ms = (time.perf_counter() - t0) * 1000
        return Solved(inst, G.n, G.m, "", ms, f"{type(exc).__name__}: {exc}")
    ms = (time.perf_counter() - t0) * 1000
    return Solved(inst, G.n, G.m, cert.to_json(), ms)


def solve_all(instances: Sequence[Instance], workers: int = 1) -> list[Solved]:
    """Solve in order; with ``workers > 1`` fan out but keep input order."""
    if workers <= 1:
        return [solve_instance(i) for i in instances]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(solve_instance, instances, chunksize=8))


@lru_cache(maxsize=4)
def corpus_results(count: int = 1000, workers: int = 1) -> tuple[tuple[Solved, ...], float]:
    t0 = time.perf_counter()
    res = tuple(solve_all(build_corpus(count), workers))
    return res, time.perf_counter() - t0


def corpus_digest(count: int = 1000) -> str:
    h = hashlib.sha256()
    for s in solve_all(build_corpus(count)):
        h.update(s.instance.name.encode())
        h.update(s.cert_json.encode() or s.error.encode())
        h.update(b"\n")
    return h.hexdigest()


# ---------------------------------------------------------------- criteria


def criterion_totality(count: int = 1000, workers: int = 1, limit_s: float = 600) -> CriterionResult:
    results, elapsed = corpus_results(count, workers)
    bad = []
    for s in results:
        if s.error:
            bad.append(f"{s.instance.name}: {s.error}")
            continue
        v = verify(s.instance.graph(), s.cert, s.instance.k, s.instance.d)
        if not v:
            bad.append(f"{s.instance.name}: {v.reason}")
    ok = not bad and elapsed < limit_s
    detail = f"{len(results) - len(bad)}/{len(results)} verified in {elapsed:.1f}s (limit {limit_s:.0f}s)"
    if bad:
        detail += f"; first failure {bad[0]}"
    return CriterionResult("dichotomy totality", ok, detail)


def criterion_hitting_bound(count: int = 1000, workers: int = 1) -> CriterionResult:
    results, _ = corpus_results(count, workers)
    seen = bad = 0
    for s in results:
        if s.error or s.cert.is_packing:
            continue
        seen += 1
        G, k, d = s.instance.graph(), s.instance.k, s.instance.d
        cert = s.cert
        covered = ball(G, cert.X, 19 * d) if cert.X else frozenset()
        rest = [v for v in G.vertices() if v not in covered]
        if len(set(cert.X)) > f_bound(k) or cert.radius != 19 * d or cycle_rank(G, rest) != 0:
            bad += 1
    return CriterionResult("hitting bound", bad == 0 and seen > 0,
                           f"{seen} hitting certificates, {bad} violations")


def criterion_packing_bound(count: int = 1000, workers: int = 1) -> CriterionResult:
    results, _ = corpus_results(count, workers)
    seen = bad = 0
    for s in results:
        if s.error or not s.cert.is_packing:
            continue
        seen += 1
        G, cert = s.instance.graph(), s.cert
        valid = all(C.is_valid_in(G) for C in cert.cycles)
        if not (valid and len(cert.cycles) == s.instance.k
                and is_d_packing(G, cert.cycles, s.instance.d)):
            bad += 1
    return CriterionResult("packing bound", bad == 0 and seen > 0,
                           f"{seen} packing certificates, {bad} violations")


def criterion_oracle(count: int = 1000, workers: int = 1, minimum: int = 200) -> CriterionResult:
    results, _ = corpus_results(count, workers)
    limits = OracleLimits(max_vertices=SMALL_N, max_cycles=5000)
    seen = bad = 0
    first = ""
    for s in results:
        if s.error or s.n > SMALL_N:
            continue
        seen += 1
        G, k, d = s.instance.graph(), s.instance.k, s.instance.d
        cert = s.cert
        if cert.is_packing:
            ok = max_d_packing(G, d, limits, stop_at=k) >= k
        else:
            ok = min_ball_hitting(G, g_bound(d), limits) <= len(cert.X)
        if not ok:
            bad += 1
            first = first or s.instance.name
    ok = bad == 0 and seen >= minimum
    detail = f"{seen} instances with n <= {SMALL_N} (need {minimum}), {bad} violations"
    if first:
        detail += f"; first {first}"
    return CriterionResult("oracle cross-check", ok, detail)


def _some_cycles(G: Graph, rng: random.Random, limit: int) -> list[Cycle]:
    out: list[Cycle] = []
    for _ in range(4 * limit):
        blocked = rng.sample(range(G.n), rng.randint(0, max(0, G.n // 4)))
        C = find_cycle_avoiding(G, blocked)
        if C is not None and C not in out:
            out.append(C)
        if len(out) >= limit:
            break
    return out


def refinement_violation(G: Graph, C: Cycle, r: int) -> str:
    """Empty string when the refinement of ``C`` obeys its invariants."""
    out = short_or_unicyclic(G, C, r)
    D = out.cycle
    if not D.is_valid_in(G):
        return f"{D} is not a cycle of G"
    if out.tag is Refinement.UNICYCLIC:
        if not D.vertex_set <= ball(G, C.vertices, 2 * r):
            return "unicyclic outcome leaves B(C, 2r)"
        if not is_r_unicyclic(G, D, r):
            return "unicyclic outcome is not r-unicyclic"
    else:
        if len(D) > 6 * r + 2:
            return f"short outcome has length {len(D)} > 6r+2"
        if not D.vertex_set <= ball(G, C.vertices, 3 * r):
            return "short outcome leaves B(C, 3r)"
    return ""


def criterion_refinement(triples: int = 500, seed: int = 1) -> CriterionResult:
    rng = random.Random(seed)
    done = bad = 0
    first = ""
    trial = 0
    while done < triples:
        trial += 1
        n = rng.randint(4, 40)
        m = rng.randint(n, min(math.comb(n, 2), 2 * n))
        G = generate("random-gnm", {"n": n, "m": m}, seed * 100003 + trial)
        for C, r in itertools.product(_some_cycles(G, rng, 3), (1, 2, 3)):
            if done < triples:
                msg = refinement_violation(G, C, r)
                done += 1
                if msg:
                    bad += 1
                    first = first or f"trial {trial}, r={r}: {msg}"
    detail = f"{done} (G, C, r) triples, {bad} violations"
    if first:
        detail += f"; first {first}"
    return CriterionResult("refinement suite", bad == 0, detail)


def random_subcubic(n: int, rng: random.Random) -> Graph:
    """Random graph with all degrees in {2, 3}: cycles plus random chords."""
    order = list(range(n))
    rng.shuffle(order)
    edges: set[tuple[int, int]] = set()
    start = 0
    while start < n:
        size = n - start if n - start < 6 else rng.randint(3, n - start)
        if n - start - size in (1, 2):
            size = n - start
        ring = order[start:start + size]
        edges.update(tuple(sorted((ring[i], ring[(i + 1) % size]))) for i in range(size))
        start += size
    free = list(range(n))
    rng.shuffle(free)
    for _ in range(rng.randint(0, n // 2)):
        if len(free) < 2:
            break
        a, b = free.pop(), free.pop()
        e = (min(a, b), max(a, b))
        if e in edges:
            continue
        edges.add(e)
    return build_graph(n, edges)


def criterion_subcubic(graphs: int = 400, seed: int = 2) -> CriterionResult:
    rng = random.Random(seed)
    limits = OracleLimits(max_vertices=18, max_cycles=5000)
    checked = bad = guaranteed = 0
    first = ""
    for _ in range(graphs):
        G = random_subcubic(rng.randint(3, 18), rng)
        assert {G.degree(v) for v in G.vertices()} <= {2, 3}
        branch = sum(1 for v in G.vertices() if G.degree(v) == 3)
        for k in (1, 2):
            feasible = max_d_packing(G, 0, limits, stop_at=k) >= k
            try:
                found = find_disjoint_cycles(G, k)
                got = len(found) == k and all(
                    not (a.vertex_set & b.vertex_set) for a, b in itertools.combinations(found, 2)
                )
            except PreconditionError:
                got = False
            checked += 1
            if branch >= s_bound(k):
                guaranteed += 1
                if not feasible:
                    bad += 1
                    first = first or f"oracle finds no {k} cycles with {branch} branch vertices"
            if got != feasible:
                bad += 1
                first = first or f"n={G.n}, k={k}: solver {got}, oracle {feasible}"
    detail = f"{checked} (graph, k) checks, {guaranteed} with >= s(k) branch vertices, {bad} failures"
    if first:
        detail += f"; first {first}"
    return CriterionResult("subcubic suite", bad == 0, detail)


def random_forest(size: int, rng: random.Random) -> RootedForest:
    edges = []
    for v in range(1, size):
        if rng.random() < 0.85:
            edges.append((rng.randrange(v), v))
    return RootedForest.from_edges(size, edges)


def random_subtree(F: RootedForest, rng: random.Random, max_size: int) -> frozenset[int]:
    G = F.underlying
    part = {rng.randrange(G.n)}
    target = rng.randint(1, max_size)
    while len(part) < target:
        frontier = sorted({w for v in part for w in G.adjacency[v]} - part)
        if not frontier:
            break
        part.add(rng.choice(frontier))
    return frozenset(part)


def _max_independent(items: Sequence, compatible: Callable, k: int) -> bool:
    return any(
        all(compatible(a, b) for a, b in itertools.combinations(combo, 2))
        for combo in itertools.combinations(items, k)
    )


def criterion_helly(families: int = 300, seed: int = 3) -> CriterionResult:
    rng = random.Random(seed)
    bad = packs = hits = 0
    first = ""

    def fail(msg: str) -> None:
        nonlocal bad, first
        bad += 1
        first = first or msg

    for trial in range(families):
        c = 1 + trial % 3
        k = rng.randint(1, 3)
        # Tuple families over c forests of total size at most 12.
        sizes = [1] * c
        for _ in range(rng.randint(0, 12 - c)):
            sizes[rng.randrange(c)] += 1
        forests = [random_forest(s, rng) for s in sizes]
        tuples = []
        for _ in range(rng.randint(1, 8)):
            entries = [
                random_subtree(F, rng, 4) if rng.random() < 0.7 else None for F in forests
            ]
            if all(e is None for e in entries):
                entries[0] = random_subtree(forests[0], rng, 4)
            tuples.append(ForestTuple.of(*entries))
        res = tuples_pack_or_hit(forests, tuples, k)
        try:
            check_tuples_result(forests, tuples, k, res)
        except AssertionError as exc:
            fail(f"tuples trial {trial}: {exc}")
        if res.is_pack:
            packs += 1
            if not all(independent(tuples[a], tuples[b])
                       for a, b in itertools.combinations(res.pack, 2)):
                fail(f"tuples trial {trial}: packed tuples not independent")
        else:
            hits += 1
            if res.hit_size > ell(k, c):
                fail(f"tuples trial {trial}: hit {res.hit_size} > ell({k},{c})")
            if c == 1 and res.hit_size > k - 1:
                fail(f"tuples trial {trial}: c=1 hit {res.hit_size} > k-1")
            if not all(any(e is not None and e & x for e, x in zip(t.entries, res.hit))
                       for t in tuples):
                fail(f"tuples trial {trial}: hit misses a tuple")

        # Subgraph families with at most c components in one forest.
        F = random_forest(rng.randint(1, 12), rng)
        subs = []
        for _ in range(rng.randint(1, 8)):
            parts = frozenset().union(*(random_subtree(F, rng, 3) for _ in range(rng.randint(1, c))))
            if len(components(F.underlying, parts)) <= c:
                subs.append(parts)
        if not subs:
            subs.append(frozenset({0}))
        res = subgraphs_pack_or_hit(F, subs, k, c)
        try:
            check_subgraphs_result(F, subs, k, c, res)
        except AssertionError as exc:
            fail(f"subgraphs trial {trial}: {exc}")
        if res.is_pack:
            packs += 1
            if not all(not (subs[a] & subs[b]) for a, b in itertools.combinations(res.pack, 2)):
                fail(f"subgraphs trial {trial}: packed members intersect")
        else:
            hits += 1
            X = res.hit[0]
            if len(X) > ell_star(k, c):
                fail(f"subgraphs trial {trial}: hit {len(X)} > ell*({k},{c})")
            if c == 1 and len(X) > k - 1:
                fail(f"subgraphs trial {trial}: c=1 hit {len(X)} > k-1")
            if not all(A & X for A in subs):
                fail(f"subgraphs trial {trial}: hit misses a member")
            if c == 1 and _max_independent(subs, lambda a, b: not (a & b), k):
                fail(f"subgraphs trial {trial}: c=1 hit although {k} disjoint members exist")
    detail = f"{2 * families} families ({packs} pack, {hits} hit), {bad} violations"
    if first:
        detail += f"; first {first}"
    return CriterionResult("forest helly suite", bad == 0, detail)


def criterion_budgets() -> CriterionResult:
    checks = {
        "budgets(2,1) == (1,1)": budgets(2, 1) == (1, 1),
        "ell*(2,3) pinned": ell_star(2, 3) == PINNED_ELL_STAR_2_3,
        "ell*(k,1) == k-1": all(ell_star(k, 1) == k - 1 for k in range(1, 20)),
        "ell(k,0) == 0": all(ell(k, 0) == 0 for k in range(1, 20)),
    }
    failed = [name for name, ok in checks.items() if not ok]
    detail = f"ell*(2,3) = {ell_star(2, 3)}; {len(checks) - len(failed)}/{len(checks)} checks"
    if failed:
        detail += f"; failed {', '.join(failed)}"
    return CriterionResult("budget regression", not failed, detail)


def criterion_determinism(count: int = 1000, workers: int = 1) -> CriterionResult:
    results, _ = corpus_results(count, workers)
    h = hashlib.sha256()
    for s in results:
        h.update(s.instance.name.encode())
        h.update(s.cert_json.encode() or s.error.encode())
        h.update(b"\n")
    first = h.hexdigest()
    second = corpus_digest(count)
    env = dict(os.environ, PYTHONHASHSEED="12345")
    code = f"from coarse_ep.acceptance import corpus_digest; print(corpus_digest({count}))"
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    third = proc.stdout.strip()
    ok = first == second == third
    detail = f"sha256 {first[:16]}... over {len(results)} certificates, 3 runs " + (
        "identical" if ok else f"differ ({second[:16]}..., {third[:16] or proc.stderr[-200:]})"
    )
    return CriterionResult("determinism", ok, detail)


def run_all(count: int = 1000, workers: int = 1) -> list[CriterionResult]:
    return [
        criterion_totality(count, workers),
        criterion_hitting_bound(count, workers),
        criterion_packing_bound(count, workers),
        criterion_oracle(count, workers, minimum=min(200, (3 * count) // 10)),
        criterion_refinement(),
        criterion_subcubic(),
        criterion_helly(),
        criterion_budgets(),
        criterion_determinism(count, workers),
    ]


def summary_json(results: Sequence[CriterionResult]) -> str:
    return json.dumps([r.__dict__ for r in results], indent=2)
