"""Helly-type pack-or-hit for subtrees and subforests of forests.

Three layers:

* :func:`select_independent` picks prescribed numbers of tuples from several
  internally independent families so that the whole selection is independent.
* :func:`tuples_pack_or_hit` takes a family of tuples ``(A_1, ..., A_c)`` with
  ``A_i`` a subtree of forest ``F_i`` (or null) and returns ``k`` pairwise
  independent tuples or hitting sets ``X_i`` of total size at most
  ``ell(k, c)``.
* :func:`subgraphs_pack_or_hit` does the same for subgraphs of one forest with
  at most ``c`` components, with a single hitting set of size at most
  ``ell_star(k, c)``.

Internally every forest is made into a binary tree: a virtual root joins the
components, null entries get private virtual leaves, and vertices with more
than two children get a caterpillar of virtual vertices.  Virtual ids start
at the forest's ``n`` and never appear in returned results.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import PreconditionError, check
from .graph_core import Graph, bfs_distances, build_graph, components, is_forest

# Families at most this large get an exact independence test when the
# recursive pack-or-hit is inconclusive.
EXACT_FAMILY_LIMIT = 48


# ---------------------------------------------------------------- budgets


def _check_kc(k: int, c: int) -> None:
    if k < 1 or c < 1:
        raise PreconditionError(f"budgets need k, c >= 1, got k={k}, c={c}")


@lru_cache(maxsize=None)
def ell(k: int, c: int) -> int:
    """Hitting budget for tuples: ``ell(k,1) = k-1``, ``ell(k,c) = k + ell(2k^c, c-1)``."""
    if c == 0:
        return 0
    _check_kc(k, c)
    if c == 1:
        return k - 1
    return k + ell(2 * k**c, c - 1)


@lru_cache(maxsize=None)
def ell_star(k: int, c: int) -> int:
    """Hitting budget for subgraphs with at most ``c`` components."""
    _check_kc(k, c)
    if c == 1:
        return k - 1
    pairs = math.comb(c, 2)
    prev = ell_star(k, c - 1)
    return pairs * prev + math.comb(2 * pairs * prev, c) * ell(k, c)


def budgets(k: int, c: int) -> tuple[int, int]:
    _check_kc(k, c)
    return ell(k, c), ell_star(k, c)


def ell_at_least(k: int, c: int, x: int) -> bool:
    """``ell(k, c) >= x`` without evaluating towers of powers."""
    while True:
        if c == 0:
            return x <= 0
        if c == 1:
            return k - 1 >= x
        if k >= x:
            return True
        x -= k
        # ell(K, c-1) >= K - 1 and K = 2k^c; stop once K clearly exceeds x.
        if c * k.bit_length() > x.bit_length() + 2:
            return True
        k, c = 2 * k**c, c - 1


def _capped_pow(base: int, exp: int, cap: int) -> int:
    """``min(base**exp, cap)`` for ``base >= 1`` without building huge ints."""
    out = 1
    for _ in range(exp):
        out *= base
        if out >= cap:
            return cap
    return out


# ---------------------------------------------------------------- forests


@dataclass(frozen=True)
class RootedForest:
    """A forest with one root per component and a post-order ``order``."""

    underlying: Graph
    roots: tuple[int, ...]
    parent: dict[int, int] = field(repr=False)
    order: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_graph(cls, G: Graph, roots: Iterable[int] | None = None) -> RootedForest:
        if not is_forest(G):
            raise PreconditionError("rooted forest needs an acyclic graph")
        comps = components(G)
        if roots is None:
            chosen = [comp[0] for comp in comps]
        else:
            chosen = sorted(set(roots))
            where = {v: i for i, comp in enumerate(comps) for v in comp}
            hit = sorted(where[r] for r in chosen)
            if hit != list(range(len(comps))):
                raise PreconditionError("need exactly one root per component")
        parent: dict[int, int] = {}
        order: list[int] = []
        for r in sorted(chosen):
            parent[r] = -1
            # Iterative post-order, children ascending.
            stack = [(r, iter(sorted(G.adjacency[r])))]
            while stack:
                v, it = stack[-1]
                for w in it:
                    if w != parent[v]:
                        parent[w] = v
                        stack.append((w, iter(sorted(G.adjacency[w]))))
                        break
                else:
                    stack.pop()
                    order.append(v)
        forest = cls(G, tuple(sorted(chosen)), parent, tuple(order))
        forest.validate()
        return forest

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> RootedForest:
        return cls.from_graph(build_graph(n, edges))

    @property
    def n(self) -> int:
        return self.underlying.n

    def children(self, v: int) -> list[int]:
        return [w for w in self.underlying.adjacency[v] if self.parent.get(w) == v]

    def validate(self) -> None:
        check(is_forest(self.underlying), "rooted forest is not acyclic")
        pos = {v: i for i, v in enumerate(self.order)}
        check(len(pos) == self.n, "order does not list every vertex once")
        for v in range(self.n):
            p = self.parent[v]
            if p == -1:
                check(v in self.roots, f"parentless vertex {v} is not a root")
            else:
                check(self.underlying.has_edge(v, p), f"parent of {v} is not a neighbour")
                check(pos[v] < pos[p], f"{v} does not precede its parent in the order")

    def is_connected_subset(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        if not vs or any(not 0 <= v < self.n for v in vs):
            return False
        return len(bfs_distances(self.underlying, [min(vs)], allowed=vs)) == len(vs)


@dataclass(frozen=True)
class ForestTuple:
    """One entry per forest: a connected vertex set, or ``None`` for null."""

    entries: tuple[frozenset[int] | None, ...]

    @classmethod
    def of(cls, *entries: Iterable[int] | None) -> ForestTuple:
        return cls(tuple(None if e is None else frozenset(e) for e in entries))

    def is_trivial(self) -> bool:
        return all(e is None for e in self.entries)

    def validate(self, forests: Sequence[RootedForest]) -> None:
        if len(self.entries) != len(forests):
            raise PreconditionError(
                f"tuple has {len(self.entries)} entries for {len(forests)} forests"
            )
        for i, (e, F) in enumerate(zip(self.entries, forests)):
            if e is not None and not F.is_connected_subset(e):
                raise PreconditionError(f"entry {i} = {sorted(e)} is not a subtree of forest {i}")


def independent(a: ForestTuple, b: ForestTuple) -> bool:
    return all(
        x is None or y is None or not (x & y) for x, y in zip(a.entries, b.entries)
    )


class Tag(enum.Enum):
    PACK = "pack"
    HIT = "hit"


@dataclass(frozen=True)
class PackOrHitResult:
    tag: Tag
    pack: tuple[int, ...] = ()
    hit: tuple[frozenset[int], ...] = ()

    @property
    def is_pack(self) -> bool:
        return self.tag is Tag.PACK

    @property
    def hit_size(self) -> int:
        return sum(len(x) for x in self.hit)


# ---------------------------------------------------------------- binarization


class _Tree:
    """Rooted tree over ids ``0..N-1`` with post-order positions."""

    def __init__(self, graph: Graph, root: int):
        self.graph = graph
        self.root = root
        self.parent = {root: -1}
        self.depth = {root: 0}
        self.order: list[int] = []
        stack = [(root, iter(sorted(graph.adjacency[root])))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in self.parent:
                    self.parent[w] = v
                    self.depth[w] = self.depth[v] + 1
                    stack.append((w, iter(sorted(graph.adjacency[w]))))
                    break
            else:
                stack.pop()
                self.order.append(v)
        check(len(self.order) == graph.n, "prepared forest is not a tree")
        self.pos = {v: i for i, v in enumerate(self.order)}
        self.children = {v: [] for v in self.order}
        for v in self.order:
            if self.parent[v] != -1:
                self.children[self.parent[v]].append(v)
        for v in self.children:
            self.children[v].sort()

    def top(self, vertices: Iterable[int]) -> int:
        """The member closest to the root (unique for a connected set)."""
        return min(vertices, key=lambda v: (self.depth[v], v))


@dataclass
class Binarized:
    """A forest turned into a binary tree, with the map back to its vertices.

    Ids ``0..n-1`` are the forest's own vertices, the next ``n_null`` ids are
    private leaves for null entries, then the virtual root, then caterpillar
    vertices.  ``owner[x]`` is the original vertex whose expansion holds ``x``.
    """

    n: int
    n_null: int
    tree: _Tree
    owner: list[int]
    members: dict[int, list[int]]

    @property
    def root(self) -> int:
        return self.n + self.n_null

    def is_virtual(self, x: int) -> bool:
        return x >= self.n

    def expand(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(x for v in vertices for x in self.members[v])

    def compress(self, vertices: Iterable[int]) -> frozenset[int]:
        """Owners of ``vertices``, with anything owned by the virtual root dropped."""
        return frozenset(self.owner[x] for x in vertices if self.owner[x] != self.root)


def binarize(forest: RootedForest, n_null: int = 0) -> Binarized:
    n = forest.n
    root = n + n_null
    adj: dict[int, list[int]] = {v: [] for v in range(root + 1)}
    for u, v in forest.underlying.edges():
        adj[u].append(v)
        adj[v].append(u)
    for r in list(forest.roots) + list(range(n, root)):
        adj[root].append(r)
        adj[r].append(root)
    tree = _Tree(build_graph(root + 1, [(u, v) for u in adj for v in adj[u] if u < v]), root)

    owner = list(range(root + 1))
    members = {v: [v] for v in range(root + 1)}
    edges: list[tuple[int, int]] = []
    next_id = root + 1
    for v in tree.order:
        kids = tree.children[v]
        if len(kids) <= 2:
            edges.extend((v, u) for u in kids)
            continue
        cur = v
        for u in kids[:-2]:
            edges.append((cur, u))
            edges.append((cur, next_id))
            owner.append(v)
            members[v].append(next_id)
            cur = next_id
            next_id += 1
        edges.extend((cur, u) for u in kids[-2:])
    out = Binarized(n, n_null, _Tree(build_graph(next_id, edges), root), owner, members)
    for v in out.tree.order:
        check(len(out.tree.children[v]) <= 2, "binarized tree has a vertex with 3 children")
    return out


# ---------------------------------------------------------------- internal pack-or-hit

# Internal tuples are plain tuples of nonempty frozensets over prepared ids.
_ITuple = tuple[frozenset[int], ...]


def _indep(a: _ITuple, b: _ITuple) -> bool:
    return all(not (x & y) for x, y in zip(a, b))


def _all_indep(items: Sequence[_ITuple]) -> bool:
    return all(_indep(a, b) for a, b in itertools.combinations(items, 2))


@dataclass
class _Pack:
    indices: list[int]


@dataclass
class _Hit:
    sets: list[set[int]]


def _exact_independent(family: Sequence[_ITuple], K: int) -> list[_ITuple] | None:
    """``K`` pairwise independent members of ``family``, or ``None``."""
    n = len(family)
    conflict = [0] * n
    for i, j in itertools.combinations(range(n), 2):
        if not _indep(family[i], family[j]):
            conflict[i] |= 1 << j
            conflict[j] |= 1 << i
    chosen: list[int] = []

    def search(cand: int) -> bool:
        if len(chosen) == K:
            return True
        if len(chosen) + cand.bit_count() < K:
            return False
        low = cand & -cand
        v = low.bit_length() - 1
        chosen.append(v)
        if search(cand & ~conflict[v] & ~low):
            return True
        chosen.pop()
        return search(cand & ~low)

    if not search((1 << n) - 1):
        return None
    return [family[i] for i in chosen]


class _Decider:
    """Answers "does this family hold ``K`` independent members?" with a witness.

    Exact when the family is small, when the recursive pack-or-hit packs, or
    when its hitting sets are smaller than ``K``.  Otherwise the answer is a
    tentative no; the caller corrects it through :meth:`learn`.
    """

    def __init__(self, trees: Sequence[_Tree], K: int):
        self.trees = trees
        self.K = K
        self.memo: dict[frozenset[_ITuple], list[_ITuple] | None] = {}
        self.witnesses: list[tuple[_ITuple, ...]] = []

    def learn(self, witness: Sequence[_ITuple]) -> None:
        self.witnesses.append(tuple(witness))
        self.memo = {key: w for key, w in self.memo.items() if w is not None}

    def __call__(self, family: list[_ITuple]) -> list[_ITuple] | None:
        if len(family) < self.K:
            return None
        fs = frozenset(family)
        for W in self.witnesses:
            if fs.issuperset(W):
                return list(W)
        if fs in self.memo:
            return self.memo[fs]
        if self.K == 1:
            w: list[_ITuple] | None = [family[0]]
        else:
            res = _pack_or_hit(self.trees, family, self.K)
            if isinstance(res, _Pack):
                w = [family[i] for i in res.indices]
            elif sum(len(s) for s in res.sets) < self.K:
                w = None
            elif len(family) <= EXACT_FAMILY_LIMIT:
                w = _exact_independent(family, self.K)
            else:
                w = None
        self.memo[fs] = w
        return w


@dataclass
class _Stage:
    v: int
    members: list[int]
    witness: list[_ITuple] | None
    below: list[set[_ITuple]]


def _rests(fam: Sequence[_ITuple], idx: Iterable[int]) -> list[_ITuple]:
    seen: dict[_ITuple, None] = {}
    for i in idx:
        seen.setdefault(fam[i][1:], None)
    return list(seen)


def _scan(trees, fam, k, tops, decide):
    """Build ``v_1 < ... < v_m`` (stopping at ``k``); also return the family
    below the root after the last removal."""
    t1 = trees[0]
    c = len(trees)
    removed: set[int] = set()
    last = -1
    alive = list(range(len(fam)))
    stages: list[_Stage] = []
    while True:
        at_top: dict[int, list[int]] = {}
        for i in alive:
            at_top.setdefault(tops[i], []).append(i)
        below: dict[int, list[int]] = {}
        found = None
        for p, v in enumerate(t1.order):
            if v in removed:
                continue
            lst = list(at_top.get(v, ()))
            for u in t1.children[v]:
                if u not in removed:
                    lst.extend(below[u])
            below[v] = lst
            if p <= last or not lst:
                continue
            if c == 1:
                found = (v, p, lst, None)
                break
            w = decide(_rests(fam, lst))
            if w is not None:
                found = (v, p, lst, w)
                break
        if found is None:
            root = t1.root
            tail = set(_rests(fam, below[root])) if root not in removed and c > 1 else set()
            return stages, tail
        v, p, lst, w = found
        kids = [set(_rests(fam, below[u])) for u in t1.children[v] if u not in removed]
        stages.append(_Stage(v, sorted(lst), w, kids if c > 1 else []))
        if len(stages) >= k:
            return stages, set()
        removed.add(v)
        last = p
        alive = [i for i in alive if v not in fam[i][0]]


def _pack_or_hit(trees: Sequence[_Tree], fam: Sequence[_ITuple], k: int) -> _Pack | _Hit:
    c = len(trees)
    if not fam:
        return _Hit([set() for _ in range(c)])
    if k == 1:
        return _Pack([0])
    if len(fam) < k:
        # One vertex per member already hits everything within budget.
        return _Hit([{trees[0].top(A[0]) for A in fam}] + [set() for _ in range(c - 1)])

    cap = len(fam) + 1
    K = _capped_pow(k, c - 1, cap)
    decide = _Decider(trees[1:], K)
    tops = [trees[0].top(A[0]) for A in fam]
    while True:
        stages, tail = _scan(trees, fam, k, tops, decide)
        m = len(stages)
        if m >= k:
            if c == 1:
                picks = [st.members[0] for st in stages]
            else:
                chosen = _select(trees[1:], [st.witness for st in stages], [1] * k)
                picks = [
                    next(i for i in st.members if fam[i][1:] == sel[0])
                    for st, sel in zip(stages, chosen)
                ]
            check(_all_indep([fam[i] for i in picks]), "scan packing is not independent")
            return _Pack(picks)
        X1 = {st.v for st in stages}
        if c == 1:
            return _Hit([X1])
        blocks = [b for st in stages for b in st.below] + ([tail] if tail else [])
        union: dict[_ITuple, None] = {}
        for b in blocks:
            for t in sorted(b, key=_sort_key):
                union.setdefault(t, None)
        a_prime = list(union)
        sub = _pack_or_hit(trees[1:], a_prime, 2 * _capped_pow(k, c, cap))
        if isinstance(sub, _Hit):
            return _Hit([X1] + sub.sets)
        # The recursive call packed, so some block was wrongly judged small.
        packed = [a_prime[i] for i in sub.indices]
        for b in blocks:
            inside = [t for t in packed if t in b]
            if len(inside) >= K:
                decide.learn(inside[:K])
                break
        else:
            check(False, "recursive packing does not concentrate in one block")


def _sort_key(t: _ITuple) -> tuple:
    return tuple(tuple(sorted(x)) for x in t)


def _select(
    trees: Sequence[_Tree], families: Sequence[Sequence[_ITuple]], targets: Sequence[int]
) -> list[list[_ITuple]]:
    """Independent selection following the induction on the number of forests."""
    c = len(trees)
    out: list[list[_ITuple]] = [[] for _ in families]
    live = [j for j, x in enumerate(targets) if x > 0]
    if not live:
        return out
    m, k = len(live), sum(targets)
    for j in live:
        check(len(families[j]) >= m ** (c - 1) * k, f"family {j} too small for selection")
    if c == 1:
        t = trees[0]
        pools = {j: list(families[j]) for j in live}
        need = {j: targets[j] for j in live}
        while need:
            _, j, A = min(
                ((t.pos[t.top(A[0])], j, A) for j in need for A in pools[j]),
                key=lambda x: (x[0], x[1]),
            )
            out[j].append(A)
            v = t.top(A[0])
            need[j] -= 1
            if need[j] == 0:
                del need[j]
            for jj in pools:
                pools[jj] = [B for B in pools[jj] if v not in B[0]]
        return out
    y = m ** (c - 2) * k
    firsts = _select(
        trees[:1],
        [[(A[0],) for A in families[j]] if j in live else [] for j in range(len(families))],
        [y if j in live else 0 for j in range(len(families))],
    )
    rest_fams: list[list[_ITuple]] = []
    for j in range(len(families)):
        keep = {B[0] for B in firsts[j]}
        rest_fams.append([A[1:] for A in families[j] if A[0] in keep])
    rests = _select(trees[1:], rest_fams, targets)
    for j in range(len(families)):
        for R in rests[j]:
            out[j].append(next(A for A in families[j] if A[1:] == R and A[0] in {B[0] for B in firsts[j]}))
    return out


# ---------------------------------------------------------------- public API


@dataclass
class _Prepared:
    forests: list[Binarized]
    tuples: list[_ITuple]
    null_owner: dict[tuple[int, int], int]  # (forest, virtual leaf) -> tuple index


def _prepare(forests: Sequence[RootedForest], tuples: Sequence[ForestTuple]) -> _Prepared:
    c = len(forests)
    n_null = [sum(1 for t in tuples if t.entries[i] is None) for i in range(c)]
    bins = [binarize(F, q) for F, q in zip(forests, n_null)]
    nxt = [F.n for F in forests]
    null_owner: dict[tuple[int, int], int] = {}
    out: list[_ITuple] = []
    for idx, t in enumerate(tuples):
        entries = []
        for i, e in enumerate(t.entries):
            if e is None:
                null_owner[(i, nxt[i])] = idx
                entries.append(frozenset([nxt[i]]))
                nxt[i] += 1
            else:
                entries.append(bins[i].expand(e))
        out.append(tuple(entries))
    return _Prepared(bins, out, null_owner)


def _greedy_pack(items, k: int, compatible) -> list[int] | None:
    """First-fit packing in input order; a cheap way to find easy packings."""
    chosen: list[int] = []
    for i, a in enumerate(items):
        if all(compatible(items[j], a) for j in chosen):
            chosen.append(i)
            if len(chosen) == k:
                return chosen
    return None


def _hits(t: ForestTuple, X: Sequence[Iterable[int]]) -> bool:
    return any(e is not None and not e.isdisjoint(x) for e, x in zip(t.entries, X))


def _prune(tuples: Sequence[ForestTuple], X: list[set[int]]) -> list[set[int]]:
    """Drop hitting vertices one at a time (largest first) while all tuples stay hit."""
    for i in reversed(range(len(X))):
        for v in sorted(X[i], reverse=True):
            X[i].discard(v)
            if not all(_hits(t, X) for t in tuples):
                X[i].add(v)
    return X


def check_tuples_result(
    forests: Sequence[RootedForest], tuples: Sequence[ForestTuple], k: int, res: PackOrHitResult
) -> None:
    """Raise :class:`InvariantViolation` unless ``res`` is a valid answer."""
    c = len(forests)
    if res.is_pack:
        check(len(set(res.pack)) == k, f"pack has {len(res.pack)} members, expected {k}")
        for a, b in itertools.combinations(res.pack, 2):
            check(independent(tuples[a], tuples[b]), f"tuples {a} and {b} are not independent")
        return
    check(len(res.hit) == c, "hit needs one set per forest")
    for i, (X, F) in enumerate(zip(res.hit, forests)):
        check(all(0 <= v < F.n for v in X), f"hit set {i} has a vertex outside forest {i}")
    for idx, t in enumerate(tuples):
        check(_hits(t, res.hit), f"tuple {idx} is not hit")
    check(ell_at_least(k, c, res.hit_size), f"hit size {res.hit_size} exceeds ell({k},{c})")


def tuples_pack_or_hit(
    forests: Sequence[RootedForest], tuples: Sequence[ForestTuple], k: int
) -> PackOrHitResult:
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    forests = list(forests)
    c = len(forests)
    if c < 1:
        raise PreconditionError("need at least one forest")
    for idx, t in enumerate(tuples):
        t.validate(forests)
        if t.is_trivial():
            raise PreconditionError(f"tuple {idx} is trivial")

    first: dict[ForestTuple, int] = {}
    for idx, t in enumerate(tuples):
        first.setdefault(t, idx)
    distinct = list(first)
    quick = _greedy_pack(distinct, k, independent)
    if quick is not None:
        out = PackOrHitResult(Tag.PACK, pack=tuple(first[distinct[i]] for i in quick))
        check_tuples_result(forests, tuples, k, out)
        return out
    prep = _prepare(forests, distinct)
    res = _pack_or_hit([b.tree for b in prep.forests], prep.tuples, k)

    if isinstance(res, _Pack):
        out = PackOrHitResult(Tag.PACK, pack=tuple(first[distinct[i]] for i in res.indices))
    else:
        X: list[set[int]] = [set() for _ in range(c)]
        for i, xs in enumerate(res.sets):
            b = prep.forests[i]
            for x in xs:
                v = b.owner[x]
                if v < b.n:
                    X[i].add(v)
                elif (i, v) in prep.null_owner:
                    # A private leaf: swap in a vertex of another entry.
                    t = distinct[prep.null_owner[(i, v)]]
                    j = next(j for j, e in enumerate(t.entries) if e is not None)
                    X[j].add(min(t.entries[j]))
                # Anything owned by the virtual root lies in no tuple.
        X = _prune(distinct, X)
        out = PackOrHitResult(Tag.HIT, hit=tuple(frozenset(x) for x in X))
    check_tuples_result(forests, tuples, k, out)
    return out


def select_independent(
    forests: Sequence[RootedForest],
    families: Sequence[Sequence[ForestTuple]],
    targets: Sequence[int],
) -> list[list[int]]:
    """Indices into each family: ``targets[j]`` from family ``j``, all independent."""
    if len(families) != len(targets):
        raise PreconditionError("one target per family")
    if any(x < 0 for x in targets):
        raise PreconditionError("targets must be nonnegative")
    c = len(forests)
    live = [j for j, x in enumerate(targets) if x > 0]
    m, k = len(live), sum(targets)
    for j, fam in enumerate(families):
        for t in fam:
            t.validate(forests)
        for a, b in itertools.combinations(fam, 2):
            if not independent(a, b):
                raise PreconditionError(f"family {j} is not pairwise independent")
        if j in live and len(fam) < m ** (c - 1) * k:
            raise PreconditionError(
                f"family {j} has {len(fam)} < {m ** (c - 1) * k} members"
            )
    flat = [t for fam in families for t in fam]
    prep = _prepare(forests, flat)
    starts = list(itertools.accumulate([0] + [len(f) for f in families]))
    ifams = [prep.tuples[starts[j]:starts[j + 1]] for j in range(len(families))]
    chosen = _select([b.tree for b in prep.forests], ifams, targets)
    out = [[ifams[j].index(A) for A in chosen[j]] for j in range(len(families))]
    picked = [families[j][i] for j in range(len(families)) for i in out[j]]
    for a, b in itertools.combinations(picked, 2):
        check(independent(a, b), "selection is not independent")
    for j, x in enumerate(targets):
        check(len(out[j]) == x, f"family {j}: selected {len(out[j])}, wanted {x}")
    return out


# ---------------------------------------------------------------- subgraphs


def _tree_path(T: Graph, src: frozenset[int], dst: frozenset[int]) -> list[int]:
    """Vertices of a shortest ``src``-``dst`` path in the tree ``T``."""
    parent = {s: -1 for s in sorted(src)}
    frontier = sorted(src)
    while frontier:
        nxt = []
        for v in frontier:
            if v in dst:
                path = [v]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path
            for w in T.adjacency[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    raise AssertionError("components of a subtree family are not connected in the tree")


def _components_of(T: Graph, vertices: frozenset[int]) -> list[frozenset[int]]:
    return [frozenset(c) for c in components(T, vertices)]


def _relabel(T: Graph, comp: Sequence[int]) -> tuple[RootedForest, dict[int, int]]:
    idx = {v: i for i, v in enumerate(comp)}
    edges = [(idx[u], idx[v]) for u in comp for v in T.adjacency[u] if v in idx and u < v]
    return RootedForest.from_edges(len(comp), edges), idx


def _subgraphs(T: Graph, fam: list[frozenset[int]], k: int, c: int, refined: bool):
    """Pack (indices) or hit (set of ids of ``T``) for subgraphs of the tree ``T``."""
    if not fam:
        return _Hit([set()])
    if k == 1:
        return _Pack([0])
    if len(fam) < k:
        return _Hit([{min(A) for A in fam}])
    if c == 1:
        F, idx = _relabel(T, range(T.n))
        res = tuples_pack_or_hit([F], [ForestTuple((A,)) for A in fam], k)
        if res.is_pack:
            return _Pack(list(res.pack))
        return _Hit([set(res.hit[0])])

    comps = [_components_of(T, A) for A in fam]
    X0: set[int] = set()
    for i, j in itertools.combinations(range(c), 2):
        aug = []
        for A, cs in zip(fam, comps):
            if len(cs) > j:
                aug.append(A | frozenset(_tree_path(T, cs[i], cs[j])))
            else:
                aug.append(A)
        sub = _subgraphs(T, aug, k, c - 1, refined)
        if isinstance(sub, _Pack):
            return sub
        X0 |= sub.sets[0]

    A0 = [a for a, A in enumerate(fam) if A.isdisjoint(X0)]
    parts = components(T, [v for v in range(T.n) if v not in X0])
    where = {v: q for q, comp in enumerate(parts) for v in comp}
    touched: dict[int, tuple[int, ...]] = {}
    for a in A0:
        qs = sorted({where[v] for v in fam[a]})
        check(len(qs) == len(comps[a]), "a component of F - X0 holds two pieces of one subgraph")
        touched[a] = tuple(qs)

    used = sorted({q for qs in touched.values() for q in qs})
    if not refined or len(used) <= c:
        groups = [tuple(used)] if A0 else []
    else:
        sets = sorted({frozenset(qs) for qs in touched.values()}, key=lambda s: sorted(s))
        groups = [tuple(sorted(s)) for s in sets if not any(s < o for o in sets)]

    X = set(X0)
    for group in groups:
        members = [a for a in A0 if set(touched[a]) <= set(group)]
        forests, maps = zip(*(_relabel(T, parts[q]) for q in group))
        tuples = []
        for a in members:
            entries = []
            for q, mp in zip(group, maps):
                piece = [mp[v] for v in fam[a] if v in mp]
                entries.append(frozenset(piece) if piece else None)
            tuples.append(ForestTuple(tuple(entries)))
        res = tuples_pack_or_hit(list(forests), tuples, k)
        if res.is_pack:
            return _Pack([members[i] for i in res.pack])
        for q, xs in zip(group, res.hit):
            X.update(parts[q][x] for x in xs)
    return _Hit([X])


def check_subgraphs_result(
    F: RootedForest, subgraphs: Sequence[frozenset[int]], k: int, c: int, res: PackOrHitResult
) -> None:
    if res.is_pack:
        check(len(set(res.pack)) == k, f"pack has {len(res.pack)} members, expected {k}")
        for a, b in itertools.combinations(res.pack, 2):
            check(subgraphs[a].isdisjoint(subgraphs[b]), f"subgraphs {a} and {b} intersect")
        return
    (X,) = res.hit
    check(all(0 <= v < F.n for v in X), "hit set leaves the forest")
    for idx, A in enumerate(subgraphs):
        check(not A.isdisjoint(X), f"subgraph {idx} is not hit")


def subgraphs_pack_or_hit(
    F: RootedForest,
    subgraphs: Sequence[Iterable[int]],
    k: int,
    c: int,
    refined: bool = True,
) -> PackOrHitResult:
    """``k`` vertex-disjoint members, or one hitting set of size at most
    ``ell_star(k, c)``.  Subgraphs are given by vertex sets and taken as
    induced.  ``refined=False`` uses the single-instance split, which has
    a much weaker size guarantee and exists for differential testing."""
    if k < 1 or c < 1:
        raise PreconditionError(f"need k, c >= 1, got k={k}, c={c}")
    fam = [frozenset(A) for A in subgraphs]
    for idx, A in enumerate(fam):
        if not A:
            raise PreconditionError(f"subgraph {idx} is null")
        if any(not 0 <= v < F.n for v in A):
            raise PreconditionError(f"subgraph {idx} has a vertex outside the forest")
        count = len(components(F.underlying, A))
        if count > c:
            raise PreconditionError(f"subgraph {idx} has {count} > {c} components")

    first: dict[frozenset[int], int] = {}
    for idx, A in enumerate(fam):
        first.setdefault(A, idx)
    distinct = list(first)
    quick = _greedy_pack(distinct, k, lambda a, b: a.isdisjoint(b))
    if quick is not None:
        out = PackOrHitResult(Tag.PACK, pack=tuple(first[distinct[i]] for i in quick))
        check_subgraphs_result(F, fam, k, c, out)
        return out
    b = binarize(F)
    res = _subgraphs(b.tree.graph, [b.expand(A) for A in distinct], k, c, refined)
    if isinstance(res, _Pack):
        out = PackOrHitResult(Tag.PACK, pack=tuple(first[distinct[i]] for i in res.indices))
    else:
        X = set(b.compress(res.sets[0]))
        for v in sorted(X, reverse=True):
            X.discard(v)
            if not all(not A.isdisjoint(X) for A in distinct):
                X.add(v)
        out = PackOrHitResult(Tag.HIT, hit=(frozenset(X),))
        if refined:
            check(len(X) <= ell_star(k, c), f"hit size {len(X)} exceeds ell_star({k},{c})")
    check_subgraphs_result(F, fam, k, c, out)
    return out
