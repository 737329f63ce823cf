"""Simple undirected graphs on dense integer ids and their metric primitives.

Everything here iterates in ascending vertex order so that every "pick any"
choice made further up the stack is reproducible.  Distances are plain ints;
an unreachable pair has distance ``math.inf``.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import PreconditionError

INFINITY = math.inf

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adjacency[v]`` is the strictly increasing tuple of neighbours of ``v``.
    Build instances with :func:`build_graph`; the constructor trusts its input.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    _edge_set: frozenset[Edge] = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self._edge_set:
            es = frozenset(
                (u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v
            )
            object.__setattr__(self, "_edge_set", es)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self._edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self._edge_set

    def edges(self) -> list[Edge]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return sorted(self._edge_set)

    @property
    def m(self) -> int:
        return len(self._edge_set)

    def non_isolated(self) -> list[int]:
        return [v for v in range(self.n) if self.adjacency[v]]


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on ``n`` vertices; duplicate edges collapse to one."""
    if n < 0:
        raise PreconditionError(f"vertex count must be nonnegative, got {n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionError(f"edge {{{u},{v}}} has an endpoint outside [0, {n})")
        if u == v:
            raise PreconditionError(f"edge {{{u},{v}}} is a self-loop")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def subgraph_from_edges(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Graph on the same id space containing only ``edges``."""
    return build_graph(n, edges)


def induced_subgraph(G: Graph, vertices: Iterable[int]) -> Graph:
    """``G[vertices]`` with ids preserved; other vertices become isolated."""
    keep = set(vertices)
    adj = tuple(
        tuple(w for w in G.adjacency[v] if w in keep) if v in keep else ()
        for v in range(G.n)
    )
    return Graph(G.n, adj)


def remove_vertices(G: Graph, S: Iterable[int]) -> Graph:
    """``G - S`` with ids preserved; removed vertices become isolated."""
    drop = set(S)
    return induced_subgraph(G, (v for v in range(G.n) if v not in drop))


def _check_members(G: Graph, X: Iterable[int], what: str) -> list[int]:
    out = sorted(set(X))
    for v in out:
        if not 0 <= v < G.n:
            raise PreconditionError(f"{what} contains vertex {v} outside [0, {G.n})")
    return out


def bfs_distances(
    G: Graph,
    sources: Iterable[int],
    cutoff: int | None = None,
    allowed: set[int] | frozenset[int] | None = None,
) -> dict[int, int]:
    """Multi-source BFS; returns ``{v: dist}`` for every reached vertex.

    ``cutoff`` stops expansion beyond that depth; ``allowed`` restricts the
    search to an induced subgraph.  Sources are seeded in ascending order and
    neighbours are expanded in ascending order.
    """
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sorted(set(sources)):
        if allowed is not None and s not in allowed:
            continue
        dist[s] = 0
        queue.append(s)
    adj = G.adjacency
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if cutoff is not None and dv >= cutoff:
            continue
        for w in adj[v]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dv + 1
                queue.append(w)
    return dist


def distance(G: Graph, X: Iterable[int], Y: Iterable[int]) -> int | float:
    """``min`` over ``X x Y`` of the graph distance, ``INFINITY`` if disconnected."""
    xs = _check_members(G, X, "X")
    ys = set(_check_members(G, Y, "Y"))
    if not xs or not ys:
        raise PreconditionError("distance needs nonempty vertex sets")
    if ys.intersection(xs):
        return 0
    dist: dict[int, int] = {v: 0 for v in xs}
    queue = deque(xs)
    while queue:
        v = queue.popleft()
        for w in G.adjacency[v]:
            if w not in dist:
                if w in ys:
                    return dist[v] + 1
                dist[w] = dist[v] + 1
                queue.append(w)
    return INFINITY


def ball(G: Graph, X: Iterable[int], r: int) -> frozenset[int]:
    """All vertices within distance ``r`` of some vertex of ``X``."""
    if r < 0:
        raise PreconditionError(f"radius must be nonnegative, got {r}")
    xs = _check_members(G, X, "X")
    return frozenset(bfs_distances(G, xs, cutoff=r))


def components(G: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of ``G`` (or of ``G[vertices]``), each sorted,
    listed by smallest member."""
    allowed = set(range(G.n)) if vertices is None else set(vertices)
    seen: set[int] = set()
    out: list[list[int]] = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = bfs_distances(G, [s], allowed=allowed)
        seen.update(comp)
        out.append(sorted(comp))
    return out


def cycle_rank(G: Graph, vertices: Iterable[int] | None = None) -> int:
    """Cyclomatic number ``|E| - |V| + #components`` of ``G`` or ``G[vertices]``.

    Isolated vertices contribute nothing, so the id-preserving subgraph
    helpers above do not distort the value.
    """
    if vertices is None:
        verts = set(range(G.n))
    else:
        verts = set(vertices)
    m = sum(1 for v in verts for w in G.adjacency[v] if w > v and w in verts)
    return m - len(verts) + len(components(G, verts))


def is_forest(G: Graph, vertices: Iterable[int] | None = None) -> bool:
    return cycle_rank(G, vertices) == 0


@dataclass(frozen=True, order=True)
class Cycle:
    """A cycle as a vertex sequence in canonical form.

    Canonical form starts at the smallest id and continues towards the
    smaller of its two cycle-neighbours, so equal cycles compare equal.
    """

    vertices: tuple[int, ...]

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> Cycle:
        vs = list(seq)
        if len(vs) < 3:
            raise PreconditionError(f"a cycle needs at least 3 vertices, got {vs}")
        if len(set(vs)) != len(vs):
            raise PreconditionError(f"cycle vertices must be distinct, got {vs}")
        i = vs.index(min(vs))
        vs = vs[i:] + vs[:i]
        if vs[-1] < vs[1]:
            vs = [vs[0]] + vs[:0:-1]
        return cls(tuple(vs))

    @classmethod
    def parse(cls, text: str) -> Cycle:
        return cls.from_sequence([int(tok) for tok in text.split(",")])

    def __str__(self) -> str:
        return ",".join(map(str, self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edges(self) -> list[Edge]:
        vs = self.vertices
        return sorted(norm_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def is_valid_in(self, G: Graph) -> bool:
        vs = self.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            return False
        if any(not 0 <= v < G.n for v in vs):
            return False
        return all(G.has_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))


def find_cycle_avoiding(G: Graph, S: Iterable[int] = ()) -> Cycle | None:
    """A cycle of ``G - S``, or ``None`` when ``G - S`` is a forest.

    Iterative DFS from the smallest unvisited vertex, neighbours ascending;
    the first back edge closes the returned cycle.
    """
    banned = set(_check_members(G, S, "S"))
    parent: dict[int, int] = {}
    on_stack: set[int] = set()
    adj = G.adjacency
    for root in range(G.n):
        if root in banned or root in parent:
            continue
        parent[root] = -1
        on_stack.add(root)
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w in banned or w == parent[v]:
                    continue
                if w in on_stack:
                    path = [v]
                    while path[-1] != w:
                        path.append(parent[path[-1]])
                    return Cycle.from_sequence(path)
                if w not in parent:
                    parent[w] = v
                    on_stack.add(w)
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_stack.discard(v)
    return None


def find_cycle_in_edges(n: int, edges: Iterable[Sequence[int]]) -> Cycle | None:
    """Any cycle (canonical, deterministic) of the graph spanned by ``edges``."""
    return find_cycle_avoiding(build_graph(n, edges))


# --- edge-list text format -------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``.

    Blank lines and ``#`` comments are ignored.  Errors carry 1-based line
    numbers.
    """
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise PreconditionError("empty graph file: expected header 'n m'")

    def ints(lineno: int, toks: list[str]) -> tuple[int, int]:
        if len(toks) != 2:
            raise PreconditionError(f"line {lineno}: expected two integers, got {' '.join(toks)!r}")
        try:
            a, b = int(toks[0]), int(toks[1])
        except ValueError:
            raise PreconditionError(
                f"line {lineno}: expected two integers, got {' '.join(toks)!r}"
            ) from None
        return a, b

    hl, htoks = rows[0]
    n, m = ints(hl, htoks)
    if n < 0 or m < 0:
        raise PreconditionError(f"line {hl}: negative header value")
    body = rows[1:]
    if len(body) != m:
        raise PreconditionError(f"header announces {m} edges but file has {len(body)}")
    edges = []
    for lineno, toks in body:
        u, v = ints(lineno, toks)
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionError(f"line {lineno}: endpoint outside [0, {n})")
        if u == v:
            raise PreconditionError(f"line {lineno}: self-loop at {u}")
        edges.append((u, v))
    return build_graph(n, edges)


def format_edge_list(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_graph(G: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(G))
