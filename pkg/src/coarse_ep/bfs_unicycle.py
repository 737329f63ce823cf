"""Breadth-first spanning unicycles of ball graphs.

A ``BFSUnicycle`` rooted at a cycle ``C`` spans ``G[B(V(C), r)]``; it keeps
every edge of ``C`` plus one parent edge per remaining vertex, where the
parent is the smallest-id neighbour one step closer to ``V(C)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cycle_tools import validate_cycle
from .errors import PreconditionError, check
from .graph_core import Cycle, Edge, Graph, ball, bfs_distances, induced_subgraph, norm_edge


@dataclass(frozen=True)
class BFSUnicycle:
    host: Graph
    root_cycle: Cycle
    radius: int
    parent: dict[int, int]
    depth: dict[int, int]
    children: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.depth)

    def edges(self) -> list[Edge]:
        es = set(self.root_cycle.edges())
        es.update(norm_edge(v, p) for v, p in self.parent.items())
        return sorted(es)

    def contains(self, v: int) -> bool:
        return v in self.depth

    def dump(self) -> str:
        """Parent/depth table, one vertex per line."""
        rows = ["vertex parent depth"]
        for v in sorted(self.depth):
            rows.append(f"{v} {self.parent.get(v, '-')} {self.depth[v]}")
        return "\n".join(rows)


def build_bfs_unicycle(G: Graph, C: Cycle, r: int) -> BFSUnicycle:
    validate_cycle(G, C)
    if r < 0:
        raise PreconditionError(f"r must be nonnegative, got {r}")
    region = ball(G, C.vertices, r)
    host = induced_subgraph(G, region)
    depth = bfs_distances(host, C.vertices)
    parent: dict[int, int] = {}
    kids: dict[int, list[int]] = {v: [] for v in depth}
    for v in sorted(depth):
        if depth[v] == 0:
            continue
        p = min(w for w in host.adjacency[v] if depth[w] == depth[v] - 1)
        parent[v] = p
        kids[p].append(v)
    U = BFSUnicycle(
        host=host,
        root_cycle=C,
        radius=r,
        parent=parent,
        depth=depth,
        children={v: tuple(ks) for v, ks in kids.items()},
    )
    check(len(U.edges()) == len(region), "BFS unicycle edge count differs from |ball|")
    return U


def non_tree_edges(G: Graph, U: BFSUnicycle) -> list[Edge]:
    """Edges of the ball graph that ``U`` leaves out, sorted."""
    keep = set(U.edges())
    return [e for e in U.host.edges() if e not in keep]


def _require(U: BFSUnicycle, v: int) -> None:
    if v not in U.depth:
        raise PreconditionError(f"vertex {v} is not in the BFS unicycle's ball")


def descendants(U: BFSUnicycle, v: int) -> frozenset[int]:
    """``v`` and everything whose parent chain to the root cycle passes ``v``."""
    _require(U, v)
    out = {v}
    stack = [v]
    while stack:
        for w in U.children[stack.pop()]:
            out.add(w)
            stack.append(w)
    return frozenset(out)


def leg(U: BFSUnicycle, v: int) -> list[int]:
    """Parent chain ``v -> ... -> cycle vertex``; has ``depth(v)`` edges."""
    _require(U, v)
    path = [v]
    while path[-1] in U.parent:
        path.append(U.parent[path[-1]])
    return path
