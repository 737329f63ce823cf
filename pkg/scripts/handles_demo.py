"""Solve the cycle-with-handles family, which reaches the forest-packing branch.

Usage: python scripts/handles_demo.py [H ...]
"""

import sys
import time

from coarse_ep.graph_core import build_graph
from coarse_ep.solver import solve


def handles(h: int, length: int = 20, gap: int = 4):
    N = h * gap
    edges = [(i, (i + 1) % N) for i in range(N)]
    nxt = N
    for t in range(h):
        chain = [gap * t] + list(range(nxt, nxt + length - 1)) + [gap * t + 1]
        nxt += length - 1
        edges += list(zip(chain, chain[1:]))
    return build_graph(nxt, edges)


if __name__ == "__main__":
    for h in [int(a) for a in sys.argv[1:]] or [20, 22, 24, 30]:
        G = handles(h)
        start = time.perf_counter()
        cert = solve(G, 2, 1)
        ms = 1000 * (time.perf_counter() - start)
        size = len(cert.cycles) if cert.is_packing else len(cert.X)
        print(f"h={h} n={G.n} {cert.tag} size={size} {ms:.1f}ms")
