"""Command-line front end.

Exit codes: 0 for a packing outcome (or success), 1 for a hitting outcome (or
a failed self-test), 2 for any error.  Errors go to stderr as one line.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import acceptance
from .errors import InstanceTooLarge, LimitExceeded, PreconditionError
from .forest_helly import ForestTuple, RootedForest, tuples_pack_or_hit
from .generators import KINDS, generate
from .graph_core import format_edge_list, parse_edge_list, read_graph
from .oracle import OracleLimits, enumerate_cycles, max_d_packing, min_ball_hitting
from .solver import Certificate, solve, verify

EXIT_PACKING, EXIT_HITTING, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    graph: str | None = None
    k: int | None = None
    d: int | None = None
    seed: int = 0
    out: str | None = None
    limits: OracleLimits = field(default_factory=OracleLimits.from_env)
    extra: dict = field(default_factory=dict)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _param(text: str) -> tuple[str, int]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{key} must be an integer, got {value!r}") from None


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- tuple files


def parse_tuple_file(text: str) -> tuple[list[RootedForest], list[ForestTuple]]:
    """Forest blocks ``forest N M`` plus ``M`` edge lines, then lines
    ``tuple: i:v1,v2 ; j:v3`` naming a vertex set per forest index."""
    forests: list[RootedForest] = []
    tuples: list[ForestTuple] = []
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line]
    pos = 0
    while pos < len(lines):
        no, line = lines[pos]
        if line.startswith("forest"):
            toks = line.split()
            if len(toks) != 3:
                raise PreconditionError(f"line {no}: expected 'forest N M'")
            m = int(toks[2])
            body = lines[pos + 1:pos + 1 + m]
            if len(body) != m:
                raise PreconditionError(f"line {no}: forest announces {m} edges")
            G = parse_edge_list("\n".join([f"{toks[1]} {m}"] + [b for _, b in body]))
            forests.append(RootedForest.from_graph(G))
            pos += 1 + m
        elif line.startswith("tuple:"):
            if not forests:
                raise PreconditionError(f"line {no}: tuple before any forest")
            entries: list[set[int] | None] = [None] * len(forests)
            for chunk in line[len("tuple:"):].split(";"):
                idx, sep, verts = chunk.strip().partition(":")
                if not sep:
                    raise PreconditionError(f"line {no}: expected 'i:v1,v2'")
                i = int(idx)
                if not 0 <= i < len(forests):
                    raise PreconditionError(f"line {no}: no forest {i}")
                entries[i] = {int(v) for v in verts.split(",") if v.strip()}
            tuples.append(ForestTuple.of(*entries))
            pos += 1
        else:
            raise PreconditionError(f"line {no}: expected 'forest' or 'tuple:'")
    return forests, tuples


# ---------------------------------------------------------------- commands


def _need_graph(cfg: RunConfig):
    if not cfg.graph:
        raise PreconditionError("--graph is required")
    return read_graph(cfg.graph)


def cmd_solve(cfg: RunConfig) -> int:
    G = _need_graph(cfg)
    cert = solve(G, cfg.k, cfg.d)
    _write(cert.to_json() + "\n", cfg.out)
    if cfg.out:
        print(f"{cert.tag}: wrote {cfg.out}")
    return EXIT_PACKING if cert.is_packing else EXIT_HITTING


def cmd_verify(cfg: RunConfig) -> int:
    G = _need_graph(cfg)
    cert = Certificate.from_json(Path(cfg.extra["cert"]).read_text())
    verdict = verify(G, cert, cfg.k, cfg.d)
    if not verdict:
        print(f"invalid: {verdict.reason}", file=sys.stderr)
        return EXIT_ERROR
    print(f"valid {cert.tag} certificate")
    return EXIT_PACKING if cert.is_packing else EXIT_HITTING


def cmd_oracle(cfg: RunConfig) -> int:
    G = _need_graph(cfg)
    what = cfg.extra["what"]
    if what == "cycles":
        cycles = enumerate_cycles(G, cfg.limits)
        _write("".join(f"{C}\n" for C in cycles), cfg.out)
    elif what == "max-packing":
        _write(f"{max_d_packing(G, cfg.d if cfg.d is not None else 1, cfg.limits)}\n", cfg.out)
    else:
        radius = cfg.extra.get("radius")
        if radius is None:
            raise PreconditionError("min-hitting needs --radius")
        _write(f"{min_ball_hitting(G, radius, cfg.limits)}\n", cfg.out)
    return 0


def cmd_generate(cfg: RunConfig) -> int:
    G = generate(cfg.extra["kind"], dict(cfg.extra["params"]), cfg.seed)
    _write(format_edge_list(G), cfg.out)
    return 0


def cmd_selftest(cfg: RunConfig) -> int:
    results = acceptance.run_all(cfg.extra["count"], cfg.extra["workers"])
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} properties passed")
    return 0 if passed == len(results) else 1


def cmd_bench(cfg: RunConfig) -> int:
    instances = acceptance.build_corpus(cfg.extra["count"], cfg.seed)
    results = acceptance.solve_all(instances, cfg.extra["workers"])
    handle = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["instance", "n", "m", "k", "d", "outcome", "|X|", "runtime_ms"])
        for s in results:
            if s.error:
                outcome, size = "error", ""
            else:
                cert = s.cert
                outcome, size = cert.tag, ("" if cert.is_packing else len(cert.X))
            writer.writerow([s.instance.name, s.n, s.m, s.instance.k, s.instance.d,
                             outcome, size, f"{s.runtime_ms:.3f}"])
    finally:
        if cfg.out:
            handle.close()
    return EXIT_ERROR if any(s.error for s in results) else 0


def cmd_helly(cfg: RunConfig) -> int:
    forests, tuples = parse_tuple_file(Path(cfg.extra["tuples"]).read_text())
    res = tuples_pack_or_hit(forests, tuples, cfg.k)
    if res.is_pack:
        out = {"type": "pack", "indices": sorted(res.pack)}
    else:
        out = {"type": "hit", "X": [sorted(x) for x in res.hit], "size": res.hit_size}
    _write(json.dumps(out, sort_keys=True) + "\n", cfg.out)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "generate": cmd_generate,
    "selftest": cmd_selftest,
    "bench": cmd_bench,
    "helly": cmd_helly,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coarse-ep",
        description="Certified coarse packing-or-hitting dichotomy for cycles.",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("solve", help="find k far-apart cycles or a small ball cover")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--out")

    v = sub.add_parser("verify", help="check a certificate against a graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--cert", required=True)
    v.add_argument("--k", type=_positive, required=True)
    v.add_argument("--d", type=_positive, required=True)

    o = sub.add_parser("oracle", help="exhaustive answers for small graphs")
    o.add_argument("what", choices=["max-packing", "min-hitting", "cycles"])
    o.add_argument("--graph", required=True)
    o.add_argument("--d", type=_nonnegative)
    o.add_argument("--radius", type=_nonnegative)
    o.add_argument("--out")

    g = sub.add_parser("generate", help="write a generated graph as an edge list")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("params", nargs="*", type=_param, help="key=value, e.g. n=10 m=15")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")

    for name, text in (("selftest", "run the acceptance properties"),
                       ("bench", "solve the corpus and write CSV timings")):
        b = sub.add_parser(name, help=text)
        b.add_argument("--count", type=_positive, default=1000)
        b.add_argument("--workers", type=_positive, default=1)
        if name == "bench":
            b.add_argument("--seed", type=int, default=0)
            b.add_argument("--out")

    h = sub.add_parser("helly", help="pack-or-hit on a forest tuple family file")
    h.add_argument("--tuples", required=True)
    h.add_argument("--k", type=_positive, required=True)
    h.add_argument("--out")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {"subcommand", "graph", "k", "d", "seed", "out"}
    extra = {key: val for key, val in vars(ns).items() if key not in known}
    return RunConfig(
        subcommand=ns.subcommand,
        graph=getattr(ns, "graph", None),
        k=getattr(ns, "k", None),
        d=getattr(ns, "d", None),
        seed=getattr(ns, "seed", 0),
        out=getattr(ns, "out", None),
        extra=extra,
    )


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (PreconditionError, LimitExceeded, InstanceTooLarge, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        cfg = config_from_args(ns)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)

