"""Run every acceptance property and print one PASS/FAIL line each.

Usage: python scripts/run_acceptance.py [--count N] [--workers W] [--json PATH]
"""

import argparse
import sys
from pathlib import Path

from coarse_ep.acceptance import run_all, summary_json


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=1000, help="corpus size")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", help="also write a JSON summary here")
    args = p.parse_args()

    results = run_all(args.count, args.workers)
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} properties passed")
    if args.json:
        Path(args.json).write_text(summary_json(results))
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
