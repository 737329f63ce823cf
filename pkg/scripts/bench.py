"""Solve a generated corpus and write per-instance timings as CSV.

Usage: python scripts/bench.py [--count N] [--workers W] [--seed S] [--out PATH]
"""

import sys

from coarse_ep.cli import main

if __name__ == "__main__":
    sys.exit(main(["bench", *sys.argv[1:]]))
