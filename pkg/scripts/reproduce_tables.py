#!/usr/bin/env python3
"""Run the m = 1..60 sweep for every catalog profile and write one CSV per profile.

Usage: python3 scripts/reproduce_tables.py [--out-dir results/tables] [--m-range 1..60]
"""

import argparse
import sys
import time
from pathlib import Path

from wgm import cli, profiles


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results/tables")
    ap.add_argument("--m-range", default="1..60")
    ap.add_argument("--profiles", default=",".join(profiles.catalog_names()))
    ap.add_argument("--start", default="formula")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in args.profiles.split(","):
        t0 = time.perf_counter()
        code = cli.main(["sweep", "--profile", name, "--m-range", args.m_range, "--start", args.start,
                         "--out", str(out / f"{name}.csv")])
        print(f"{name:20s} exit={code} {time.perf_counter() - t0:6.1f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
