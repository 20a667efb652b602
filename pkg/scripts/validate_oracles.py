#!/usr/bin/env python3
"""Numeric pipeline against the closed-form determinants for k0 = 1..20.

Writes the piecewise-constant (n1 = 1.5) and Luneburg comparisons for m = 10
and prints the largest root difference of each.
"""

import csv
import sys
from pathlib import Path

from wgm import cli


def main(out_dir: str = "results/validation") -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in ("constant-1.5", "luneburg"):
        path = out / f"{name}-m10.csv"
        code = cli.main(["validate", "--profile", name, "--m", "10", "--out", str(path)])
        with path.open() as fh:
            rows = list(csv.DictReader(fh))
        diffs = [float(r["difference"]) for r in rows if r["difference"]]
        print(f"{name:14s} {len(diffs)}/{len(rows)} converged, max |dk| = {max(diffs):.2e}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
