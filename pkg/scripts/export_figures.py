#!/usr/bin/env python3
"""CSV data behind the mode, operator-norm and sign-map figures (no plotting)."""

import sys
from pathlib import Path

from wgm import cli

LUNEBURG_M = (10, 20, 40, 60)


def main(out_dir: str = "results/figures") -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = []
    for m in LUNEBURG_M:
        for kind in ("scattering", "exact"):
            base = out / f"luneburg-m{m}-{kind}"
            jobs.append(["mode", "--profile", "luneburg", "--m", str(m), "--kind", kind,
                         "--out", f"{base}.csv", "--polar-out", f"{base}-polar.csv"])
    jobs.append(["opnorm", "--profile", "luneburg", "--m-list", ",".join(map(str, LUNEBURG_M)),
                 "--out", str(out / "opnorm.csv")])
    for variant in ("det1", "det2", "detscal"):
        jobs.append(["signmap", "--m", "10", "--variant", variant, "--out", str(out / f"signmap-{variant}.csv")])
    worst = 0
    for argv in jobs:
        code = cli.main(argv)
        print(f"exit={code} {' '.join(argv[:2])} -> {argv[argv.index('--out') + 1]}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
