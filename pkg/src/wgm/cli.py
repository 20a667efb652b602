"""Batch command-line front end.

Exit codes: 0 success, 2 non-convergence or numerical failure, 3 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import asympt, modes, newton, oracle
from .detsys import NumericDeterminant
from .errors import DomainError, RegimeUnsupported, UnknownProfile, WgmError
from .profiles import RadialProfile, catalog, catalog_names, constant_values, is_luneburg

EXIT_OK = 0
EXIT_NOCONV = 2
EXIT_CONFIG = 3
M_MAX = 120


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    profile: RadialProfile
    m_values: list[int]
    eps: float = 1e-8
    l_max: int = 2000
    bvp_tol: float = 1e-12
    criterion: str = "relative"
    start: str = "formula"
    homotopy: RadialProfile | None = None
    out: str | None = None
    fmt: str = "csv"
    threads: int = 1
    extra: dict[str, Any] = field(default_factory=dict)

    def newton_config(self) -> newton.NewtonConfig:
        return newton.NewtonConfig(self.eps, self.l_max, self.bvp_tol, self.criterion)


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _cell(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, complex):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def write_table(rows: list[dict[str, Any]], columns: Sequence[str], out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    _emit(buf.getvalue(), out)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _write_runs(runs: list[dict[str, Any]], out: str | None) -> None:
    payload = {"runs": [{k: _json_value(v) for k, v in r.items()} for r in runs]}
    _emit(json.dumps(payload, indent=1, default=_json_value) + "\n", out)


# ---- parsing helpers --------------------------------------------------------


def parse_m_range(text: str) -> list[int]:
    try:
        for sep in ("..", ":"):
            if sep in text:
                a, b = text.split(sep, 1)
                lo, hi = int(a), int(b)
                break
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}") from exc
    values = list(range(lo, hi + 1))
    if not values:
        raise ConfigError(f"empty m-range {text!r}")
    if values[0] < 1 or values[-1] > M_MAX:
        raise ConfigError(f"m-range must lie in [1, {M_MAX}]")
    return values


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def parse_complex(text: str) -> complex:
    t = text.replace(" ", "").replace("im", "j").replace("i", "j")
    try:
        if "," in t:
            re, im = t.split(",", 1)
            return complex(float(re), float(im))
        return complex(t)
    except ValueError as exc:
        raise ConfigError(f"bad complex number {text!r}") from exc


def _load_profile(name: str | None, path: str | None) -> RadialProfile:
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                return RadialProfile.from_json(json.load(fh), name=os.path.basename(path))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot load profile {path!r}: {exc}") from exc
    try:
        return catalog(name or "constant-1.5")
    except UnknownProfile as exc:
        raise ConfigError(f"unknown profile {name!r}; known: {', '.join(catalog_names())}") from exc


def _threads(value: int | None) -> int:
    if value is None:
        value = int(os.environ.get("WGM_THREADS", "1") or 1)
    if value < 1:
        raise ConfigError("threads must be positive")
    return value


def build_config(ns: argparse.Namespace) -> RunConfig:
    profile = _load_profile(ns.profile, ns.profile_json)
    if ns.m_range is not None:
        ms = parse_m_range(ns.m_range)
    elif ns.m is not None:
        if ns.m < 1:
            raise ConfigError("m must be at least 1")
        ms = [ns.m]
    else:
        ms = []
    homotopy = _load_profile(ns.homotopy, None) if ns.homotopy else None
    cfg = RunConfig(
        profile=profile,
        m_values=ms,
        eps=ns.eps,
        l_max=ns.lmax,
        bvp_tol=ns.bvp_tol,
        criterion=ns.criterion,
        start=ns.start,
        homotopy=homotopy,
        out=ns.out,
        fmt=ns.format,
        threads=_threads(ns.threads),
    )
    try:
        cfg.newton_config()
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    if not 1e-14 <= cfg.bvp_tol <= 1e-6:
        raise ConfigError("bvp-tol must lie in [1e-14, 1e-6]")
    if not (cfg.start in ("formula", "asympt") or cfg.start.startswith("value:")):
        raise ConfigError(f"bad --start {cfg.start!r}")
    return cfg


# ---- resonance solves -------------------------------------------------------


def _asympt_or_none(profile: RadialProfile, m: int) -> float | None:
    try:
        return asympt.quasi_resonance(profile, m)
    except WgmError:
        return None


def _start_value(cfg: RunConfig, profile: RadialProfile, m: int) -> complex:
    if cfg.start == "formula":
        return newton.starting_value(profile, m)
    if cfg.start == "asympt":
        # no expansion for this profile: use the formula start instead
        k = _asympt_or_none(profile, m)
        return newton.starting_value(profile, m) if k is None else k
    return parse_complex(cfg.start.split(":", 1)[1])


def solve_one(cfg: RunConfig, m: int) -> dict[str, Any]:
    """One resonance solve, returned as a table row; failures set ``status``."""
    ncfg = cfg.newton_config()
    row: dict[str, Any] = {"m": m}
    try:
        k0 = _start_value(cfg, cfg.profile, m)
        if cfg.homotopy is not None:
            seed = newton.solve(
                NumericDeterminant(cfg.homotopy, m, cfg.bvp_tol), _start_value(cfg, cfg.homotopy, m), ncfg
            )
            if not seed.converged:
                raise WgmError(f"homotopy solve did not converge (m={m})")
            k0 = seed.k
        row["k0"] = complex(k0)
        res = newton.solve(NumericDeterminant(cfg.profile, m, cfg.bvp_tol), k0, ncfg)
    except WgmError as exc:
        row.update(status=f"error: {exc}", converged=False)
        return row
    last = res.iterations[-1]
    row.update(
        l=res.l,
        k=res.k,
        abs_det=last.abs_det,
        abs_ddet=last.abs_ddet,
        rel_residual=last.rel_residual,
        converged=res.converged,
        status="ok" if res.converged else "no-convergence",
        iterations=res.iterations,
    )
    ka = _asympt_or_none(cfg.profile, m)
    if ka is not None:
        row["k_asympt"] = ka
        row["diff"] = abs(res.k - ka)
    return row


TABLE_COLUMNS = (
    "m", "re_k0", "im_k0", "l", "re_k", "im_k", "k_asympt",
    "abs_det", "abs_ddet", "rel_residual", "diff", "status",
)


def _flatten(row: dict[str, Any]) -> dict[str, Any]:
    out = dict(row)
    for key in ("k0", "k"):
        if key in row:
            out[f"re_{key}"] = float(row[key].real)
            out[f"im_{key}"] = float(row[key].imag)
    return out


def _run_json(row: dict[str, Any]) -> dict[str, Any]:
    d = {k: v for k, v in row.items() if k != "iterations"}
    d["iterations"] = [
        {"k": _json_value(complex(it.k)), "abs_det": it.abs_det, "abs_ddet": it.abs_ddet,
         "rel_residual": it.rel_residual}
        for it in row.get("iterations", [])
    ]
    return d


def _write_rows(cfg: RunConfig, rows: list[dict[str, Any]]) -> None:
    if cfg.fmt == "json":
        _write_runs([_run_json(r) for r in rows], cfg.out)
    else:
        write_table([_flatten(r) for r in rows], TABLE_COLUMNS, cfg.out)


def cmd_solve(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if len(cfg.m_values) != 1:
        raise ConfigError("solve needs a single --m")
    row = solve_one(cfg, cfg.m_values[0])
    _write_rows(cfg, [row])
    if not row["converged"]:
        print(f"m={row['m']}: {row['status']}", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if not cfg.m_values:
        raise ConfigError("sweep needs --m-range")
    rows = modes.pmap(lambda m: solve_one(cfg, m), cfg.m_values, cfg.threads)
    _write_rows(cfg, rows)
    ok = sum(1 for r in rows if r["converged"])
    print(f"{ok}/{len(rows)} converged", file=sys.stderr)
    return EXIT_OK if ok >= 0.9 * len(rows) else EXIT_NOCONV


# ---- oracle validation ------------------------------------------------------


def _oracle_for(profile: RadialProfile, m: int):
    pc = constant_values(profile)
    if pc is not None:
        return oracle.PiecewiseConstantOracle(m, profile.xi, *pc)
    if is_luneburg(profile):
        return oracle.LuneburgOracle(m, profile.xi)
    raise ConfigError("validate supports piecewise-constant and luneburg profiles only")


VALIDATE_COLUMNS = (
    "k0", "l_numeric", "re_k_numeric", "im_k_numeric", "abs_D_numeric", "abs_dD_numeric",
    "l_oracle", "re_k_oracle", "im_k_oracle", "abs_D_oracle", "abs_dD_oracle", "difference", "status",
)


def validate_rows(
    profile: RadialProfile, m: int, k0s: Sequence[float], eps: float, l_max: int, bvp_tol: float, threads: int = 1
) -> list[dict[str, Any]]:
    """Newton on D = det/k with |D| <= eps, numeric pipeline vs closed form."""
    ref = _oracle_for(profile, m)
    ncfg = newton.NewtonConfig(eps, l_max, bvp_tol, "absolute")
    num = newton.DividedByK(NumericDeterminant(profile, m, bvp_tol))
    ora = newton.DividedByK(ref)

    def run(k0):
        row: dict[str, Any] = {"k0": float(k0)}
        try:
            a = newton.solve(num, k0, ncfg)
            b = newton.solve(ora, k0, ncfg)
        except WgmError as exc:
            row.update(status=f"error: {exc}", converged=False)
            return row
        for tag, res in (("numeric", a), ("oracle", b)):
            row[f"l_{tag}"] = res.l
            row[f"re_k_{tag}"] = float(res.k.real)
            row[f"im_k_{tag}"] = float(res.k.imag)
            row[f"abs_D_{tag}"] = res.iterations[-1].abs_det
            row[f"abs_dD_{tag}"] = res.iterations[-1].abs_ddet
        row["converged"] = a.converged and b.converged
        row["difference"] = abs(a.k - b.k) if row["converged"] else None
        row["status"] = "ok" if row["converged"] else "no-convergence"
        return row

    return modes.pmap(run, list(k0s), threads)


def cmd_validate(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if len(cfg.m_values) != 1:
        raise ConfigError("validate needs a single --m")
    m = cfg.m_values[0]
    _oracle_for(cfg.profile, m)
    k0s = parse_m_range(ns.k0) if ns.k0 else list(range(1, 21))
    eps = ns.eps if ns.eps_given else 1e-6
    try:
        newton.NewtonConfig(eps, cfg.l_max)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    rows = validate_rows(cfg.profile, m, [float(k) for k in k0s], eps, cfg.l_max, cfg.bvp_tol, cfg.threads)
    if cfg.fmt == "json":
        _write_runs(rows, cfg.out)
    else:
        write_table(rows, VALIDATE_COLUMNS, cfg.out)
    ok = sum(1 for r in rows if r["converged"])
    print(f"{ok}/{len(rows)} starts converged", file=sys.stderr)
    return EXIT_OK if ok >= 0.9 * len(rows) else EXIT_NOCONV


# ---- asymptotics and exports --------------------------------------------------


def cmd_asympt(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if not cfg.m_values:
        raise ConfigError("asympt needs --m or --m-range")
    inv = asympt.invariants(cfg.profile)
    rows = []
    for m in cfg.m_values:
        try:
            ka = asympt.quasi_resonance(cfg.profile, m, ns.j)
        except RegimeUnsupported as exc:
            raise ConfigError(str(exc)) from exc
        rows.append({"m": m, "j": ns.j, "regime": inv.regime, "kappa_check": inv.kappa_check,
                     "mu_check": inv.mu_check, "k_asympt": ka})
    if cfg.fmt == "json":
        _write_runs(rows, cfg.out)
    else:
        write_table(rows, ("m", "j", "regime", "kappa_check", "mu_check", "k_asympt"), cfg.out)
    return EXIT_OK


def cmd_mode(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if len(cfg.m_values) != 1:
        raise ConfigError("mode needs a single --m")
    m = cfg.m_values[0]
    if ns.k is not None:
        k = parse_complex(ns.k)
    else:
        row = solve_one(cfg, m)
        if not row["converged"]:
            print(f"m={m}: {row['status']}", file=sys.stderr)
            return EXIT_NOCONV
        k = row["k"]
    if ns.kind == "scattering":
        _, mode = modes.scattering_solve(cfg.profile, m, k.real, parse_complex(ns.g), cfg.bvp_tol)
    else:
        mode = modes.exact_mode(cfg.profile, m, k, ns.normalization, cfg.bvp_tol)
    if not mode.continuity_ok():
        print("warning: interface continuity check failed", file=sys.stderr)
    rows = [{"r": r, "region": g, "re_u": u.real, "im_u": u.imag}
            for r, g, u in zip(mode.r.tolist(), mode.region.tolist(), mode.u.tolist())]
    write_table(rows, ("r", "region", "re_u", "im_u"), cfg.out)
    if ns.polar_out:
        r, theta, val = modes.polar_field(mode, m)
        prow = [{"r": r[i], "theta": theta[j], "value": val[i, j]}
                for i in range(r.size) for j in range(theta.size)]
        write_table(prow, ("r", "theta", "value"), ns.polar_out)
    return EXIT_OK


def cmd_opnorm(cfg: RunConfig, ns: argparse.Namespace) -> int:
    m_list = parse_int_list(ns.m_list) if ns.m_list else cfg.m_values
    if not m_list or min(m_list) < 1:
        raise ConfigError("opnorm needs --m-list (or --m/--m-range) with m >= 1")
    try:
        res = modes.opnorm_sweep(cfg.profile, m_list, ns.k_min, ns.k_max, ns.steps, cfg.bvp_tol, cfg.threads)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [{"m": m, "k": k, "invnorm": v} for m in m_list for k, v in res[m]]
    write_table(rows, ("m", "k", "invnorm"), cfg.out)
    return EXIT_OK


def cmd_signmap(cfg: RunConfig, ns: argparse.Namespace) -> int:
    m = cfg.m_values[0] if cfg.m_values else 10
    pc = constant_values(cfg.profile)
    if pc is None:
        raise ConfigError("signmap needs a piecewise-constant profile")
    n1, n2 = pc
    if ns.n1 is not None:
        n1 = ns.n1
    if ns.n2 is not None:
        n2 = ns.n2
    xi = ns.xi if ns.xi is not None else cfg.profile.xi
    if ns.nre < 1 or ns.nim < 1:
        raise ConfigError("grid resolution must be positive")
    re, im, sign = modes.scaling_sign_map(
        m, xi, n1, n2, (ns.re_min, ns.re_max), (ns.im_min, ns.im_max), (ns.nre, ns.nim), ns.variant, cfg.threads
    )
    rows = [{"re_k": re[i], "im_k": im[j], "sign": int(sign[j, i])}
            for j in range(im.size) for i in range(re.size)]
    write_table(rows, ("re_k", "im_k", "sign"), cfg.out)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "asympt": cmd_asympt,
    "mode": cmd_mode,
    "opnorm": cmd_opnorm,
    "signmap": cmd_signmap,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--profile", default=None, help="catalog name (default constant-1.5)")
    common.add_argument("--profile-json", default=None, help="JSON profile file")
    common.add_argument("--m", type=int, default=None)
    common.add_argument("--m-range", default=None, help="a..b inclusive")
    common.add_argument("--eps", type=float, default=None, help="Newton threshold (default 1e-8)")
    common.add_argument("--lmax", type=int, default=2000)
    common.add_argument("--bvp-tol", type=float, default=1e-12)
    common.add_argument("--criterion", choices=("relative", "absolute"), default="relative")
    common.add_argument("--start", default="formula", help="formula | asympt | value:<k0>")
    common.add_argument("--homotopy", default=None, help="intermediate catalog profile seeding the solve")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=None, help="worker threads (env WGM_THREADS)")

    p = _Parser(prog="wgm", description="Whispering-gallery resonances of radial Helmholtz problems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("solve", "sweep", "asympt"):
        sp = sub.add_parser(name, parents=[common])
        if name == "asympt":
            sp.add_argument("--j", type=int, default=0, help="Airy zero index")
    sp = sub.add_parser("validate", parents=[common])
    sp.add_argument("--k0", default=None, help="range of integer starts a..b (default 1..20)")
    sp = sub.add_parser("mode", parents=[common])
    sp.add_argument("--k", default=None, help="resonance (solved when omitted)")
    sp.add_argument("--kind", choices=("exact", "scattering"), default="exact")
    sp.add_argument("--normalization", choices=("value", "derivative"), default="value")
    sp.add_argument("--g", default="1", help="boundary datum for --kind scattering")
    sp.add_argument("--polar-out", default=None, help="also write the polar field CSV here")
    sp = sub.add_parser("opnorm", parents=[common])
    sp.add_argument("--m-list", default=None, help="comma-separated m values")
    sp.add_argument("--k-min", type=float, default=10.0)
    sp.add_argument("--k-max", type=float, default=110.0)
    sp.add_argument("--steps", type=int, default=2001)
    sp = sub.add_parser("signmap", parents=[common])
    sp.add_argument("--variant", choices=("det1", "det2", "detscal"), default="det1")
    sp.add_argument("--n1", type=float, default=None)
    sp.add_argument("--n2", type=float, default=None)
    sp.add_argument("--xi", type=float, default=None)
    sp.add_argument("--re-min", type=float, default=0.0)
    sp.add_argument("--re-max", type=float, default=100.0)
    sp.add_argument("--im-min", type=float, default=0.0)
    sp.add_argument("--im-max", type=float, default=40.0)
    sp.add_argument("--nre", type=int, default=101)
    sp.add_argument("--nim", type=int, default=41)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ns.eps_given = ns.eps is not None
    if ns.eps is None:
        ns.eps = 1e-8
    try:
        cfg = build_config(ns)
        return COMMANDS[ns.command](cfg, ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WgmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV


if __name__ == "__main__":
    raise SystemExit(main())
