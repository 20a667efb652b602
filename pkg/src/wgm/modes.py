"""Quasi-resonance fields, exact modes, operator-norm sweeps and sign maps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence, TypeVar

import numpy as np

from . import bvp, chebfun
from .chebfun import ChebSeries
from .detsys import assemble, determinant, dtn_multiplier, scaling_data
from .errors import DomainError, NearSingular, NormalizationDegenerate, WgmError
from .oracle import det_pw_constant
from .profiles import RadialProfile, interface_trace, piecewise_constant

Region = Literal["inner", "outer"]
Normalization = Literal["value", "derivative"]
Variant = Literal["det1", "det2", "detscal"]

SAMPLES = 400
_NEAR_SINGULAR = 1e-12
_DEGENERATE = 1e-12

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Ordered map, optionally on a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class CoefficientPair:
    A11: complex
    A22: complex

    def __post_init__(self) -> None:
        if not (np.isfinite(self.A11) and np.isfinite(self.A22)):
            raise DomainError("coefficients must be finite")


@dataclass(frozen=True, eq=False)
class ModeProfile:
    """Radial field sampled on (0, xi] and [xi, 1]; both pieces contain xi."""

    k: complex
    r: np.ndarray
    u: np.ndarray
    region: np.ndarray
    inner: ChebSeries
    outer: ChebSeries

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.r.tolist(), self.u.tolist()))

    @property
    def xi(self) -> float:
        return self.inner.b

    def __call__(self, r):
        """Field at radii r; the inner piece is used at r = xi."""
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape, dtype=complex)
        ins = r <= self.xi
        out[ins] = chebfun.evaluate(self.inner, r[ins])
        out[~ins] = chebfun.evaluate(self.outer, r[~ins])
        return out

    def jumps(self) -> tuple[complex, complex]:
        """u(xi+) - u(xi-) and u'(xi+) - u'(xi-)."""
        xi = self.xi
        du = chebfun.differentiate(self.outer)(xi) - chebfun.differentiate(self.inner)(xi)
        return self.outer(xi) - self.inner(xi), du

    def continuity_ok(self, rel: float = 1e-8) -> bool:
        return abs(self.jumps()[0]) <= rel * float(np.abs(self.u).max())


def _combine(a: complex, s: ChebSeries, b: complex = 0.0, t: ChebSeries | None = None) -> ChebSeries:
    c = a * s.coeffs
    if t is not None:
        n = max(c.size, t.coeffs.size)
        c = np.pad(c, (0, n - c.size)) + b * np.pad(t.coeffs, (0, n - t.coeffs.size))
    return ChebSeries(s.a, s.b, c)


def _grid(xi: float, total: int = SAMPLES) -> tuple[np.ndarray, np.ndarray]:
    n_in = min(max(int(round(total * xi)), 2), total - 2)
    return np.linspace(0.0, xi, n_in), np.linspace(xi, 1.0, total - n_in)


def _sampled(k: complex, inner: ChebSeries, outer: ChebSeries) -> ModeProfile:
    r_in, r_out = _grid(inner.b)
    r = np.concatenate([r_in, r_out])
    u = np.concatenate([chebfun.evaluate(inner, r_in), chebfun.evaluate(outer, r_out)])
    region = np.array(["inner"] * r_in.size + ["outer"] * r_out.size)
    return ModeProfile(complex(k), r, u, region, inner, outer)


def scattering_solve(
    profile: RadialProfile, m: int, k_real: float, g: complex = 1.0, tol: float = 1e-12
) -> tuple[CoefficientPair, ModeProfile]:
    """Field of the real-k scattering problem with boundary datum g at r = 1."""
    k = float(k_real)
    if k == 0 or not math.isfinite(k):
        raise DomainError("k_real must be real, finite and nonzero")
    fs = assemble(profile, m, k, tol, derivative=False)
    ev = determinant(fs)
    if ev.rel_residual < _NEAR_SINGULAR:
        raise NearSingular(f"T({k}) numerically singular (rel residual {ev.rel_residual:.3e})")
    n2 = fs.n2xi
    p21 = bvp.OdeProblem(
        (profile.xi, 1.0),
        m,
        k,
        profile.outer,
        bvp.LinearBC(-1j * k * n2, -1.0, 0.0),
        bvp.LinearBC(-fs.dtn.beta, 1.0, complex(g)),
    )
    f21 = bvp.solve(p21, tol)
    b = f21(profile.xi)
    rhs = np.array([b, -1j * k * n2 * b])
    a11, a22 = np.linalg.solve(ev.matrix, rhs)
    coef = CoefficientPair(complex(a11), complex(a22))
    inner = _combine(coef.A11, fs.f11)
    outer = _combine(1.0, f21, coef.A22, fs.f22)
    return coef, _sampled(k, inner, outer)


def exact_mode(
    profile: RadialProfile,
    m: int,
    k_res: complex,
    normalization: Normalization = "value",
    tol: float = 1e-12,
) -> ModeProfile:
    """Resonant mode scaled by its interface trace (value or derivative)."""
    fs = assemble(profile, m, k_res, tol, derivative=False)
    if normalization == "value":
        c1, c2 = fs.f11xi, fs.f22xi
    elif normalization == "derivative":
        c1, c2 = fs.f11pxi, fs.f22pxi
    else:
        raise DomainError(f"unknown normalization {normalization!r}")
    scale = max(
        float(np.abs(fs.f11.coeffs).sum()),
        float(np.abs(fs.f22.coeffs).sum()),
        abs(fs.f11pxi),
        abs(fs.f22pxi),
    )
    if min(abs(c1), abs(c2)) < _DEGENERATE * scale:
        raise NormalizationDegenerate(f"{normalization} trace vanishes at k={k_res}")
    return _sampled(k_res, _combine(1.0 / c1, fs.f11), _combine(1.0 / c2, fs.f22))


def inverse_norm(t: np.ndarray) -> float:
    """||T^{-1}||_2 = 1/sigma_min(T); inf for singular T."""
    s = np.linalg.svd(np.asarray(t, dtype=complex), compute_uv=False)
    return math.inf if s[-1] == 0 else float(1.0 / s[-1])


def opnorm_sweep(
    profile: RadialProfile,
    m_list: Sequence[int],
    k_min: float,
    k_max: float,
    steps: int,
    tol: float = 1e-12,
    threads: int = 1,
) -> dict[int, list[tuple[float, float]]]:
    """||T(k)^{-1}||_2 on a real k grid with unit Robin data. Failed points give nan."""
    if not 0 < k_min < k_max:
        raise DomainError("need 0 < k_min < k_max")
    if steps < 2:
        raise DomainError("steps must be at least 2")
    ks = np.linspace(k_min, k_max, steps)

    def point(args):
        m, k = args
        try:
            fs = assemble(profile, m, float(k), tol, scaling="unit", derivative=False)
        except WgmError:
            return math.nan
        return inverse_norm(determinant(fs).matrix)

    out = {}
    for m in m_list:
        vals = pmap(point, [(m, k) for k in ks], threads)
        out[int(m)] = list(zip(ks.tolist(), vals))
    return out


def _dlog_det1(m: int, k: complex, xi: float, n1: float, n2: float) -> complex:
    d = det_pw_constant(m, k, xi, n1, n2)
    if not abs(d.value) > 1e-300 or not np.isfinite(d.value):
        raise DomainError("det underflow")
    return 1.0 / k + d.derivative / d.value


def log_derivative(
    m: int, k: complex, xi: float, n1: float, n2: float, variant: Variant = "det1"
) -> complex:
    """d/dk log det for the data scaling (det1), unit data (det2) or k^2 det2."""
    k = complex(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    q = _dlog_det1(m, k, xi, n1, n2)
    if variant == "det1":
        return q
    sd = scaling_data(piecewise_constant(n1, n2, xi), m, k)
    q = q - sd.dh11 / sd.h11 - sd.dh22 / sd.h22
    if variant == "det2":
        return q
    if variant == "detscal":
        return q + 2.0 / k
    raise DomainError(f"unknown variant {variant!r}")


def scaling_sign_map(
    m: int,
    xi: float,
    n1: float,
    n2: float,
    re_range: tuple[float, float],
    im_range: tuple[float, float],
    shape: tuple[int, int],
    variant: Variant = "det1",
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """sign(Im(det'/det)) on a rectangle; returns (re_k, im_k, sign) with sign[i_im, i_re].

    Cells where the determinant or the scaling data degenerate are coded 0.
    """
    if variant not in ("det1", "det2", "detscal"):
        raise DomainError(f"unknown variant {variant!r}")
    nre, nim = shape
    re = np.linspace(*re_range, nre)
    im = np.linspace(*im_range, nim)

    def cell(k):
        try:
            v = log_derivative(m, k, xi, n1, n2, variant).imag
        except (WgmError, ZeroDivisionError, OverflowError):
            return 0
        if not math.isfinite(v):
            return 0
        return int(np.sign(v))

    ks = [complex(x, y) for y in im for x in re]
    sign = np.array(pmap(cell, ks, threads), dtype=int).reshape(nim, nre)
    return re, im, sign


def polar_field(
    mode: ModeProfile, m: int, nr: int = 200, ntheta: int = 256
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(r, theta, Re[u(r) e^{i m theta}]) on an nr x ntheta polar grid."""
    r = np.linspace(0.0, 1.0, nr)
    theta = np.linspace(0.0, 2 * np.pi, ntheta, endpoint=False)
    u = mode(r)
    return r, theta, np.real(u[:, None] * np.exp(1j * m * theta)[None, :])


def concentration_ratio(
    mode: ModeProfile,
    near: tuple[float, float] | None = None,
    far: tuple[float, float] | None = None,
) -> float:
    """Energy of |u|^2 r on ``near`` over that on ``far`` (trapezoid on 2001 points).

    Defaults: near = [0.6 xi, xi], far = [0, 0.4 xi].
    """
    xi = mode.xi
    near = near or (0.6 * xi, xi)
    far = far or (0.0, 0.4 * xi)

    def energy(a, b):
        r = np.linspace(a, b, 2001)
        w = np.abs(mode(r)) ** 2 * r
        return float(np.sum((w[1:] + w[:-1]) * np.diff(r)) / 2)

    return energy(*near) / energy(*far)


def check_scattering(profile: RadialProfile, m: int, k: float, g: complex, mode: ModeProfile) -> dict[str, float]:
    """Relative residuals of the four constraints defining the scattering field."""
    xi = profile.xi
    tr = interface_trace(profile)
    du_in = chebfun.differentiate(mode.inner)
    du_out = chebfun.differentiate(mode.outer)
    beta = dtn_multiplier(m, k, tr.n2one).beta
    scale = float(np.abs(mode.u).max())
    dscale = max(abs(du_in(xi)), abs(du_out(xi)), 1e-300)
    u1, du1 = mode.outer(1.0), du_out(1.0)
    regular = mode.inner(0.0) if m % 2 else du_in(0.0)
    return {
        "value_jump": abs(mode.outer(xi) - mode.inner(xi)) / scale,
        "derivative_jump": abs(du_out(xi) - du_in(xi)) / dscale,
        "dtn": abs(du1 - beta * u1 - g) / max(abs(du1) + abs(beta * u1) + abs(g), 1e-300),
        "origin": abs(regular) / max(scale, float(np.abs(du_in.coeffs).sum()), 1e-300),
    }
