"""Scaled fundamental system, modal determinant and its k-derivative.

At a given k the fundamental system consists of

* f11 on (0, xi): regular at 0, f11'(xi) - i k n1(xi) f11(xi) = h11,
* f22 on (xi, 1): -f22'(xi) - i k n2(xi) f22(xi) = h22, f22'(1) = beta f22(1),

together with their k-derivatives, which solve the same operator with forcing
2 k n^2 f and differentiated boundary data. The modal matrix is

    T(k) = [[f11(xi), -f22(xi)], [f11'(xi), -f22'(xi)]].

With the default ("data") scaling, h11 and h22 are chosen so that f11 = J_m(k n1 r)
and f22 = H_m(k n2 r) whenever n is piecewise constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Protocol

import numpy as np

from . import bvp, chebfun
from .chebfun import ChebSeries
from .errors import NearHankelZero, ScalingDegenerate
from .profiles import RadialProfile, interface_trace
from .specfun import bessel_j_pair, hankel1_pair

Scaling = Literal["data", "unit"]
_H_FLOOR = 1e-300
_HANKEL_FLOOR = 1e-280


@dataclass(frozen=True)
class ScalingData:
    h11: complex
    h22: complex
    dh11: complex
    dh22: complex


@dataclass(frozen=True)
class DtnMultiplier:
    beta: complex
    dbeta: complex


@dataclass(frozen=True, eq=False)
class FundamentalSystem:
    k: complex
    f11: ChebSeries
    f22: ChebSeries
    df11: ChebSeries | None
    df22: ChebSeries | None
    f11xi: complex
    f11pxi: complex
    f22xi: complex
    f22pxi: complex
    d_f11xi: complex
    d_f22xi: complex
    scaling: ScalingData
    dtn: DtnMultiplier
    n1xi: float
    n2xi: float


@dataclass(frozen=True)
class DeterminantEval:
    det: complex
    ddet: complex
    t11: complex
    t12: complex
    t21: complex
    t22: complex
    fro_norm: float
    rel_residual: float
    dt: tuple[complex, complex, complex, complex] | None = field(default=None, compare=False)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.t11, self.t12], [self.t21, self.t22]])


class DetProvider(Protocol):
    def __call__(self, k: complex) -> DeterminantEval: ...


def _hankel_second(m: int, z: complex, h, hp) -> complex:
    return -hp / z - (1.0 - m * m / (z * z)) * h


def scaling_data(profile: RadialProfile, m: int, k: complex, scaling: Scaling = "data") -> ScalingData:
    """Robin data h11, h22 and their k-derivatives."""
    k = complex(k)
    if scaling == "unit":
        return ScalingData(1.0 + 0j, 1.0 + 0j, 0j, 0j)
    xi = profile.xi
    tr = interface_trace(profile)
    n1, n2 = tr.n0, tr.n2xi
    z1 = k * xi * n1
    z2 = k * xi * n2
    j = bessel_j_pair(m, z1)
    h = hankel1_pair(m, z2)
    j2 = _hankel_second(m, z1, j.value, j.derivative)
    h2 = _hankel_second(m, z2, h.value, h.derivative)
    h11 = k * n1 * (j.derivative - 1j * j.value)
    h22 = -k * n2 * (h.derivative + 1j * h.value)
    dh11 = n1 * (j.derivative - 1j * j.value) + k * n1 * xi * n1 * (j2 - 1j * j.derivative)
    dh22 = -n2 * (h.derivative + 1j * h.value) - k * n2 * xi * n2 * (h2 + 1j * h.derivative)
    if abs(h11) < _H_FLOOR or abs(h22) < _H_FLOOR:
        raise ScalingDegenerate(f"scaling data vanish at k={k}")
    return ScalingData(h11, h22, dh11, dh22)


def dtn_multiplier(m: int, k: complex, n2_at_1: float) -> DtnMultiplier:
    """beta = kappa H_m'(kappa)/H_m(kappa), kappa = k n2(1), and d beta/dk."""
    kappa = complex(k) * n2_at_1
    h = hankel1_pair(m, kappa)
    if abs(h.value) < _HANKEL_FLOOR:
        raise NearHankelZero(f"H_{m} vanishes near kappa={kappa}")
    q = h.derivative / h.value
    beta = kappa * q
    dbeta = n2_at_1 * (m * m / kappa - kappa - kappa * q * q)
    return DtnMultiplier(beta, dbeta)


def assemble(
    profile: RadialProfile,
    m: int,
    k: complex,
    tol: float = 1e-12,
    scaling: Scaling = "data",
    derivative: bool = True,
) -> FundamentalSystem:
    """Four BVP solves (f11, f22 and their k-derivatives) at one k.

    With ``derivative=False`` only f11 and f22 are computed; the derivative
    fields are then None/nan and ``determinant`` reports ddet = nan.
    """
    k = complex(k)
    xi = profile.xi
    tr = interface_trace(profile)
    n1, n2 = tr.n0, tr.n2xi
    sd = scaling_data(profile, m, k, scaling)
    dtn = dtn_multiplier(m, k, tr.n2one)

    inner_seg, outer_seg = profile.inner, profile.outer
    regular = bvp.LinearBC(1.0, 0.0) if m % 2 else bvp.LinearBC(0.0, 1.0)
    p11 = bvp.OdeProblem(
        (0.0, xi), m, k, inner_seg, regular, bvp.LinearBC(-1j * k * n1, 1.0, sd.h11)
    )

    def force11(r, vals, v):
        return 2 * k * inner_seg.squared(r) * vals, 0.0, sd.dh11 + 1j * n1 * vals[-1]

    f11, df11 = bvp.solve_with_derivative(p11, force11, tol) if derivative else (bvp.solve(p11, tol), None)

    p22 = bvp.OdeProblem(
        (xi, 1.0),
        m,
        k,
        outer_seg,
        bvp.LinearBC(-1j * k * n2, -1.0, sd.h22),
        bvp.LinearBC(-dtn.beta, 1.0, 0.0),
    )

    def force22(r, vals, v):
        return 2 * k * outer_seg.squared(r) * vals, sd.dh22 + 1j * n2 * vals[0], dtn.dbeta * vals[-1]

    f22, df22 = bvp.solve_with_derivative(p22, force22, tol) if derivative else (bvp.solve(p22, tol), None)

    f11xi = chebfun.evaluate(f11, xi)
    f22xi = chebfun.evaluate(f22, xi)
    return FundamentalSystem(
        k=k,
        f11=f11,
        f22=f22,
        df11=df11,
        df22=df22,
        f11xi=f11xi,
        f11pxi=1j * k * n1 * f11xi + sd.h11,
        f22xi=f22xi,
        f22pxi=-1j * k * n2 * f22xi - sd.h22,
        d_f11xi=chebfun.evaluate(df11, xi) if derivative else complex("nan"),
        d_f22xi=chebfun.evaluate(df22, xi) if derivative else complex("nan"),
        scaling=sd,
        dtn=dtn,
        n1xi=n1,
        n2xi=n2,
    )


def determinant(fs: FundamentalSystem) -> DeterminantEval:
    """det(T(k)), its k-derivative, T and the relative residual."""
    k = fs.k
    n1, n2 = fs.n1xi, fs.n2xi
    sd = fs.scaling
    a, b = fs.f11xi, fs.f22xi
    da, db = fs.d_f11xi, fs.d_f22xi
    det = 1j * k * (n2 + n1) * a * b + sd.h22 * a + sd.h11 * b
    ddet = (
        1j * (n1 + n2) * (a * b + k * da * b + k * a * db)
        + sd.h22 * da
        + sd.dh22 * a
        + sd.h11 * db
        + sd.dh11 * b
    )
    t11, t12, t21, t22 = a, -b, fs.f11pxi, -fs.f22pxi
    d_f11p = 1j * n1 * a + 1j * k * n1 * da + sd.dh11
    d_f22p = -1j * n2 * b - 1j * k * n2 * db - sd.dh22
    fro = float(np.sqrt(abs(t11) ** 2 + abs(t12) ** 2 + abs(t21) ** 2 + abs(t22) ** 2))
    return DeterminantEval(
        det, ddet, t11, t12, t21, t22, fro, abs(det) / fro, (da, -db, d_f11p, -d_f22p)
    )


@dataclass(frozen=True)
class NumericDeterminant:
    """Determinant provider backed by the spectral BVP pipeline."""

    profile: RadialProfile
    m: int
    tol: float = 1e-12
    scaling: Scaling = "data"

    def __call__(self, k: complex) -> DeterminantEval:
        return determinant(assemble(self.profile, self.m, k, self.tol, self.scaling))
