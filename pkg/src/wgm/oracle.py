"""Closed-form determinants for the piecewise-constant and Luneburg cases.

Piecewise constant (n1 inside, n2 outside):

    D(k) = -[J_m(k n1 xi) n2 H_m'(k n2 xi) - n1 J_m'(k n1 xi) H_m(k n2 xi)],

which equals det(k)/k for the "data" scaling of the numerical pipeline.

Luneburg (n = sqrt(2 - r^2) inside, n = 1 outside): the regular inner solution is
f1(r) = M_{k/2, m/2}(k r^2)/r, and f1, f1'/k take the roles of J_m(k n1 r), n1 J_m'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .detsys import DeterminantEval
from .errors import DomainError
from .specfun import FunPair, bessel_j_pair, hankel1_pair, whittaker_m_pair

# derivative of the Luneburg determinant: trapezoidal Cauchy rule on a small circle
_CIRCLE_POINTS = 8
_CIRCLE_RADIUS = 1e-3


@dataclass(frozen=True)
class OracleDeterminant:
    value: complex
    derivative: complex


def _second(m: int, z: complex, f: FunPair) -> complex:
    return -f.derivative / z - (1.0 - m * m / (z * z)) * f.value


def _check_k(k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    return k


def det_pw_constant(m: int, k: complex, xi: float, n1: float, n2: float) -> OracleDeterminant:
    k = _check_k(k)
    z1, z2 = k * n1 * xi, k * n2 * xi
    j = bessel_j_pair(m, z1)
    h = hankel1_pair(m, z2)
    value = -(j.value * n2 * h.derivative - n1 * j.derivative * h.value)
    deriv = -xi * (n2 * n2 * j.value * _second(m, z2, h) - n1 * n1 * _second(m, z1, j) * h.value)
    return OracleDeterminant(value, deriv)


def dtilde(m: int, N: float, K: complex) -> complex:
    """N J_m'(N K) H_m(K) - J_m(N K) H_m'(K)."""
    return dtilde_pair(m, N, K).value


def dtilde_pair(m: int, N: float, K: complex) -> OracleDeterminant:
    K = _check_k(K)
    if not N > 0:
        raise DomainError("contrast N must be positive")
    j = bessel_j_pair(m, N * K)
    h = hankel1_pair(m, K)
    value = N * j.derivative * h.value - j.value * h.derivative
    deriv = N * N * _second(m, N * K, j) * h.value - j.value * _second(m, K, h)
    return OracleDeterminant(value, deriv)


def luneburg_inner(m: int, k: complex, r: float) -> FunPair:
    """f1(r) = M_{k/2,m/2}(k r^2)/r and its r-derivative."""
    k = complex(k)
    w = whittaker_m_pair(k / 2, m / 2, k * r * r)
    value = w.value / r
    return FunPair(value, 2 * k * w.derivative - w.value / (r * r))


def _luneburg_parts(m: int, k: complex, xi: float):
    f = luneburg_inner(m, k, xi)
    h = hankel1_pair(m, k * xi)
    n1 = math.sqrt(2.0 - xi * xi)
    j = bessel_j_pair(m, k * xi * n1)
    h11 = k * n1 * (j.derivative - 1j * j.value)
    alpha = h11 / (f.derivative - 1j * k * n1 * f.value)
    raw = -(f.value * h.derivative - f.derivative / k * h.value)
    return f, h, alpha, raw


def _luneburg_value(m: int, k: complex, xi: float, scaled: bool) -> complex:
    _, _, alpha, raw = _luneburg_parts(m, k, xi)
    return alpha * raw if scaled else raw


def _circle_derivative(fun, k: complex) -> complex:
    rho = _CIRCLE_RADIUS * max(1.0, abs(k))
    w = np.exp(2j * np.pi * np.arange(_CIRCLE_POINTS) / _CIRCLE_POINTS)
    vals = np.array([fun(k + rho * wi) for wi in w])
    return complex(np.mean(vals / w) / rho)


def det_luneburg(m: int, k: complex, xi: float = 0.5, scaled: bool = False) -> OracleDeterminant:
    """Closed-form Luneburg determinant.

    ``scaled=False`` gives -[f1 H_m'(k xi) - (f1'/k) H_m(k xi)]. ``scaled=True``
    multiplies by the factor that turns f1 into the inner solution with the
    "data" Robin scaling, so that the result equals det(k)/k of the numerical
    pipeline.
    """
    k = _check_k(k)
    value = _luneburg_value(m, k, xi, scaled)
    deriv = _circle_derivative(lambda q: _luneburg_value(m, q, xi, scaled), k)
    return OracleDeterminant(value, deriv)


def _as_eval(det, ddet, t11, t12, t21, t22) -> DeterminantEval:
    fro = math.sqrt(abs(t11) ** 2 + abs(t12) ** 2 + abs(t21) ** 2 + abs(t22) ** 2)
    return DeterminantEval(det, ddet, t11, t12, t21, t22, fro, abs(det) / fro)


@dataclass(frozen=True)
class PiecewiseConstantOracle:
    """det(k) = k D(k) with the exact T(k) of the piecewise-constant case."""

    m: int
    xi: float
    n1: float
    n2: float = 1.0

    def __call__(self, k: complex) -> DeterminantEval:
        k = _check_k(k)
        d = det_pw_constant(self.m, k, self.xi, self.n1, self.n2)
        j = bessel_j_pair(self.m, k * self.n1 * self.xi)
        h = hankel1_pair(self.m, k * self.n2 * self.xi)
        return _as_eval(
            k * d.value,
            d.value + k * d.derivative,
            j.value,
            -h.value,
            k * self.n1 * j.derivative,
            -k * self.n2 * h.derivative,
        )


@dataclass(frozen=True)
class LuneburgOracle:
    """Scaled Luneburg det(k) built from the Whittaker inner solution."""

    m: int
    xi: float = 0.5

    def __call__(self, k: complex) -> DeterminantEval:
        k = _check_k(k)
        f, h, alpha, raw = _luneburg_parts(self.m, k, self.xi)
        d = det_luneburg(self.m, k, self.xi, scaled=True)
        return _as_eval(
            k * d.value,
            d.value + k * d.derivative,
            alpha * f.value,
            -h.value,
            alpha * f.derivative,
            -k * h.derivative,
        )


def luneburg_ode_residual(m: int, k: complex, r: float, step: float | None = None) -> float:
    """Relative residual of -y'' - y'/r + (m^2/r^2 - k^2 (2 - r^2)) y at r, y = f1.

    y'' comes from a five-point difference of the analytic y' (default step 1e-4 r).
    """
    k = complex(k)
    h = 1e-4 * r if step is None else step
    dp = [luneburg_inner(m, k, r + s * h).derivative for s in (-2, -1, 1, 2)]
    y = luneburg_inner(m, k, r)
    d1 = y.derivative
    d2 = (dp[0] - 8 * dp[1] + 8 * dp[2] - dp[3]) / (12 * h)
    q = m * m / (r * r) - k * k * (2 - r * r)
    res = -d2 - d1 / r + q * y.value
    return abs(res) / (abs(d2) + abs(d1 / r) + abs(q * y.value))


__all__ = [
    "OracleDeterminant",
    "det_pw_constant",
    "dtilde",
    "dtilde_pair",
    "det_luneburg",
    "luneburg_inner",
    "PiecewiseConstantOracle",
    "LuneburgOracle",
    "luneburg_ode_residual",
]

