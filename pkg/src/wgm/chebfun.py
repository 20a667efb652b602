"""Chebyshev series on an interval: evaluation, differentiation, resolution check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_EDGE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """sum_n coeffs[n] T_n(x(r)) on [a, b], x(r) = (2r - a - b)/(b - a)."""

    a: float
    b: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if not self.b > self.a:
            raise DomainError(f"need b > a, got [{self.a}, {self.b}]")
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be a nonempty finite vector")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, r):
        return evaluate(self, r)


def _to_unit(s: ChebSeries, r):
    return (2.0 * np.asarray(r, dtype=float) - s.a - s.b) / (s.b - s.a)


def evaluate(s: ChebSeries, r):
    """Clenshaw evaluation at a scalar or an array of points in [a, b]."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < s.a - _EDGE_SLACK) or np.any(r_arr > s.b + _EDGE_SLACK):
        raise DomainError(f"evaluation point outside [{s.a}, {s.b}]")
    x = np.clip(_to_unit(s, r_arr), -1.0, 1.0)
    c = s.coeffs
    b1 = np.zeros_like(x, dtype=complex)
    b2 = np.zeros_like(x, dtype=complex)
    for cn in c[:0:-1]:
        b1, b2 = 2.0 * x * b1 - b2 + cn, b1
    out = x * b1 - b2 + c[0]
    return complex(out) if out.ndim == 0 else out


def differentiate(s: ChebSeries) -> ChebSeries:
    """Derivative in r, computed in coefficient space."""
    c = s.coeffs
    n = c.size - 1
    if n == 0:
        return ChebSeries(s.a, s.b, np.zeros(1, dtype=complex))
    d = np.zeros(n + 1, dtype=complex)
    for k in range(n - 1, -1, -1):
        d[k] = d[k + 2] + 2 * (k + 1) * c[k + 1] if k + 2 <= n else 2 * (k + 1) * c[k + 1]
    d[0] *= 0.5
    return ChebSeries(s.a, s.b, d[:n] * (2.0 / (s.b - s.a)))


def tail_ratio(s: ChebSeries) -> float:
    """max |last three coefficients| / max |coefficient|; 0 for the zero series."""
    mags = np.abs(s.coeffs)
    if mags.size < 4:
        raise DomainError("tail_ratio needs at least 4 coefficients")
    top = mags.max()
    if top == 0.0:
        return 0.0
    return float(mags[-3:].max() / top)


def points(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """n+1 Chebyshev extreme points on [a, b] in increasing order."""
    x = -np.cos(np.pi * np.arange(n + 1) / n) if n > 0 else np.zeros(1)
    return 0.5 * (a + b) + 0.5 * (b - a) * x


def vals_to_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients from values at ``points(n)`` (increasing order)."""
    v = np.asarray(values, dtype=complex)[::-1]  # cos(pi j/n) ordering
    n = v.size - 1
    if n == 0:
        return v.copy()
    ext = np.concatenate([v, v[-2:0:-1]])
    c = np.fft.fft(ext)[: n + 1] / n
    c[0] *= 0.5
    c[n] *= 0.5
    return c


def from_values(values: np.ndarray, a: float, b: float) -> ChebSeries:
    return ChebSeries(a, b, vals_to_coeffs(values))


def fit(func, n: int, a: float, b: float) -> ChebSeries:
    """Degree-n interpolant of ``func`` at Chebyshev points of [a, b]."""
    return from_values(np.asarray(func(points(n, a, b)), dtype=complex), a, b)


def diff_matrix(n: int) -> np.ndarray:
    """Differentiation matrix on ``points(n)`` in [-1, 1] (increasing order)."""
    x = points(n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d -= np.diag(d.sum(axis=1))
    return d
