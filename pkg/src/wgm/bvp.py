"""Adaptive Chebyshev collocation for the radial Bessel-type two-point problems.

The operator L v = -v'' - v'/r + (m^2/r^2 - k^2 n^2) v is discretised in the
regularised form

    -r^2 v'' - r v' + (m^2 - k^2 n(r)^2 r^2) v = r^2 g(r)

on Chebyshev extreme points, with the two endpoint rows replaced by the
boundary rows a v(x0) + b v'(x0) = rhs. Rows are equilibrated and the dense
complex system is LU-factorised once per (k, degree); the factorisation is
reused for every right-hand side sharing the operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

from . import chebfun
from .chebfun import ChebSeries
from .errors import DomainError, NoConvergence, SingularSystem
from .profiles import ProfileSegment

N_START = 32
N_MAX = 4096
_RCOND_FLOOR = 1e-15


@dataclass(frozen=True)
class LinearBC:
    """a_coef v(x0) + b_coef v'(x0) = rhs at one endpoint."""

    a_coef: complex
    b_coef: complex
    rhs: complex = 0.0

    def __post_init__(self) -> None:
        if self.a_coef == 0 and self.b_coef == 0:
            raise DomainError("boundary row needs a nonzero coefficient")

    def with_rhs(self, rhs: complex) -> LinearBC:
        return LinearBC(self.a_coef, self.b_coef, rhs)


@dataclass(frozen=True)
class OdeProblem:
    interval: tuple[float, float]
    m: int
    k: complex
    segment: ProfileSegment
    left: LinearBC
    right: LinearBC
    rhs: ChebSeries | Callable | None = None

    def __post_init__(self) -> None:
        a, b = self.interval
        if not 0.0 <= a < b <= 1.0:
            raise DomainError(f"interval {self.interval} not inside [0, 1]")
        if self.k == 0:
            raise DomainError("k must be nonzero")
        if self.m < 0 or int(self.m) != self.m:
            raise DomainError("m must be a nonnegative integer")


class Discretization:
    """Collocation operator at a fixed degree, factorised once."""

    def __init__(self, interval, m, k, segment, left: LinearBC, right: LinearBC, n: int):
        a, b = interval
        self.interval = (a, b)
        self.n = n
        self.r = chebfun.points(n, a, b)
        d1 = chebfun.diff_matrix(n) * (2.0 / (b - a))
        self.d1 = d1
        d2 = d1 @ d1
        r = self.r
        k = complex(k)
        diag = m * m - k * k * segment.squared(r) * r * r
        mat = -(r * r)[:, None] * d2 - r[:, None] * d1 + np.diag(diag)
        mat[0, :] = left.b_coef * d1[0, :]
        mat[0, 0] += left.a_coef
        mat[-1, :] = right.b_coef * d1[-1, :]
        mat[-1, -1] += right.a_coef
        self.row_scale = 1.0 / np.max(np.abs(mat), axis=1)
        mat *= self.row_scale[:, None]
        lu, piv = sla.lu_factor(mat, check_finite=False)
        diag_u = np.abs(np.diag(lu))
        if diag_u.min() <= _RCOND_FLOOR * diag_u.max():
            raise SingularSystem(f"collocation matrix singular at k={k}, degree {n}")
        self._lu = (lu, piv)

    def solve(self, rhs_values, left_rhs: complex, right_rhs: complex) -> np.ndarray:
        """Point values of the solution for forcing g sampled at ``self.r``."""
        r = self.r
        f = np.asarray(rhs_values, dtype=complex) * r * r
        f[0] = left_rhs
        f[-1] = right_rhs
        return sla.lu_solve(self._lu, f * self.row_scale, check_finite=False)

    def series(self, values: np.ndarray) -> ChebSeries:
        return chebfun.from_values(values, *self.interval)


def _sample(rhs, r: np.ndarray) -> np.ndarray:
    if rhs is None:
        return np.zeros(r.size, dtype=complex)
    if isinstance(rhs, ChebSeries):
        return np.asarray(chebfun.evaluate(rhs, r), dtype=complex)
    return np.asarray(rhs(r), dtype=complex)


def _check_tol(tol: float) -> None:
    if not 1e-14 <= tol <= 1e-6:
        raise DomainError(f"tol={tol} outside [1e-14, 1e-6]")


def _degrees():
    n = N_START
    while n <= N_MAX:
        yield n
        n *= 2


def solve(p: OdeProblem, tol: float = 1e-12) -> ChebSeries:
    """Adaptive solve: double the degree until the tail ratio drops below tol."""
    _check_tol(tol)
    for n in _degrees():
        disc = Discretization(p.interval, p.m, p.k, p.segment, p.left, p.right, n)
        vals = disc.solve(_sample(p.rhs, disc.r), p.left.rhs, p.right.rhs)
        v = disc.series(vals)
        if chebfun.tail_ratio(v) <= tol:
            return v
    raise NoConvergence(f"degree budget {N_MAX} exhausted (m={p.m}, k={p.k})")


Forcing = Callable[[np.ndarray, np.ndarray, ChebSeries], tuple[np.ndarray, complex, complex]]


def solve_with_derivative(
    p: OdeProblem, forcing: Forcing, tol: float = 1e-12
) -> tuple[ChebSeries, ChebSeries]:
    """Solve p, then a second problem sharing its operator.

    ``forcing(r, v_values, v)`` returns the second problem's forcing samples at
    the collocation points and its left/right boundary right-hand sides. Both
    solutions are resolved at a common degree with one factorisation.
    """
    _check_tol(tol)
    for n in _degrees():
        disc = Discretization(p.interval, p.m, p.k, p.segment, p.left, p.right, n)
        vals = disc.solve(_sample(p.rhs, disc.r), p.left.rhs, p.right.rhs)
        v = disc.series(vals)
        if chebfun.tail_ratio(v) > tol:
            continue
        g, lrhs, rrhs = forcing(disc.r, vals, v)
        w = disc.series(disc.solve(g, lrhs, rrhs))
        if chebfun.tail_ratio(w) <= tol:
            return v, w
    raise NoConvergence(f"degree budget {N_MAX} exhausted (m={p.m}, k={p.k})")


def residual(p: OdeProblem, v: ChebSeries, r: np.ndarray) -> np.ndarray:
    """Regularised-equation residual of v at points r."""
    r = np.asarray(r, dtype=float)
    d1 = chebfun.differentiate(v)
    d2 = chebfun.differentiate(d1)
    k = complex(p.k)
    lhs = (
        -r * r * chebfun.evaluate(d2, r)
        - r * chebfun.evaluate(d1, r)
        + (p.m**2 - k * k * p.segment.squared(r) * r * r) * chebfun.evaluate(v, r)
    )
    return lhs - r * r * _sample(p.rhs, r)


def bc_residuals(p: OdeProblem, v: ChebSeries) -> tuple[complex, complex]:
    a, b = p.interval
    dv = chebfun.differentiate(v)
    left = p.left.a_coef * v(a) + p.left.b_coef * dv(a) - p.left.rhs
    right = p.right.a_coef * v(b) + p.right.b_coef * dv(b) - p.right.rhs
    return left, right
