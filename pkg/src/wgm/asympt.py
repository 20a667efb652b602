"""Large-m asymptotic quasi-resonances in three curvature regimes.

With n0, nI, nII the inner limits of n, n', n'' at xi:

    kappa_check = xi (1/xi + nI/n0)            effective adimensional curvature
    mu_check    = xi^2 (2/xi^2 - nII/n0)       adimensional Hessian

Regime A (kappa_check > 0) expands in powers of (2 kappa_check/m)^{1/3} with Airy
zeros; regime B (kappa_check = 0) and regime C (kappa_check < 0) expand in
powers of 1/m, C around the inner critical point xi0 of r n(r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy.optimize import brentq

from .errors import HessianNotPositive, NoCriticalPoint, RegimeUnsupported
from .profiles import RadialProfile, interface_trace
from .specfun import airy_neg_roots

Regime = Literal["A", "B", "C"]
_FLAT_TOL = 1e-12
_SCAN_POINTS = 2001
# a degenerate (cubic) crossing leaves mu0 ~ 1e-9 after root finding
_HESSIAN_FLOOR = 1e-8


@dataclass(frozen=True)
class AsymptoticInvariants:
    n0: float
    kappa_check: float
    mu_check: float
    regime: Regime
    applicable: bool = True


@dataclass(frozen=True)
class InnerCriticalPoint:
    xi0: float
    mu0_check: float
    n_xi0: float


def invariants(profile: RadialProfile) -> AsymptoticInvariants:
    tr = interface_trace(profile)
    xi = profile.xi
    kappa = xi * (1.0 / xi + tr.nI / tr.n0)
    mu = xi * xi * (2.0 / (xi * xi) - tr.nII / tr.n0)
    if abs(kappa) <= _FLAT_TOL:
        kappa = 0.0
        regime: Regime = "B"
    else:
        regime = "A" if kappa > 0 else "C"
    return AsymptoticInvariants(tr.n0, kappa, mu, regime, profile.outer_is_vacuum)


def inner_critical_point(profile: RadialProfile) -> InnerCriticalPoint:
    """Root xi0 in (0, xi) of 1 + r n'(r)/n(r) and the Hessian there."""
    n = profile.inner
    xi = profile.xi

    def g(r: float) -> float:
        return 1.0 + r * n(r, 1) / n(r, 0)

    # 1 + r n'/n equals 1 at r = 0; scan for the first sign change
    prev_r, prev_g = 0.0, 1.0
    for i in range(1, _SCAN_POINTS):
        r = xi * i / (_SCAN_POINTS - 1)
        gr = g(r)
        if gr == 0.0:
            root = r
            break
        if gr * prev_g < 0:
            root = brentq(g, prev_r, r, xtol=1e-16, rtol=1e-15)
            break
        prev_r, prev_g = r, gr
    else:
        raise NoCriticalPoint("1 + r n'(r)/n(r) has no sign change on (0, xi)")
    n_at = n(root, 0)
    mu0 = root * root * (2.0 / (root * root) - n(root, 2) / n_at)
    if mu0 <= _HESSIAN_FLOOR:
        raise HessianNotPositive(f"mu0_check={mu0} at xi0={root}")
    return InnerCriticalPoint(root, mu0, n_at)


def quasi_resonance(profile: RadialProfile, m: int, j: int = 0) -> float:
    """Asymptotic quasi-resonance of index j >= 0 for angular order m >= 1."""
    if m < 1 or j < 0:
        raise RegimeUnsupported("need m >= 1 and j >= 0")
    inv = invariants(profile)
    if not inv.applicable:
        raise RegimeUnsupported("expansions assume n = 1 outside the jump")
    xi, n0 = profile.xi, inv.n0
    base = m / (xi * n0)
    if inv.regime == "A":
        if not n0 > 1:
            raise RegimeUnsupported("regime A needs n0 > 1")
        a = airy_neg_roots(j + 1)[j]
        kc, mc = inv.kappa_check, inv.mu_check
        e = 2 * kc / m
        s = math.sqrt(n0 * n0 - 1)
        series = (
            1
            + a / 2 * e ** (2 / 3)
            - n0 / (2 * s) * e
            + a * a / 15 * (17 / 8 - 3 / kc + mc / kc**2) * e ** (4 / 3)
            - a * n0 / (12 * s) * (n0 * n0 / (n0 * n0 - 1) + 2 - 6 / kc + 2 * mc / kc**2) * e ** (5 / 3)
        )
        return base * series
    if inv.regime == "B":
        if inv.mu_check <= 0:
            raise RegimeUnsupported("regime B needs a positive Hessian")
        return base * (1 + (4 * j + 3) / 2 * math.sqrt(inv.mu_check) / m)
    cp = inner_critical_point(profile)
    return m / (cp.xi0 * cp.n_xi0) * (1 + (2 * j + 1) / 2 * math.sqrt(cp.mu0_check) / m)
