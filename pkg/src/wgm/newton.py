"""Complex Newton iteration on the modal determinant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .detsys import DeterminantEval, DetProvider
from .errors import DerivativeVanished, DomainError, ProviderError, SingularT, WgmError
from .profiles import RadialProfile, interface_trace

Criterion = Literal["relative", "absolute"]


@dataclass(frozen=True)
class NewtonConfig:
    """eps: stopping threshold; l_max: iteration cap; bvp_tol: spectral solver tolerance.

    ``criterion="relative"`` stops on |det|/||T||_F <= eps, ``"absolute"`` on |det| <= eps.
    """

    eps: float = 1e-8
    l_max: int = 2000
    bvp_tol: float = 1e-12
    criterion: Criterion = "relative"

    def __post_init__(self) -> None:
        if not 1e-12 <= self.eps <= 1e-4:
            raise DomainError(f"eps={self.eps} outside [1e-12, 1e-4]")
        if int(self.l_max) != self.l_max or self.l_max < 1:
            raise DomainError("l_max must be a positive integer")
        if self.criterion not in ("relative", "absolute"):
            raise DomainError(f"unknown criterion {self.criterion!r}")


class Iterate(NamedTuple):
    k: complex
    abs_det: float
    abs_ddet: float
    rel_residual: float


@dataclass(frozen=True)
class NewtonResult:
    k: complex
    iterations: list[Iterate]
    converged: bool
    l: int
    final: DeterminantEval | None = None

    @property
    def residuals(self) -> list[float]:
        return [it.rel_residual for it in self.iterations]


def starting_value(profile: RadialProfile, m: int) -> float:
    """k0 = m / (xi n0) with n0 the inner limit of n at xi."""
    if m < 1:
        raise DomainError("m must be at least 1")
    return m / (profile.xi * interface_trace(profile).n0)


def _stop_value(ev: DeterminantEval, cfg: NewtonConfig) -> float:
    return ev.rel_residual if cfg.criterion == "relative" else abs(ev.det)


def solve(provider: DetProvider, k0: complex, cfg: NewtonConfig | None = None) -> NewtonResult:
    """k_{l+1} = k_l - det(k_l)/det'(k_l) until the stopping rule holds or l = l_max."""
    cfg = cfg or NewtonConfig()
    k = complex(k0)
    history: list[Iterate] = []
    for l in range(cfg.l_max + 1):
        try:
            ev = provider(k)
        except WgmError as exc:
            raise ProviderError(l, k, exc) from exc
        history.append(Iterate(k, abs(ev.det), abs(ev.ddet), ev.rel_residual))
        if _stop_value(ev, cfg) <= cfg.eps:
            return NewtonResult(k, history, True, l, ev)
        if l == cfg.l_max:
            break
        if abs(ev.ddet) < 1e-300:
            raise DerivativeVanished(f"|det'| underflows at iterate {l} (k={k})")
        k = k - ev.det / ev.ddet
        if not np.isfinite(k):
            break
    return NewtonResult(k, history, False, len(history) - 1, ev)


def trace_step(ev: DeterminantEval, dT) -> complex:
    """1 / trace(T^{-1} dT/dk), equal to det/det' for a consistent dT."""
    t = ev.matrix
    detT = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(detT) < 1e-300 * ev.fro_norm**2:
        raise SingularT("T(k) numerically singular")
    d = np.asarray(dT, dtype=complex).reshape(2, 2)
    inv = np.array([[t[1, 1], -t[0, 1]], [-t[1, 0], t[0, 0]]]) / detT
    return 1.0 / np.trace(inv @ d)


@dataclass(frozen=True)
class DividedByK:
    """Provider for det(k)/k, the normalisation used by the closed-form comparisons."""

    inner: DetProvider

    def __call__(self, k: complex) -> DeterminantEval:
        ev = self.inner(k)
        k = complex(k)
        d = ev.det / k
        dd = (ev.ddet - d) / k
        return DeterminantEval(
            d, dd, ev.t11, ev.t12, ev.t21, ev.t22, ev.fro_norm, abs(d) / ev.fro_norm, ev.dt
        )
