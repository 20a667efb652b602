"""Piecewise-smooth radial refractive-index profiles with a single jump at xi."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal, NamedTuple

import numpy as np

from .errors import DomainError, UnknownProfile

Side = Literal["inner", "outer"]

_GRID_POINTS = 10_001
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class ProfileSegment:
    """Either a polynomial sum c_j r^j or the square root sqrt(alpha + gamma r^2)."""

    form: Literal["poly", "sqrtq"]
    coeffs: tuple[float, ...] = ()
    alpha: float = 0.0
    gamma: float = 0.0

    @classmethod
    def poly(cls, *coeffs: float) -> ProfileSegment:
        if not coeffs:
            raise DomainError("polynomial segment needs at least one coefficient")
        return cls("poly", tuple(float(c) for c in coeffs))

    @classmethod
    def sqrtq(cls, alpha: float, gamma: float) -> ProfileSegment:
        return cls("sqrtq", (), float(alpha), float(gamma))

    def __call__(self, r, order: int = 0):
        """n, n' or n'' at r (scalar or array)."""
        r = np.asarray(r, dtype=float)
        if self.form == "poly":
            c = np.polynomial.polynomial.polyder(self.coeffs, order) if order else self.coeffs
            out = np.polynomial.polynomial.polyval(r, c) if len(c) else np.zeros_like(r)
        else:
            q = self.alpha + self.gamma * r * r
            root = np.sqrt(q)
            if order == 0:
                out = root
            elif order == 1:
                out = self.gamma * r / root
            elif order == 2:
                out = self.gamma * self.alpha / (q * root)
            else:
                raise DomainError("order must be 0, 1 or 2")
        return float(out) if out.ndim == 0 else out

    def squared(self, r):
        """n(r)^2, exactly polynomial for both forms."""
        r = np.asarray(r, dtype=float)
        if self.form == "poly":
            return np.polynomial.polynomial.polyval(r, self.coeffs) ** 2
        return self.alpha + self.gamma * r * r

    def to_json(self) -> dict[str, Any]:
        if self.form == "poly":
            return {"poly": list(self.coeffs)}
        return {"sqrtq": {"alpha": self.alpha, "gamma": self.gamma}}

    @classmethod
    def from_json(cls, spec: dict[str, Any]) -> ProfileSegment:
        if "poly" in spec:
            return cls.poly(*spec["poly"])
        if "sqrtq" in spec:
            q = spec["sqrtq"]
            return cls.sqrtq(q["alpha"], q["gamma"])
        raise DomainError(f"unrecognised segment literal {spec!r}")


@dataclass(frozen=True)
class RadialProfile:
    xi: float
    inner: ProfileSegment
    outer: ProfileSegment
    name: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.xi < 1.0:
            raise DomainError(f"jump point xi={self.xi} must lie in (0, 1)")
        for side, lo, hi in (("inner", 0.0, self.xi), ("outer", self.xi, 1.0)):
            seg = self.segment(side)
            with np.errstate(invalid="ignore"):
                vals = seg(np.linspace(lo, hi, _GRID_POINTS))
            if not np.all(np.isfinite(vals)) or np.min(vals) <= 0.0:
                raise DomainError(f"{side} segment of {self.name!r} is not positive on [{lo}, {hi}]")

    def segment(self, side: Side) -> ProfileSegment:
        if side == "inner":
            return self.inner
        if side == "outer":
            return self.outer
        raise DomainError(f"side must be 'inner' or 'outer', got {side!r}")

    def interval(self, side: Side) -> tuple[float, float]:
        return (0.0, self.xi) if side == "inner" else (self.xi, 1.0)

    @property
    def outer_is_vacuum(self) -> bool:
        """True when n = 1 identically on (xi, 1)."""
        o = self.outer
        return o.form == "poly" and o.coeffs[0] == 1.0 and all(c == 0.0 for c in o.coeffs[1:])

    def to_json(self) -> dict[str, Any]:
        return {"xi": self.xi, "inner": self.inner.to_json(), "outer": self.outer.to_json()}

    @classmethod
    def from_json(cls, spec: dict[str, Any], name: str = "custom") -> RadialProfile:
        try:
            inner = ProfileSegment.from_json(spec["inner"])
        except KeyError as exc:
            raise DomainError("profile literal needs an 'inner' segment") from exc
        outer = ProfileSegment.from_json(spec.get("outer", {"poly": [1.0]}))
        return cls(float(spec.get("xi", 0.5)), inner, outer, name)


class InterfaceTrace(NamedTuple):
    n0: float
    nI: float
    nII: float
    n2xi: float
    n2one: float


def eval_n(profile: RadialProfile, side: Side, r: float, order: int = 0) -> float:
    """n, n' or n'' of one segment; one-sided values at xi are allowed."""
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    lo, hi = profile.interval(side)
    if not lo - _EDGE_SLACK <= r <= hi + _EDGE_SLACK:
        raise DomainError(f"r={r} outside the {side} interval [{lo}, {hi}]")
    return profile.segment(side)(r, order)


def interface_trace(profile: RadialProfile) -> InterfaceTrace:
    xi = profile.xi
    inner = profile.inner
    return InterfaceTrace(
        inner(xi, 0), inner(xi, 1), inner(xi, 2), profile.outer(xi, 0), profile.outer(1.0, 0)
    )


_P = ProfileSegment.poly
_VACUUM = _P(1.0)

_CATALOG: dict[str, tuple[ProfileSegment, ProfileSegment]] = {
    "constant-1.5": (_P(1.5), _VACUUM),
    "constant-5": (_P(5.0), _VACUUM),
    "affine-1": (_P(2.0, -1.0), _VACUUM),
    "affine-2": (_P(1.5, 1.0), _VACUUM),
    "affine-3": (_P(1.0, 1.0), _VACUUM),
    "affine-4": (_P(3.0, -3.0), _VACUUM),
    "affine-5": (_P(2.5, -2.8), _VACUUM),
    # 1.5 +- 6 r (xi - r) with xi = 1/2, and 3 - r (r + 1)
    "parabolic-1": (_P(1.5, 3.0, -6.0), _VACUUM),
    "parabolic-2": (_P(1.5, -3.0, 6.0), _VACUUM),
    "parabolic-3": (_P(3.0, -1.0, -1.0), _VACUUM),
    "luneburg": (ProfileSegment.sqrtq(2.0, -1.0), _VACUUM),
    "luneburg-n2-affine": (ProfileSegment.sqrtq(2.0, -1.0), _P(0.5, 1.0)),
    # 1 + (r - 1/2)^3 expanded
    "luneburg-n2-cubic": (ProfileSegment.sqrtq(2.0, -1.0), _P(0.875, 0.75, -1.5, 1.0)),
}


def catalog_names() -> list[str]:
    return list(_CATALOG)


def catalog(name: str) -> RadialProfile:
    try:
        inner, outer = _CATALOG[name]
    except KeyError:
        raise UnknownProfile(name) from None
    return RadialProfile(0.5, inner, outer, name)


def piecewise_constant(n1: float, n2: float = 1.0, xi: float = 0.5) -> RadialProfile:
    return RadialProfile(xi, _P(n1), _P(n2), f"constant-{n1:g}")


def constant_values(profile: RadialProfile) -> tuple[float, float] | None:
    """(n1, n2) when both segments are constant, else None."""
    segs = (profile.inner, profile.outer)
    if all(s.form == "poly" and all(c == 0.0 for c in s.coeffs[1:]) for s in segs):
        return segs[0].coeffs[0], segs[1].coeffs[0]
    return None


def is_luneburg(profile: RadialProfile) -> bool:
    inner = profile.inner
    return inner.form == "sqrtq" and math.isclose(inner.alpha, 2.0) and math.isclose(inner.gamma, -1.0)
