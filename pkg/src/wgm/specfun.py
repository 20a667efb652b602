"""Complex special functions: Bessel J, Hankel H^(1), Airy roots, Kummer 1F1, Whittaker M.

All routines are pure functions of their arguments. Integer orders only, apart
from the half-integer parameter of the Whittaker function.

Bessel J_m comes from Miller's backward recurrence normalised by the
Jacobi-Anger identity e^{+-iz} = J_0 + 2 sum (+-i)^n J_n. In the first quadrant
Hankel H_0 and H_1 are obtained by one of three routes:

* |z| >= 20: the large-argument Hankel expansion,
* |z| < 1.5: J + iY with Y_0, Y_1 from Neumann series over the Miller sequence,
* otherwise: Gauss-Hermite quadrature of the Hankel integral representation,

and higher orders follow by forward recurrence, which is stable for H^(1)
there. The fourth quadrant uses H^(1) = 2J - H^(2); Re z < 0 is reflected.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "DomainError",
    "ConvergenceError",
    "FunPair",
    "bessel_j_pair",
    "bessel_j_sequence",
    "hankel1_pair",
    "hankel1_sequence",
    "airy_ai_neg",
    "airy_neg_roots",
    "kummer_1f1",
    "whittaker_m_pair",
]

EULER_GAMMA = 0.5772156649015329
MAX_ORDER = 200
MAX_ABS_Z = 1.0e4
MAX_IMAG_HANKEL = 50.0
_ASYMPTOTIC_RADIUS = 20.0
_SMALL_RADIUS = 1.5


@dataclass(frozen=True)
class FunPair:
    """A function value together with its derivative in its own argument."""

    value: complex
    derivative: complex


def _check_order(m: int) -> int:
    if int(m) != m or m < 0 or m > MAX_ORDER:
        raise DomainError(f"order m={m} outside 0..{MAX_ORDER}")
    return int(m)


def _check_arg(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("non-finite argument")
    if abs(z) > MAX_ABS_Z:
        raise DomainError(f"|z|={abs(z):.3g} exceeds {MAX_ABS_Z:g}")
    return z


# ---------------------------------------------------------------- Bessel J


def _miller(mmax: int, z: complex) -> np.ndarray:
    """Normalised J_0..J_N(z) from backward recurrence, N comfortably > mmax, |z|."""
    big = max(mmax, abs(z))
    n_start = int(big + 20 + 6 * big ** (1.0 / 3.0)) + 2
    n_start += n_start % 2
    j = np.zeros(n_start + 2, dtype=complex)
    j[n_start] = 1e-30
    two_over_z = 2.0 / z
    for n in range(n_start, 0, -1):
        j[n - 1] = n * two_over_z * j[n] - j[n + 1]
        if abs(j[n - 1]) > 1e250:
            j *= 1e-250
    # pick the sign with |e^{isz}| >= 1 so the normalisation sum does not cancel
    s = 1.0 if z.imag <= 0 else -1.0
    powers = (1j * s) ** np.arange(1, n_start + 2)
    total = j[0] + 2.0 * np.sum(powers * j[1:])
    return j * (cmath.exp(1j * s * z) / total)


def bessel_j_sequence(mmax: int, z: complex) -> np.ndarray:
    """J_0(z), ..., J_mmax(z)."""
    mmax = _check_order(mmax)
    z = _check_arg(z)
    if z == 0:
        out = np.zeros(mmax + 1, dtype=complex)
        out[0] = 1.0
        return out
    return _miller(mmax, z)[: mmax + 1].copy()


def bessel_j_pair(m: int, z: complex) -> FunPair:
    """(J_m(z), J_m'(z))."""
    m = _check_order(m)
    z = _check_arg(z)
    if z == 0:
        return FunPair(1.0 + 0j if m == 0 else 0j, 0.5 + 0j if m == 1 else 0j)
    j = _miller(m + 1, z)
    if m == 0:
        return FunPair(complex(j[0]), complex(-j[1]))
    return FunPair(complex(j[m]), complex(0.5 * (j[m - 1] - j[m + 1])))


# ---------------------------------------------------------------- Hankel H^(1)


def _h01_asymptotic(z: complex) -> tuple[complex, complex]:
    out = []
    pref = cmath.sqrt(2.0 / (math.pi * z))
    for nu in (0, 1):
        mu = 4 * nu * nu
        term = 1.0 + 0j
        total = 1.0 + 0j
        prev = math.inf
        for k in range(1, 400):
            term = term * (mu - (2 * k - 1) ** 2) / (8 * k * z) * 1j
            size = abs(term)
            if size > prev:
                break
            total += term
            if size < 1e-17 * abs(total):
                break
            prev = size
        out.append(pref * cmath.exp(1j * (z - nu * math.pi / 2 - math.pi / 4)) * total)
    return out[0], out[1]


def _h01_neumann(z: complex) -> tuple[complex, complex]:
    j = _miller(2, z)
    half = (len(j) - 2) // 2
    k = np.arange(1, half + 1)
    sgn = (-1.0) ** k
    log_term = cmath.log(z / 2) + EULER_GAMMA
    y0 = (2 / math.pi) * log_term * j[0] - (4 / math.pi) * np.sum(sgn * j[2 * k] / k)
    y1 = -(2 / math.pi) * (j[0] / z - log_term * j[1]) + (2 / math.pi) * np.sum(
        sgn * (j[2 * k - 1] - j[2 * k + 1]) / k
    )
    return complex(j[0] + 1j * y0), complex(j[1] + 1j * y1)


_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(120)
_GH_U = _GH_NODES * _GH_NODES


def _h01_quadrature(z: complex) -> tuple[complex, complex]:
    # H_nu(z) = sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} / Gamma(nu+1/2)
    #           * int_0^inf e^{-u} u^{nu-1/2} (1 + iu/(2z))^{nu-1/2} du,  u = t^2
    base = 1.0 + 1j * _GH_U / (2.0 * z)
    i0 = np.sum(_GH_WEIGHTS / np.sqrt(base))
    i1 = np.sum(_GH_WEIGHTS * _GH_U * np.sqrt(base))
    pref = cmath.sqrt(2.0 / (math.pi * z))
    h0 = pref * cmath.exp(1j * (z - math.pi / 4)) * i0 / math.sqrt(math.pi)
    h1 = pref * cmath.exp(1j * (z - 3 * math.pi / 4)) * i1 / (0.5 * math.sqrt(math.pi))
    return complex(h0), complex(h1)


def _h01_upper(w: complex) -> tuple[complex, complex]:
    """H_0, H_1 for Re w >= 0, Im w >= 0."""
    if abs(w) >= _ASYMPTOTIC_RADIUS:
        return _h01_asymptotic(w)
    if abs(w) < _SMALL_RADIUS:
        return _h01_neumann(w)
    return _h01_quadrature(w)


def _h_upper(mmax: int, w: complex) -> np.ndarray:
    # forward recurrence is stable here: H^(1) never loses ground to H^(2)
    h = np.empty(max(mmax, 1) + 1, dtype=complex)
    h[0], h[1] = _h01_upper(w)
    two_over_w = 2.0 / w
    for n in range(1, mmax):
        h[n + 1] = n * two_over_w * h[n] - h[n - 1]
    return h[: mmax + 1]


def hankel1_sequence(mmax: int, z: complex) -> np.ndarray:
    """H^(1)_0(z), ..., H^(1)_mmax(z)."""
    z = _check_arg(z)
    if z == 0:
        raise DomainError("Hankel function is singular at z=0")
    if abs(z.imag) > MAX_IMAG_HANKEL:
        raise DomainError(f"|Im z|={abs(z.imag):.3g} exceeds {MAX_IMAG_HANKEL:g}")
    if z.real >= 0 and z.imag >= 0:
        return _h_upper(mmax, z)
    if z.real >= 0:
        # H1 = 2J - H2 and H2(z) = conj(H1(conj z)); no cancellation for Im z < 0
        return 2.0 * _miller(mmax, z)[: mmax + 1] - np.conj(_h_upper(mmax, z.conjugate()))
    w = -z
    sign = (-1.0) ** np.arange(mmax + 1)
    if z.imag >= 0:
        # z = w e^{i pi}: H1_n(z) = -(-1)^n H2_n(w)
        return -sign * np.conj(_h_upper(mmax, w.conjugate()))
    # z = w e^{-i pi}: H1_n(z) = (-1)^n (H1_n(w) + 2 J_n(w))
    return sign * (_h_upper(mmax, w) + 2.0 * _miller(mmax, w)[: mmax + 1])


def hankel1_pair(m: int, z: complex) -> FunPair:
    """(H^(1)_m(z), H^(1)_m'(z))."""
    m = _check_order(m)
    h = hankel1_sequence(m + 1, z)
    if m == 0:
        return FunPair(complex(h[0]), complex(-h[1]))
    return FunPair(complex(h[m]), complex(0.5 * (h[m - 1] - h[m + 1])))


# ---------------------------------------------------------------- Airy

# Ai(0) and -Ai'(0) to 110 digits; the Maclaurin sums for Ai(-x) cancel heavily
_AI0 = Decimal(
    "0.35502805388781723926006318600418317639797917419917724058332651030081004245012671295717424605404027168844"
)
_AIP0 = Decimal(
    "0.25881940379280679840518356018920396347909113835493458221000181385610277267679028065419640582727538431337"
)


def _airy_parts(x: Decimal):
    """Ai(-x) and d/dx Ai(-x) by their Maclaurin series in the active Decimal context."""
    t = -x
    if t == 0:
        return _AI0, _AIP0
    t3 = t * t * t
    tf, tg = Decimal(1), t
    fs, gs = tf, tg
    fd, gd = Decimal(0), Decimal(1)  # d/dt of the two series
    with localcontext() as ctx:
        resolution = Decimal(10) ** (-ctx.prec)
    k = 0
    while True:
        k += 1
        tf = tf * t3 / ((3 * k - 1) * (3 * k))
        tg = tg * t3 / ((3 * k) * (3 * k + 1))
        fs += tf
        gs += tg
        fd += tf * (3 * k) / t
        gd += tg * (3 * k + 1) / t
        if k > 3 and abs(tf) + abs(tg) < resolution * (abs(fs) + abs(gs)):
            break
    ai = _AI0 * fs - _AIP0 * gs
    return ai, -(_AI0 * fd - _AIP0 * gd)


def _airy_precision(x: float) -> int:
    return 40 + int((2.0 / 3.0) * max(x, 0.0) ** 1.5 / math.log(10)) + 10


def airy_ai_neg(x: float) -> float:
    """Ai(-x) for real x in [0, 40] by extended-precision Maclaurin summation."""
    if not 0 <= x <= 40:
        raise DomainError("airy_ai_neg supports 0 <= x <= 40")
    with localcontext() as ctx:
        ctx.prec = _airy_precision(x)
        ai, _ = _airy_parts(Decimal(x))
        return float(ai)


def _airy_root_guess(j: int) -> float:
    t = 3 * math.pi * (4 * j - 1) / 8
    return t ** (2.0 / 3.0) * (1 + 5 / 48 * t**-2 - 5 / 36 * t**-4 + 77125 / 82944 * t**-6)


@lru_cache(maxsize=None)
def _airy_root(j: int) -> float:
    x0 = _airy_root_guess(j)
    with localcontext() as ctx:
        ctx.prec = _airy_precision(x0 + 1)
        # bracket around the asymptotic guess, then safeguarded Newton
        lo, hi = Decimal(x0) - Decimal("0.3"), Decimal(x0) + Decimal("0.3")
        flo, _ = _airy_parts(lo)
        fhi, _ = _airy_parts(hi)
        if flo * fhi > 0:
            raise ConvergenceError(f"failed to bracket Airy root {j}")
        x = Decimal(x0)
        for _ in range(100):
            fx, dfx = _airy_parts(x)
            if fx == 0:
                break
            if (fx > 0) == (flo > 0):
                lo, flo = x, fx
            else:
                hi = x
            step = fx / dfx
            cand = x - step
            if not (lo < cand < hi):
                cand = (lo + hi) / 2
            if abs(cand - x) < Decimal(10) ** -30:
                x = cand
                break
            x = cand
        return float(x)


def airy_neg_roots(count: int) -> list[float]:
    """The first ``count`` positive zeros a_1 < a_2 < ... of Ai(-x)."""
    if int(count) != count or not 1 <= count <= 50:
        raise DomainError("count must be an integer in 1..50")
    return [_airy_root(j) for j in range(1, int(count) + 1)]


# ---------------------------------------------------------------- Kummer / Whittaker

_KUMMER_TERM_BUDGET = 20000


def _fixed_sum(a: complex, b: int, z: complex, bits: int) -> tuple[complex, float]:
    """Sum 1F1(a;b;z) in fixed point with ``bits`` fractional bits.

    Inputs are converted exactly (doubles are dyadic), so the only error is the
    rounding of each term. Returns the sum and log2 of the largest term.
    """
    parts = [Fraction(v) for v in (a.real, a.imag, z.real, z.imag)]
    den = math.lcm(*(p.denominator for p in parts))
    ar, ai, zr, zi = (int(p * den) for p in parts)
    one = 1 << bits
    tr, ti = one, 0
    sr, si = one, 0
    top = 0
    for n in range(_KUMMER_TERM_BUDGET):
        # t <- t (a+n) z / ((b+n)(n+1))
        pr = ar + n * den
        qr = pr * zr - ai * zi
        qi = pr * zi + ai * zr
        div = den * den * (b + n) * (n + 1)
        tr, ti = _rdiv(tr * qr - ti * qi, div), _rdiv(tr * qi + ti * qr, div)
        sr += tr
        si += ti
        mag = abs(tr) + abs(ti)
        top = max(top, mag.bit_length() - bits)
        decaying = abs(complex(a.real + n, a.imag)) * abs(z) < 0.5 * (b + n) * (n + 1)
        if decaying and mag < 256:
            return complex(sr / one, si / one), top
    raise ConvergenceError("Kummer series exceeded its term budget")


def _rdiv(num: int, den: int) -> int:
    q, r = divmod(num, den)
    return q + (1 if 2 * r >= den else 0)


def _kummer_value(a: complex, b: int, z: complex) -> complex:
    if z == 0:
        return 1.0 + 0j
    bits = 128
    for _ in range(10):
        value, top = _fixed_sum(a, b, z, bits)
        if value != 0:
            need = 72 + top - math.log2(abs(value))
            if bits >= need:
                return value
            bits = int(need) + 64
        else:
            bits *= 2
    raise ConvergenceError("Kummer series lost all precision")


def kummer_1f1(a: complex, b: int, z: complex) -> FunPair:
    """(1F1(a;b;z), d/dz 1F1(a;b;z)) for positive integer b and |z| <= 500."""
    if int(b) != b or b < 1:
        raise DomainError("b must be a positive integer")
    b = int(b)
    a, z = complex(a), complex(z)
    if abs(z) > 500:
        raise DomainError("|z| must not exceed 500")
    value = _kummer_value(a, b, z)
    deriv = (a / b) * _kummer_value(a + 1, b + 1, z)
    return FunPair(value, deriv)


def whittaker_m_pair(kappa: complex, mu: float, z: complex) -> FunPair:
    """(M_{kappa,mu}(z), d/dz M_{kappa,mu}(z)) with 1 + 2 mu a positive integer."""
    b = 1 + 2 * mu
    if abs(b - round(b)) > 1e-12 or round(b) < 1:
        raise DomainError("1 + 2 mu must be a positive integer")
    z = complex(z)
    if z == 0:
        raise DomainError("z must be nonzero")
    kappa = complex(kappa)
    f = kummer_1f1(mu - kappa + 0.5, int(round(b)), z)
    pref = cmath.exp(-z / 2 + (mu + 0.5) * cmath.log(z))
    value = pref * f.value
    deriv = pref * (f.derivative + f.value * (-0.5 + (mu + 0.5) / z))
    return FunPair(value, deriv)
