import cmath
import math

import mpmath
import numpy as np
import pytest
import scipy.special as sps
from hypothesis import assume, given
from hypothesis import strategies as st

from wgm import specfun
from wgm.errors import DomainError

# frozen reference values (30-digit mpmath)
FROZEN_J = [
    (5, 3 + 2j, -0.09885798984869187 + 0.08592466256292043j),
    (60, 88 - 1e-3j, -0.02107089005322315 + 7.088153814866569e-05j),
]
FROZEN_H = [
    (5, 3 + 2j, -0.4154440288615834 + 0.2739255568995702j),
    (40, 30 - 1j, 24.381032268262583 - 21.090033954082262j),
]
AIRY_ROOTS = {1: 2.338107410459767, 2: 4.08794944413097, 10: 12.828776752865757, 50: 38.02100867725525}


@pytest.mark.parametrize("m,z,expected", FROZEN_J)
def test_bessel_j_frozen(m, z, expected):
    assert abs(specfun.bessel_j_pair(m, z).value - expected) <= 1e-13 * abs(expected)


@pytest.mark.parametrize("m,z,expected", FROZEN_H)
def test_hankel_frozen(m, z, expected):
    assert abs(specfun.hankel1_pair(m, z).value - expected) <= 1e-13 * abs(expected)


finite_z = st.complex_numbers(min_magnitude=0.05, max_magnitude=150, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z.imag) <= 20
)


@given(m=st.integers(0, 120), z=finite_z)
def test_j_matches_scipy(m, z):
    got = specfun.bessel_j_pair(m, z)
    ref = sps.jv(m, z)
    refp = sps.jvp(m, z)
    # scipy flushes deep-underflow orders to zero
    assume(abs(ref) > 1e-280)
    scale = abs(ref) + abs(refp)
    assert abs(got.value - ref) <= 1e-11 * scale
    assert abs(got.derivative - refp) <= 1e-11 * scale


@given(m=st.integers(0, 60), z=finite_z)
def test_h_matches_scipy(m, z):
    got = specfun.hankel1_pair(m, z)
    ref = sps.hankel1(m, z)
    assert abs(got.value - ref) <= 1e-11 * abs(ref)


@given(
    m=st.integers(0, 60),
    x=st.floats(1.0, 150.0),
    y=st.floats(-2.0, 0.0),
)
def test_wronskian(m, x, y):
    z = complex(x, y)
    j = specfun.bessel_j_pair(m, z)
    h = specfun.hankel1_pair(m, z)
    w = j.value * h.derivative - j.derivative * h.value
    assert abs(w - 2j / (math.pi * z)) <= 1e-12 * abs(2 / (math.pi * z)) * max(1.0, abs(j.value * h.derivative))


def test_sequence_agrees_with_pair():
    z = 12.5 - 0.3j
    js = specfun.bessel_j_sequence(30, z)
    hs = specfun.hankel1_sequence(30, z)
    for m in (0, 7, 30):
        assert js[m] == pytest.approx(specfun.bessel_j_pair(m, z).value, rel=1e-14)
        assert hs[m] == pytest.approx(specfun.hankel1_pair(m, z).value, rel=1e-14)


def test_reflection_left_half_plane():
    z = -4.0 + 1.5j
    assert specfun.hankel1_pair(3, z).value == pytest.approx(sps.hankel1(3, z), rel=1e-12)
    assert specfun.bessel_j_pair(3, z).value == pytest.approx(sps.jv(3, z), rel=1e-12)


def test_order_and_argument_limits():
    with pytest.raises(DomainError):
        specfun.bessel_j_pair(-1, 1.0)
    with pytest.raises(DomainError):
        specfun.hankel1_pair(specfun.MAX_ORDER + 1, 1.0)
    with pytest.raises(DomainError):
        specfun.hankel1_pair(2, 0.0)
    with pytest.raises(DomainError):
        specfun.bessel_j_pair(2, complex(1, 2e4))


def test_j_at_origin():
    assert specfun.bessel_j_pair(0, 0.0).value == 1.0
    assert specfun.bessel_j_pair(1, 0.0).derivative == pytest.approx(0.5)
    assert specfun.bessel_j_pair(4, 0.0).value == 0.0


@pytest.mark.parametrize("j,expected", AIRY_ROOTS.items())
def test_airy_roots_frozen(j, expected):
    assert specfun.airy_neg_roots(50)[j - 1] == pytest.approx(expected, abs=1e-13)


def test_airy_roots_are_zeros():
    for a in specfun.airy_neg_roots(20):
        assert abs(specfun.airy_ai_neg(a)) < 1e-14
    assert specfun.airy_ai_neg(0.0) == pytest.approx(0.3550280538878172, rel=1e-15)


def test_airy_count_limits():
    with pytest.raises(DomainError):
        specfun.airy_neg_roots(0)
    with pytest.raises(DomainError):
        specfun.airy_neg_roots(51)


def test_kummer_frozen():
    got = specfun.kummer_1f1(3.5 - 0.2j, 11, 20 - 1j).value
    expected = 15940.912188993636 - 26186.621151096144j
    assert abs(got - expected) <= 1e-13 * abs(expected)


@given(
    a=st.complex_numbers(max_magnitude=80, allow_nan=False, allow_infinity=False),
    b=st.integers(1, 121),
    z=st.complex_numbers(max_magnitude=150, allow_nan=False, allow_infinity=False),
)
def test_kummer_matches_mpmath(a, b, z):
    got = specfun.kummer_1f1(a, b, z)
    ref = complex(mpmath.hyp1f1(a, b, z))
    refp = complex(a / b * mpmath.hyp1f1(a + 1, b + 1, z))
    assert abs(got.value - ref) <= 1e-12 * abs(ref) + 1e-300
    assert abs(got.derivative - refp) <= 1e-12 * abs(refp) + 1e-300


def test_whittaker_frozen():
    got = specfun.whittaker_m_pair(9.3 - 0.3j, 5.0, 4.6 - 0.15j)
    expected = 41.883148352562 + 10.958757592842383j
    assert abs(got.value - expected) <= 1e-13 * abs(expected)
    with mpmath.workdps(30):
        d = complex(mpmath.diff(lambda w: mpmath.whitm(9.3 - 0.3j, 5, w), 4.6 - 0.15j))
    assert abs(got.derivative - d) <= 1e-12 * abs(d)


def test_whittaker_small_argument_behaviour():
    # M_{kappa,mu}(z) ~ z^{mu + 1/2} near the origin
    z = 1e-6 + 0j
    got = specfun.whittaker_m_pair(2.0, 1.5, z).value
    assert got == pytest.approx(cmath.exp(2.0 * cmath.log(z)), rel=1e-5)


@given(m=st.integers(1, 40), x=st.floats(0.5, 60))
def test_j_real_axis_is_real(m, x):
    v = specfun.bessel_j_pair(m, x).value
    assert abs(v.imag) <= 1e-14 * max(abs(v), 1e-300) or abs(v.imag) < 1e-300


@given(m=st.integers(0, 40), z=finite_z.filter(lambda z: z.imag >= 0))
def test_hankel_recurrence(m, z):
    hs = specfun.hankel1_sequence(m + 2, z)
    lhs = hs[m] + hs[m + 2]
    rhs = 2 * (m + 1) / z * hs[m + 1]
    assert abs(lhs - rhs) <= 1e-10 * (abs(hs[m]) + abs(hs[m + 2]) + abs(rhs))


def test_small_frozen_values():
    j = specfun.bessel_j_pair(0, 1 + 0j)
    assert j.value == pytest.approx(0.7651976865579666, abs=1e-15)
    assert j.derivative == pytest.approx(-0.4400505857449335, abs=1e-15)
    h = specfun.hankel1_pair(0, 1 + 0j)
    assert h.value == pytest.approx(0.7651976865579666 + 0.0882569642156769j, rel=1e-13)
    assert h.derivative == pytest.approx(-0.4400505857449335 + 0.7812128213002887j, rel=1e-13)
    z = specfun.bessel_j_pair(3, 0.0)
    assert z.value == 0 and z.derivative == 0


def test_hankel_nonzero_at_resonance():
    assert abs(specfun.hankel1_pair(10, 16.9232 - 0.2395j).value) > 1e-3


@pytest.mark.parametrize("m,z", [(10, 8.4615 - 0.1198j), (0, 0.7 + 0.1j), (25, 3.0 - 1.0j), (60, 140.0 - 2.0j)])
def test_bessel_ode_residual(m, z):
    h = min(1e-4 * abs(z), 1e-3)
    for fun in (specfun.bessel_j_pair, specfun.hankel1_pair):
        f = fun(m, z)
        d2 = (fun(m, z + h).derivative - fun(m, z - h).derivative) / (2 * h)
        res = z * z * d2 + z * f.derivative + (z * z - m * m) * f.value
        scale = abs(z * z * d2) + abs(z * f.derivative) + abs((z * z - m * m) * f.value)
        assert abs(res) <= 1e-6 * scale


@given(m=st.integers(1, 59), z=finite_z)
def test_bessel_j_recurrence(m, z):
    js = specfun.bessel_j_sequence(m + 1, z)
    lhs = js[m - 1] + js[m + 1]
    rhs = 2 * m / z * js[m]
    assert abs(lhs - rhs) <= 1e-11 * (abs(js[m - 1]) + abs(js[m + 1]) + abs(rhs))


def test_wronskian_grid():
    xs = np.linspace(1, 150, 40)
    ys = np.linspace(-2, 0, 25)
    worst = 0.0
    for m in (0, 10, 30, 60):
        for x in xs[::3]:
            for y in ys[::3]:
                z = complex(x, y)
                j = specfun.bessel_j_pair(m, z)
                h = specfun.hankel1_pair(m, z)
                w = j.value * h.derivative - j.derivative * h.value
                worst = max(worst, abs(w - 2j / (math.pi * z)) / abs(2 / (math.pi * z)))
    assert worst <= 1e-12


def test_airy_small_counts():
    assert specfun.airy_neg_roots(1) == pytest.approx([2.338107410459767], abs=1e-14)
    a = specfun.airy_neg_roots(3)
    assert a[1] == pytest.approx(4.087949444130970, abs=1e-14)
    assert a[0] < a[1] < a[2]


def test_kummer_closed_forms():
    z = 2.5 - 1.5j
    origin = specfun.kummer_1f1(3.0 + 1.0j, 4, 0.0)
    assert origin.value == 1 and origin.derivative == pytest.approx((3.0 + 1.0j) / 4)
    assert specfun.kummer_1f1(1.0, 2, z).value == pytest.approx((cmath.exp(z) - 1) / z, rel=1e-14)


def test_kummer_cancellation_case():
    a, b, z = -4.5 + 0.3j, 11, 20 - 3j
    with mpmath.workdps(60):
        ref = complex(mpmath.hyp1f1(a, b, z))
    assert specfun.kummer_1f1(a, b, z).value == pytest.approx(ref, rel=1e-13)


def test_whittaker_closed_form():
    z = 1.3 - 0.7j
    assert specfun.whittaker_m_pair(0.0, 0.5, z).value == pytest.approx(2 * cmath.sinh(z / 2), rel=1e-14)


@pytest.mark.parametrize("kappa,mu,z", [(9.3 - 0.3j, 5.0, 4.6 - 0.15j), (2.0, 0.5, 1.1), (33.6 - 0.004j, 20.0, 16.0)])
def test_whittaker_ode(kappa, mu, z):
    h = 1e-4 * abs(z)
    w = specfun.whittaker_m_pair(kappa, mu, z)
    d2 = (specfun.whittaker_m_pair(kappa, mu, z + h).derivative - specfun.whittaker_m_pair(kappa, mu, z - h).derivative) / (2 * h)
    terms = [d2, (0.25 - mu * mu) / (z * z) * w.value, kappa / z * w.value, -w.value / 4]
    assert abs(sum(terms)) <= 1e-6 * sum(abs(t) for t in terms)


def test_whittaker_at_luneburg_resonance():
    k = 18.589 - 0.615j
    w = specfun.whittaker_m_pair(k / 2, 5.0, k * 0.25)
    assert np.isfinite(w.value) and abs(w.value) > 0


@pytest.mark.parametrize("z", [0.5, 0.8 + 0.3j, 1.2j, 1.45 + 0.1j, 0.5 - 0.2j])
def test_small_argument_hankel(z):
    # the quadrature branch loses digits near the origin; the series takes over there
    for m in (0, 1, 29):
        got = specfun.hankel1_pair(m, z).value
        ref = complex(mpmath.hankel1(m, z))
        assert abs(got - ref) <= 1e-13 * abs(ref)
