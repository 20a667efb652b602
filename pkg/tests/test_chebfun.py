import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wgm import chebfun
from wgm.chebfun import ChebSeries
from wgm.errors import DomainError


def test_points_increasing_and_endpoints():
    x = chebfun.points(16, 0.2, 0.9)
    assert x[0] == pytest.approx(0.2) and x[-1] == pytest.approx(0.9)
    assert np.all(np.diff(x) > 0)


def test_fit_reproduces_polynomial_exactly():
    s = chebfun.fit(lambda r: 3 * r**3 - r + 2, 8, -1, 2)
    r = np.linspace(-1, 2, 7)
    assert np.allclose(s(r), 3 * r**3 - r + 2, atol=1e-13)
    assert np.allclose(s.coeffs[4:], 0, atol=1e-13)


def test_known_coefficients():
    # T_2 on [-1, 1]
    s = chebfun.fit(lambda x: 2 * x**2 - 1, 4, -1, 1)
    assert np.allclose(s.coeffs, [0, 0, 1, 0, 0], atol=1e-15)


def test_differentiate_exp():
    s = chebfun.fit(np.exp, 30, 0, 1)
    d = chebfun.differentiate(s)
    r = np.linspace(0, 1, 11)
    assert np.allclose(d(r), np.exp(r), rtol=1e-12)


def test_diff_matrix_matches_coefficient_derivative():
    n = 20
    x = chebfun.points(n)
    f = np.sin(3 * x)
    assert np.allclose(chebfun.diff_matrix(n) @ f, 3 * np.cos(3 * x), atol=1e-9)


def test_tail_ratio():
    s = chebfun.fit(np.cos, 40, 0, 1)
    assert chebfun.tail_ratio(s) < 1e-15
    rough = chebfun.fit(lambda r: np.cos(80 * r), 16, 0, 1)
    assert chebfun.tail_ratio(rough) > 1e-2
    assert chebfun.tail_ratio(ChebSeries(0, 1, np.zeros(5))) == 0.0
    with pytest.raises(DomainError):
        chebfun.tail_ratio(ChebSeries(0, 1, [1, 2, 3]))


def test_series_is_immutable_and_validated():
    s = ChebSeries(0, 1, [1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5
    with pytest.raises(DomainError):
        ChebSeries(1, 0, [1.0])
    with pytest.raises(DomainError):
        ChebSeries(0, 1, [np.nan])
    with pytest.raises(DomainError):
        s(1.5)


def test_scalar_and_array_evaluation():
    s = ChebSeries(0, 1, [1.0, 1.0])
    assert isinstance(s(0.5), complex)
    assert s(np.array([0.0, 1.0])).shape == (2,)


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=12), st.floats(0.0, 1.0))
def test_fit_evaluate_round_trip(coeffs, r):
    s = ChebSeries(0.0, 1.0, coeffs)
    refit = chebfun.fit(s, len(coeffs) - 1, 0.0, 1.0)
    assert np.allclose(refit.coeffs, s.coeffs, atol=1e-12 * (1 + max(map(abs, coeffs))))
    assert abs(refit(r) - s(r)) <= 1e-12 * (1 + sum(map(abs, coeffs)))


def test_evaluation_examples():
    assert ChebSeries(-1, 1, [1.0])(0.77) == 1.0
    assert ChebSeries(-1, 1, [0.0, 1.0])(0.3) == pytest.approx(0.3)
    assert ChebSeries(0, 1, [0.0, 0.0, 1.0])(0.25) == pytest.approx(-0.5)


def test_differentiate_examples():
    assert np.allclose(chebfun.differentiate(ChebSeries(0, 1, [4.0])).coeffs, 0)
    assert chebfun.differentiate(ChebSeries(-1, 1, [0.0, 1.0]))(0.1) == pytest.approx(1.0)
    s = chebfun.fit(lambda r: np.sin(5 * r), 30, 0, 1)
    d2 = chebfun.differentiate(chebfun.differentiate(s))
    r = np.linspace(0, 1, 10)
    assert np.allclose(d2(r), -25 * np.sin(5 * r), atol=1e-9)


def test_tail_ratio_examples():
    assert chebfun.tail_ratio(ChebSeries(0, 1, [1, 0, 0, 0])) == 0.0
    s = ChebSeries(0, 1, [1, 1e-3, 1e-9, 1e-15, 1e-15, 1e-16])
    assert chebfun.tail_ratio(s) == pytest.approx(1e-15)


def test_derivative_against_differences():
    s = chebfun.fit(lambda r: np.exp(2j * r) / (1 + r * r), 40, 0.0, 1.0)
    d = chebfun.differentiate(s)
    h = 1e-6
    for r in (0.1, 0.4, 0.9):
        fd = (s(r + h) - s(r - h)) / (2 * h)
        assert abs(d(r) - fd) <= 1e-6 * abs(d(r))


def test_point_round_trip():
    n = 24
    r = chebfun.points(n, 0.5, 1.0)
    vals = np.cos(7 * r) + 1j * r
    assert np.allclose(chebfun.from_values(vals, 0.5, 1.0)(r), vals, atol=1e-13)
