import numpy as np
import pytest
import scipy.special as sps

from wgm import detsys, oracle, profiles
from wgm.errors import NearHankelZero

GENERIC_K = [3.3 - 0.2j, 7.1 + 0.1j, 11.0, 13.7 - 0.9j, 16.2 - 0.05j, 19.9 + 0.4j, 24.4 - 0.3j, 28.0 - 1.1j,
             33.5 + 0.0j, 41.2 - 0.6j]
PROFILE_NAMES = ["constant-1.5", "affine-1", "parabolic-3", "luneburg", "luneburg-n2-cubic"]


def test_data_scaling_reproduces_bessel_functions():
    p = profiles.catalog("constant-1.5")
    m, k = 10, 16.9 - 0.24j
    fs = detsys.assemble(p, m, k)
    r_in = np.linspace(0.05, 0.5, 7)
    r_out = np.linspace(0.5, 1.0, 7)
    assert np.allclose(fs.f11(r_in), sps.jv(m, 1.5 * k * r_in), rtol=1e-11, atol=1e-15)
    assert np.allclose(fs.f22(r_out), sps.hankel1(m, k * r_out), rtol=1e-11)


def test_determinant_equals_k_times_closed_form():
    p = profiles.catalog("constant-1.5")
    for k in (5.0 - 0.3j, 16.9 - 0.24j, 30.0 + 1.0j):
        ev = detsys.NumericDeterminant(p, 10)(k)
        d = oracle.det_pw_constant(10, k, 0.5, 1.5, 1.0)
        assert ev.det == pytest.approx(k * d.value, rel=1e-10)
        assert ev.ddet == pytest.approx(d.value + k * d.derivative, rel=1e-9)


def test_matrix_determinant_identity():
    ev = detsys.NumericDeterminant(profiles.catalog("affine-2"), 7)(12.0 - 0.4j)
    t = ev.matrix
    assert t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0] == pytest.approx(ev.det, rel=1e-12)
    assert ev.fro_norm == pytest.approx(np.linalg.norm(t), rel=1e-14)
    assert ev.rel_residual == pytest.approx(abs(ev.det) / ev.fro_norm, rel=1e-14)


@pytest.mark.parametrize("name", PROFILE_NAMES)
def test_k_derivative_matches_finite_difference(name):
    prov = detsys.NumericDeterminant(profiles.catalog(name), 9)
    h = 1e-5
    for k in GENERIC_K:
        ev = prov(k)
        fd = (prov(k + h).det - prov(k - h).det) / (2 * h)
        assert abs(ev.ddet - fd) <= 1e-5 * abs(ev.ddet)


def test_dt_consistent_with_ddet():
    ev = detsys.NumericDeterminant(profiles.catalog("luneburg"), 12)(21.0 - 0.3j)
    da, db, dc, dd = ev.dt
    ddet = da * ev.t22 + ev.t11 * dd - db * ev.t21 - ev.t12 * dc
    assert ddet == pytest.approx(ev.ddet, rel=1e-10)


def test_unit_scaling_is_proportional():
    p = profiles.catalog("constant-1.5")
    m, k = 10, 17.0 - 0.2j
    sd = detsys.scaling_data(p, m, k)
    e1 = detsys.determinant(detsys.assemble(p, m, k))
    e2 = detsys.determinant(detsys.assemble(p, m, k, scaling="unit"))
    assert e2.det * sd.h11 * sd.h22 == pytest.approx(e1.det, rel=1e-10)


def test_dtn_multiplier_closed_form():
    m, k = 5, 8.0 - 0.5j
    d = detsys.dtn_multiplier(m, k, 1.0)
    assert d.beta == pytest.approx(k * sps.h1vp(m, k) / sps.hankel1(m, k), rel=1e-13)
    h = 1e-6
    fd = (detsys.dtn_multiplier(m, k + h, 1.0).beta - detsys.dtn_multiplier(m, k - h, 1.0).beta) / (2 * h)
    assert d.dbeta == pytest.approx(fd, rel=1e-8)


def test_near_hankel_zero_guard(monkeypatch):
    from wgm.specfun import FunPair

    monkeypatch.setattr(detsys, "hankel1_pair", lambda m, z: FunPair(0j, 1.0 + 0j))
    with pytest.raises(NearHankelZero):
        detsys.dtn_multiplier(3, 4.0, 1.0)


def test_without_derivative():
    fs = detsys.assemble(profiles.catalog("luneburg"), 4, 9.0, derivative=False)
    ev = detsys.determinant(fs)
    assert fs.df11 is None and np.isnan(ev.ddet)
    assert np.isfinite(ev.det)


PC = profiles.catalog("constant-1.5")


def test_scaling_data_examples():
    sd = detsys.scaling_data(PC, 10, 17.0)
    assert np.isfinite(sd.h11) and sd.h11 != 0
    assert np.isfinite(sd.h22) and sd.h22 != 0
    k, h = 17.0 - 0.3j, 1e-6
    for name, dname in (("h11", "dh11"), ("h22", "dh22")):
        fd = (getattr(detsys.scaling_data(PC, 10, k + h), name) - getattr(detsys.scaling_data(PC, 10, k - h), name)) / (2 * h)
        assert getattr(detsys.scaling_data(PC, 10, k), dname) == pytest.approx(fd, rel=1e-6)


def test_dtn_examples():
    assert detsys.dtn_multiplier(0, 200.0, 1.0).beta == pytest.approx(200j, rel=1e-2)
    d = detsys.dtn_multiplier(10, 16.9232 - 0.2395j, 1.0)
    assert np.isfinite(d.beta) and np.isfinite(d.dbeta)


def test_values_at_table_root():
    # the validation table prints |D| = 8.43e-11 and |D'| = 1.19e-01 at this iterate
    k = 16.923201860583823 - 0.23954559046216217j
    ev = detsys.NumericDeterminant(PC, 10)(k)
    assert abs(ev.det / k) == pytest.approx(8.43e-11, abs=5e-14)
    assert abs((ev.ddet - ev.det / k) / k) == pytest.approx(0.119, abs=5e-4)
    assert ev.rel_residual <= 1e-9


def test_robin_identities_exact():
    fs = detsys.assemble(profiles.catalog("luneburg"), 10, 18.6 - 0.6j)
    k, sd = fs.k, fs.scaling
    assert fs.f11pxi == 1j * k * fs.n1xi * fs.f11xi + sd.h11
    assert fs.f22pxi == -1j * k * fs.n2xi * fs.f22xi - sd.h22
    # the spectral derivative agrees with the Robin-defined trace
    d = detsys.chebfun.differentiate(fs.f11)(0.5)
    assert d == pytest.approx(fs.f11pxi, rel=1e-10)


def test_trace_derivative_by_differences():
    p = profiles.catalog("parabolic-2")
    k, h = 14.0 - 0.2j, 1e-6
    fs = detsys.assemble(p, 8, k)
    fp = detsys.assemble(p, 8, k + h)
    fm = detsys.assemble(p, 8, k - h)
    assert fs.d_f11xi == pytest.approx((fp.f11xi - fm.f11xi) / (2 * h), rel=1e-5)
    assert fs.d_f22xi == pytest.approx((fp.f22xi - fm.f22xi) / (2 * h), rel=1e-5)


def test_converged_residual_small():
    from wgm import newton

    res = newton.solve(detsys.NumericDeterminant(PC, 10), 40 / 3)
    assert res.final.rel_residual <= 1e-8


def test_scaling_relationship_random_fourth_quadrant():
    rng = np.random.default_rng(7)
    for _ in range(20):
        k = complex(rng.uniform(2, 40), -rng.uniform(0, 1.5))
        sd = detsys.scaling_data(PC, 10, k)
        d1 = detsys.determinant(detsys.assemble(PC, 10, k)).det
        d2 = detsys.determinant(detsys.assemble(PC, 10, k, scaling="unit")).det
        assert d2 == pytest.approx(d1 / (sd.h11 * sd.h22), rel=1e-9)
