import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frachardy.constants import (
    BetaExponent,
    InadmissibleExponentError,
    SPParams,
    beta_star,
    c_nsp,
    ik_alpha,
    lambda_beta,
    lambda_eps,
    lambda_monotonicity_scan,
    lambda_sp,
    omega,
    sharp_hardy_constant,
)

sp_pairs = st.tuples(st.floats(0.1, 0.9), st.sampled_from([1.5, 2.0, 2.5, 3.0, 4.0]))


@pytest.mark.parametrize("k, expected", [(0, 1.0), (1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_omega(k, expected):
    assert omega(k) == pytest.approx(expected, rel=1e-15)


def test_ik_alpha_closed_forms(oracle):
    assert ik_alpha(1, 1.0) == pytest.approx(0.5, rel=1e-12)
    assert ik_alpha(0, 0.0) == pytest.approx(math.pi / 2, rel=1e-12)
    assert ik_alpha(2, 1.0) == pytest.approx(oracle["I_2_1"], rel=1e-10)


def test_c_nsp(oracle):
    assert c_nsp(1, SPParams(0.3, 3)) == 1.0
    assert c_nsp(3, SPParams(0.5, 2)) == pytest.approx(math.pi, rel=1e-12)
    assert c_nsp(2, SPParams(0.4, 3)) == pytest.approx(oracle["C_2_s04_p3"], rel=1e-10)


def test_lambda_sp_values(oracle):
    assert lambda_sp(SPParams(0.5, 2)) == pytest.approx(2.0, abs=1e-12)
    assert lambda_sp(SPParams(0.75, 2)) == pytest.approx(oracle["Lambda_075_2"], rel=1e-10)
    assert lambda_sp(SPParams(0.3, 3)) == pytest.approx(oracle["Lambda_03_3"], rel=1e-10)
    b0 = SPParams(0.75, 2).beta_peak
    assert lambda_beta(SPParams(0.75, 2), b0) == pytest.approx(oracle["Lambda_075_2"], rel=1e-9)


@given(sp_pairs)
def test_lambda_sp_exceeds_two_over_sp(sp):
    params = SPParams(*sp)
    if abs(params.sp - 1) > 1e-3:
        assert lambda_sp(params) > 2 / params.sp


def test_lambda_beta_against_direct_quadrature(oracle):
    for s, p, b, ref in oracle["lambda_beta_samples"]:
        assert lambda_beta(SPParams(s, p), b) == pytest.approx(ref, rel=1e-9)


def test_lambda_beta_known_points():
    params = SPParams(0.4, 3)
    assert lambda_beta(params, 0.0) == pytest.approx(2 / params.sp, rel=1e-12)
    assert abs(lambda_beta(params, params.s)) < 1e-9
    assert lambda_beta(params, BetaExponent(0.1)) == lambda_beta(params, 0.1)


def test_lambda_beta_rejects_inadmissible():
    params = SPParams(0.5, 2)
    with pytest.raises(InadmissibleExponentError):
        lambda_beta(params, params.beta_max)
    with pytest.raises(InadmissibleExponentError):
        lambda_beta(params, params.beta_min - 0.1)


def test_lambda_eps(oracle):
    params = SPParams(0.5, 2)
    assert lambda_eps(params, 0.0, 0.3) == pytest.approx(2.0, rel=1e-12)
    direct = lambda_eps(params, 0.25, 0.01, form="direct")
    folded = lambda_eps(params, 0.25, 0.01, form="folded")
    assert direct == pytest.approx(oracle["lambda_eps_05_2_025_001"], rel=1e-9)
    assert folded == pytest.approx(direct, rel=1e-8)
    q = SPParams(0.75, 2)
    lam = lambda_sp(q)
    assert abs(lambda_eps(q, q.beta_peak, 1e-4) - lam) < abs(lambda_eps(q, q.beta_peak, 1e-3) - lam)


def test_beta_star(oracle):
    assert beta_star(SPParams(0.3, 2)) == pytest.approx(-0.7, abs=1e-7)
    assert beta_star(SPParams(1 / 3, 3)) == pytest.approx(-1 / 3, abs=1e-7)
    assert beta_star(SPParams(0.6, 3)) == pytest.approx(oracle["beta_star_06_3"], abs=1e-8)


@given(st.floats(0.1, 0.9), st.floats(-0.9, 0.9))
def test_p2_symmetry(s, u):
    params = SPParams(s, 2.0)
    lo, hi = params.beta_min, params.beta_max
    b = lo + (hi - lo) * (0.5 + 0.45 * u)
    assert lambda_beta(params, 2 * s - 1 - b) == pytest.approx(lambda_beta(params, b), rel=1e-8, abs=1e-9)


def test_sharp_constant_reports(oracle):
    r = sharp_hardy_constant(1, SPParams(0.5, 2), "half_space")
    assert r.value == pytest.approx(2.0, abs=1e-12) and not r.attained
    r = sharp_hardy_constant(3, SPParams(0.5, 2), "generic_convex")
    assert r.value == pytest.approx(2 * math.pi, rel=1e-10)
    r = sharp_hardy_constant(1, SPParams(0.3, 3), "generic_convex")
    assert r.value is None
    assert r.lo == pytest.approx(2 / 0.9, rel=1e-12)
    assert r.hi == pytest.approx(oracle["Lambda_03_3"], rel=1e-10)
    assert r.to_dict()["bracket"] == [r.lo, r.hi]


def test_monotonicity_scan_shapes():
    scan = lambda_monotonicity_scan(SPParams(0.5, 2), 32)
    assert scan.ok
    np.testing.assert_allclose(scan.values, scan.values[::-1], rtol=1e-8)
    scan = lambda_monotonicity_scan(SPParams(0.6, 3), 48)
    assert scan.ok
    assert abs(scan.argmax_beta - 0.8 / 3) <= (scan.betas[1] - scan.betas[0])
    scan = lambda_monotonicity_scan(SPParams(0.7, 2), 32)
    assert scan.ok


def test_params_validation():
    with pytest.raises(ValueError):
        SPParams(1.0, 2)
    with pytest.raises(ValueError):
        SPParams(0.5, 1.0)
