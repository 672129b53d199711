import math

import numpy as np
import pytest

from frachardy.constants import SPParams, lambda_sp
from frachardy.geometry import HalfLine, Interval
from frachardy.rayleigh import (
    CutoffPsi,
    InadmissibleScheduleError,
    InfiniteSeminormError,
    Mesh1D,
    MeshedFunction,
    Profile1D,
    assemble_forms,
    besov_bound_check,
    discrete_hardy_upper_bound,
    dyda_weight_check,
    gagliardo_fullline,
    gagliardo_regional,
    hardy_quotient,
    hidden_convexity_check,
    power_self_constant,
    product_rule_bound_check,
    random_meshed_functions,
    seminorm_split_check,
    sharpness_scan,
    truncated_power_bound,
    weighted_pnorm,
)


# ---- cutoff and profiles


def test_cutoff_shape():
    psi = CutoffPsi()
    x = np.linspace(-1, 3, 2001)
    y = psi(x)
    assert np.all((y >= 0) & (y <= 1))
    assert np.all(y[x <= 1] == 1) and np.all(y[x >= 2] == 0)
    assert psi.lipschitz == pytest.approx(15 / 8)
    assert np.max(np.abs(psi.derivative(x))) == pytest.approx(15 / 8, rel=1e-5)


def test_profile_zero_outside_and_round_trip():
    u = Profile1D.hat(0.0, 2.0, peak=0.5)
    assert u(-1.0) == 0.0 and u(2.5) == 0.0
    assert u(0.5) == pytest.approx(1.0)
    v = Profile1D.from_dict(u.to_dict())
    x = np.linspace(-0.5, 2.5, 31)
    np.testing.assert_array_equal(u(x), v(x))
    assert Profile1D.power_cutoff(0.3).check_exponents()


def test_mesh_grading_and_io(tmp_path):
    mesh = Mesh1D.graded(0.0, 1.0, 16, 3.0)
    x = np.asarray(mesh.nodes)
    assert x[0] == 0.0 and x[-1] == 1.0 and np.all(np.diff(x) > 0)
    np.testing.assert_allclose(x, 1.0 - x[::-1], atol=1e-15)
    assert x[1] == pytest.approx(0.5 * (1 / 8) ** 3)
    mesh.save(tmp_path / "m.json")
    assert Mesh1D.load(tmp_path / "m.json") == mesh
    with pytest.raises(ValueError):
        Mesh1D((0.0, 0.5, 0.4, 1.0))


# ---- seminorms against independent oracles


def test_hat_fullline(oracle):
    hat = Profile1D.hat()
    assert gagliardo_fullline(hat, SPParams(0.5, 2)) == pytest.approx(oracle["hat_fullline_05_2"], rel=1e-9)
    assert gagliardo_fullline(hat, SPParams(0.3, 3)) == pytest.approx(oracle["hat_fullline_03_3"], rel=1e-8)


def test_trial_function_quotient(oracle):
    params = SPParams(0.5, 2)
    phi = Profile1D.power_cutoff(0.3)
    ref = oracle["phi_05_2_03"]
    assert gagliardo_fullline(phi, params) == pytest.approx(ref["numerator"], rel=1e-8)
    assert weighted_pnorm(phi, HalfLine(), params) == pytest.approx(ref["denominator"], rel=1e-10)


def test_indicator_fullline_closed_form():
    # [1_(0,1)]^p = 2 * 2 * int_0^1 t^(-sp) dt / sp for sp < 1
    params = SPParams(0.3, 2)
    expected = 4.0 / (params.sp * (1.0 - params.sp))
    assert gagliardo_fullline(Profile1D.indicator(), params) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("s, p", [(0.5, 2), (0.6, 2), (0.4, 3)])
def test_indicator_diverges(s, p):
    with pytest.raises(InfiniteSeminormError):
        gagliardo_fullline(Profile1D.indicator(), SPParams(s, p))


def test_constant_has_zero_regional_seminorm():
    assert gagliardo_regional(Profile1D.indicator(0, 3), (0.5, 2.5), SPParams(0.4, 2)) == 0.0


def test_power_self_constant_matches_regional():
    params = SPParams(0.4, 3)
    beta, M = 0.2, 1.7
    gam = beta * params.p - params.sp + 1
    A = power_self_constant(params, beta)
    reg = gagliardo_regional(Profile1D.power(beta, M), (0, M), params)
    assert reg == pytest.approx(2 * A * M ** gam / gam, rel=1e-8)


@pytest.mark.parametrize("s, p, beta", [(0.5, 2, 0.25), (0.7, 2, 0.3), (0.4, 3, 0.2)])
def test_truncated_power_bound(s, p, beta):
    exact, bound = truncated_power_bound(SPParams(s, p), beta, 2.0)
    assert exact <= bound


def test_truncated_power_limsup():
    params = SPParams(0.75, 2)
    b0 = (params.sp - 1) / params.p
    limit = 2 * power_self_constant(params, b0)
    assert limit + 2 / params.sp == pytest.approx(lambda_sp(params), rel=1e-10)
    scaled = []
    for d in (0.03, 0.01, 0.003):
        beta = b0 + d
        gam = beta * params.p - params.sp + 1
        exact, _ = truncated_power_bound(params, beta, 1.0)
        scaled.append(gam * exact)
    assert all(b < a for a, b in zip(scaled, scaled[1:]))
    assert limit <= scaled[-1] <= limit * 1.05


# ---- weighted norms and quotients


def test_weighted_norm_of_power():
    params = SPParams(0.5, 3)
    beta = 0.4
    expected = 1 / (beta * params.p - params.sp + 1)
    assert weighted_pnorm(Profile1D.power(beta, 1.0), HalfLine(), params) == pytest.approx(expected, rel=1e-10)


def test_weighted_norm_of_indicator_on_interval():
    params = SPParams(0.3, 2)
    expected = 2 ** params.sp / (1 - params.sp)
    assert weighted_pnorm(Profile1D.indicator(), Interval(0, 1), params) == pytest.approx(expected, rel=1e-10)


def test_weighted_norm_rejects_mismatched_support():
    with pytest.raises(ValueError):
        weighted_pnorm(Profile1D.hat(-1, 1), HalfLine(), SPParams(0.5, 2))


@pytest.mark.parametrize("mu", [0.5, 3.0])
@pytest.mark.parametrize("s, p", [(0.5, 2), (0.3, 3)])
def test_quotient_scaling_invariance(mu, s, p):
    params = SPParams(s, p)
    u = Profile1D.bump(0.0, 1.0)
    base = hardy_quotient(u, Interval(0, 1), params)
    scaled = hardy_quotient(u.scaled(mu), Interval(0, mu), params)
    assert scaled == pytest.approx(base, rel=1e-6)


def test_quotient_above_constant_on_interval():
    params = SPParams(0.5, 2)
    for u in (Profile1D.hat(), Profile1D.bump(), Profile1D.hat(peak=0.1)):
        assert hardy_quotient(u, Interval(0, 1), params) >= 2 - 1e-3


def test_meshed_quotient_matches_panel_route():
    mesh = Mesh1D.graded(0.0, 1.0, 12, 2.0)
    f = random_meshed_functions(mesh, 1, np.random.default_rng(5))[0]
    params = SPParams(0.4, 2)
    via_matrices = hardy_quotient(f, Interval(0, 1), params)
    via_panels = hardy_quotient(f.profile(), Interval(0, 1), params)
    assert via_matrices == pytest.approx(via_panels, rel=1e-8)


# ---- split identity


@pytest.mark.parametrize("u, s, p", [
    (Profile1D.hat(1, 2), 0.5, 2),
    (Profile1D.bump(1, 3), 0.3, 3),
    (Profile1D.power_cutoff(0.4), 0.6, 2),
])
def test_split_identity(u, s, p):
    rep = seminorm_split_check(u, SPParams(s, p))
    assert rep.relative < 1e-6


# ---- sharpness


def test_sharpness_scan_approaches_constant():
    params = SPParams(0.5, 2)
    rows = sharpness_scan(params, [0.3, 0.1, 0.03, 0.01])
    q = [r.quotient for r in rows]
    assert all(b < a for a, b in zip(q, q[1:]))
    assert all(v >= 2 * (1 - 1e-3) for v in q)
    assert q[-1] <= 2 * 1.15
    d = [r.denominator for r in rows]
    assert all(b > a for a, b in zip(d, d[1:]))


def test_sharpness_rejects_bad_schedules():
    params = SPParams(0.5, 2)
    with pytest.raises(InadmissibleScheduleError):
        sharpness_scan(params, [0.1, 0.0])
    with pytest.raises(InadmissibleScheduleError):
        sharpness_scan(params, [0.1, 0.2])


# ---- hidden convexity and inequalities


def test_hidden_convexity():
    params = SPParams(0.4, 3)
    u = Profile1D.bump(0, 1)
    assert abs(hidden_convexity_check(u, u, params)) < 1e-9
    v = Profile1D.bump(0, 1, height=2.0)
    assert abs(hidden_convexity_check(u, v, params)) < 1e-6 * gagliardo_fullline(v, params)
    w = Profile1D.bump(0.5, 2.0)
    assert hidden_convexity_check(u, w, params) > 1e-3


@pytest.mark.parametrize("s, p", [(0.5, 2), (0.3, 3)])
def test_besov_bound(s, p):
    params = SPParams(s, p)
    phi = Profile1D.bump(0, 1)
    assert besov_bound_check(phi, params, grid=41)
    big = Profile1D.bump(0, 1, height=10.0)
    assert besov_bound_check(big, params, grid=41)
    for mu in (0.2, 5.0):
        assert besov_bound_check(phi.scaled(mu), params, grid=41)


def test_product_rule_bounds():
    params = SPParams(0.5, 2)
    assert product_rule_bound_check(Profile1D.power(0.25, 2.0), CutoffPsi(), params)
    assert product_rule_bound_check(Profile1D.hat(0, 2), CutoffPsi(), params)
    assert product_rule_bound_check(Profile1D.bump(0, 2), CutoffPsi(0.5, 2.0, order=1), params)


# ---- finite elements


def test_fem_matrices_against_oracle(oracle):
    ref = oracle["fem_small"]
    K, Mw = assemble_forms(Mesh1D(tuple(ref["nodes"])), s=ref["s"])
    np.testing.assert_allclose(K, ref["K"], rtol=1e-10)
    np.testing.assert_allclose(Mw, ref["Mw"], rtol=1e-10)


def test_fem_structure():
    K, Mw = assemble_forms(Mesh1D.graded(0, 1, 10, 2.0), s=0.7)
    assert np.allclose(K, K.T, atol=1e-12) and np.allclose(Mw, Mw.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(K) > 0) and np.all(np.linalg.eigvalsh(Mw) > 0)


def test_single_hat_stiffness_matches_seminorm():
    K, _ = assemble_forms(Mesh1D((0.0, 0.5, 1.0)), s=0.5)
    assert K[0, 0] == pytest.approx(gagliardo_fullline(Profile1D.hat(), SPParams(0.5, 2)), rel=1e-12)


def test_discrete_eigenvalues_decrease():
    meshes = [Mesh1D.graded(0, 1, n, 4.0) for n in (16, 32, 64)]
    lam = discrete_hardy_upper_bound(meshes, Interval(0, 1), 0.5)
    assert all(v >= 2 - 1e-3 for v in lam)
    assert all(b <= a + 1e-9 for a, b in zip(lam, lam[1:]))


def test_dyda_gap(oracle):
    assert dyda_weight_check(Profile1D.hat(), 0.5) == pytest.approx(oracle["dyda_hat_05"], rel=1e-8)
    mesh = Mesh1D((0.0, 0.5, 1.0))
    assert dyda_weight_check(MeshedFunction(mesh, (1.0,)), 0.5) == pytest.approx(oracle["dyda_hat_05"], rel=1e-8)
    assert dyda_weight_check(MeshedFunction(mesh, (0.0,)), 0.5) == 0.0


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_dyda_random(s):
    mesh = Mesh1D.graded(0, 1, 24, Mesh1D.default_grading(s))
    K, _ = assemble_forms(mesh, s=s)
    for f in random_meshed_functions(mesh, 50, np.random.default_rng(int(100 * s))):
        c = np.asarray(f.values)
        assert dyda_weight_check(f, s) >= -1e-6 * (c @ K @ c)


def test_dyda_weight_dominates():
    # pointwise 1/(t-a) + 1/(b-t) >= 1/d(t), so the Dyda integral dominates
    mesh = Mesh1D.graded(0, 1, 16, 2.0)
    s = 0.4
    f = random_meshed_functions(mesh, 1, np.random.default_rng(1))[0]
    K, Mw = assemble_forms(mesh, s=s)
    c = np.asarray(f.values)
    gap = dyda_weight_check(f, s)
    lam = lambda_sp(SPParams(s, 2))
    assert c @ K @ c - gap >= lam * (c @ Mw @ c) - 1e-12
