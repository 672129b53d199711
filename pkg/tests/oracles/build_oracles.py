"""Independent reference values, frozen into ``values.json``.

Everything here uses mpmath at 30 digits and never imports the package
under test.  Rerun with ``python tests/oracles/build_oracles.py`` to
regenerate; the tests only read the JSON file.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
OUT = Path(__file__).with_name("values.json")


def f(x):
    return float(x)


def _pow1p(r, beta):
    """(1 + r)^beta - 1 without cancellation."""
    return mp.expm1(beta * mp.log1p(r))


def lam_direct(s, p, beta):
    """2 [int_0^inf J_p(1 - tau^beta) / |1 - tau|^(1+sp) dtau + 1/(sp)]
    as a principal value, folded symmetrically about tau = 1."""
    s, p, beta = mp.mpf(s), mp.mpf(p), mp.mpf(beta)
    sp = s * p

    def J(x):
        return mp.sign(x) * abs(x) ** (p - 1)

    def near(r):
        return (J(-_pow1p(-r, beta)) + J(-_pow1p(r, beta))) / r ** (1 + sp)

    def g(tau):
        return J(1 - tau ** beta) / abs(1 - tau) ** (1 + sp)

    inner = mp.quad(near, [0, mp.mpf(1) / 4, 1])
    far = mp.quad(g, [2, mp.inf])
    return 2 * (inner + far + 1 / sp)


def lam_eps(s, p, beta, eps):
    s, p, beta, eps = mp.mpf(s), mp.mpf(p), mp.mpf(beta), mp.mpf(eps)
    sp = s * p

    def g(tau):
        x = 1 - tau ** beta
        return mp.sign(x) * abs(x) ** (p - 1) / abs(1 - tau) ** (1 + sp)

    inner = mp.quad(g, [0, mp.mpf(1) / 2, 1 - eps])
    outer = mp.quad(g, [1 + eps, 2, mp.inf])
    return 2 * (inner + outer + 1 / sp)


def Lambda(s, p):
    s, p = mp.mpf(s), mp.mpf(p)
    sp = s * p
    b0 = (sp - 1) / p
    return 2 * mp.quad(lambda t: abs(1 - t ** b0) ** p / (1 - t) ** (1 + sp), [0, mp.mpf(1) / 2, 1]) + 2 / sp


def interval_plap_p2(beta, t, s=mp.mpf(1) / 2):
    """(-Delta)^s of min(y, 1-y)^beta on (0, 1), p = 2, by folding the
    principal value about t."""
    beta, t = mp.mpf(beta), mp.mpf(t)

    def U(y):
        if y <= 0 or y >= 1:
            return mp.mpf(0)
        return min(y, 1 - y) ** beta

    Ut = U(t)
    d = min(t, 1 - t)
    k = abs(mp.mpf(1) / 2 - t)   # distance to the kink

    def sym_near(r):
        # both t + r and t - r stay on the same side of the kink
        return -Ut * (_pow1p(r / d, beta) + _pow1p(-r / d, beta)) / r ** (1 + 2 * s)

    def sym_far(r):
        return (2 * Ut - U(t + r) - U(t - r)) / r ** (1 + 2 * s)

    sym = mp.quad(sym_near, [0, k]) + mp.quad(sym_far, [k, d])
    lo, hi = t - d, t + d
    rest = mp.mpf(0)
    if lo > 0:
        brk = [0, lo] if not 0 < mp.mpf(1) / 2 < lo else [0, mp.mpf(1) / 2, lo]
        rest += mp.quad(lambda y: (Ut - U(y)) / abs(t - y) ** (1 + 2 * s), brk)
    if hi < 1:
        brk = [hi, 1] if not hi < mp.mpf(1) / 2 < 1 else [hi, mp.mpf(1) / 2, 1]
        rest += mp.quad(lambda y: (Ut - U(y)) / abs(t - y) ** (1 + 2 * s), brk)
    tails = Ut * (t ** (-2 * s) + (1 - t) ** (-2 * s)) / (2 * s)
    return 2 * (sym + rest + tails)


def H(t):
    t = mp.mpf(t)
    d = min(t, 1 - t)
    return -2 / (t * (1 - t)) + 2 / d * mp.log(4 * t * (1 - t) / (1 - 2 * t) ** 2)


def regional_form(u, v, knots, a, b, sigma, p=2):
    """int_(a,b)^2 (u(x)-u(y))(v(x)-v(y)) / |x-y|^(1+sigma) for p = 2, or
    int |u(x)-u(y)|^p / |x-y|^(1+sigma) when v is None, reduced to
    2 int_0^L r^(-1-sigma) int_a^(b-r) ... dx dr."""
    knots = sorted(set(mp.mpf(k) for k in knots) | {mp.mpf(a), mp.mpf(b)})
    L = knots[-1] - knots[0]

    def inner(r):
        pts = sorted({k for k in knots if k <= b - r} | {k - r for k in knots if a <= k - r <= b - r}
                     | {mp.mpf(a), b - r})
        if v is None:
            h = lambda x: abs(u(x + r) - u(x)) ** p
        else:
            h = lambda x: (u(x + r) - u(x)) * (v(x + r) - v(x))
        return mp.quad(h, pts)

    diffs = sorted({abs(x - y) for x in knots for y in knots} | {mp.mpf(0), L})
    return 2 * mp.quad(lambda r: inner(r) * r ** (-1 - sigma), diffs)


def hat_fullline(s, p):
    s, p = mp.mpf(s), mp.mpf(p)
    sp = s * p

    def u(x):
        return max(mp.mpf(0), min(2 * x, 2 - 2 * x))

    cuts = [0, mp.mpf(1) / 2, 1]
    reg = regional_form(u, None, cuts, 0, 1, sp, p)
    ext = mp.quad(lambda x: u(x) ** p * (x ** (-sp) + (1 - x) ** (-sp)), cuts)
    return reg + 2 * ext / sp


def hat_fem_matrices(nodes, s):
    """K and Mw on a tiny mesh by direct quadrature of the hat products."""
    x = [mp.mpf(v) for v in nodes]
    n = len(x) - 1
    s = mp.mpf(s)

    def hat(i):
        def h(t):
            if x[i - 1] <= t <= x[i]:
                return (t - x[i - 1]) / (x[i] - x[i - 1])
            if x[i] <= t <= x[i + 1]:
                return (x[i + 1] - t) / (x[i + 1] - x[i])
            return mp.mpf(0)
        return h

    def dist(t):
        return min(t - x[0], x[-1] - t)

    K = [[None] * (n - 1) for _ in range(n - 1)]
    M = [[None] * (n - 1) for _ in range(n - 1)]
    a_, b_ = x[0], x[-1]
    mid = (a_ + b_) / 2
    brk = sorted(set(x) | {mid})
    for i in range(1, n):
        for j in range(i, n):
            hi_, hj = hat(i), hat(j)
            reg = regional_form(hi_, hj, x, a_, b_, 2 * s)
            ext = mp.quad(lambda t: hi_(t) * hj(t) * ((t - a_) ** (-2 * s) + (b_ - t) ** (-2 * s)), x)
            K[i - 1][j - 1] = K[j - 1][i - 1] = reg + ext / s
            M[i - 1][j - 1] = M[j - 1][i - 1] = mp.quad(lambda t: hi_(t) * hj(t) * dist(t) ** (-2 * s), brk)
    return [[f(v) for v in row] for row in K], [[f(v) for v in row] for row in M]


def phi_fullline(s, p, beta):
    """[x^beta psi]^p over R with the quintic cutoff on (1, 2)."""
    s, p, beta = mp.mpf(s), mp.mpf(p), mp.mpf(beta)
    sp = s * p

    def psi(x):
        if x <= 1:
            return mp.mpf(1)
        if x >= 2:
            return mp.mpf(0)
        z = x - 1
        return 1 - (6 * z ** 5 - 15 * z ** 4 + 10 * z ** 3)

    def phi(x):
        if x <= 0 or x >= 2:
            return mp.mpf(0)
        return x ** beta * psi(x)

    cuts = [0, 1, 2]
    reg = regional_form(phi, None, cuts, 0, 2, sp, p)
    ext = mp.quad(lambda x: phi(x) ** p * (x ** (-sp) + (2 - x) ** (-sp)), cuts)
    den = mp.quad(lambda x: phi(x) ** p * x ** (-sp), cuts)
    return reg + 2 * ext / sp, den


def main():
    v = {}
    # singular quadrature sample
    v["sing_sample"] = f(mp.quad(lambda t: abs(1 - t ** mp.mpf(0.25)) ** 2 / (1 - t) ** 2, [0, 0.5, 1]))
    # I(k; alpha) via the Beta function
    ik = lambda k, a: mp.beta(mp.mpf(k + 1) / 2, (1 + mp.mpf(a)) / 2) / 2
    v["I_2_1"] = f(ik(2, 1))
    v["C_2_s04_p3"] = f(2 * ik(0, mp.mpf("1.2")))
    v["Lambda_075_2"] = f(Lambda(0.75, 2))
    v["Lambda_03_3"] = f(Lambda(0.3, 3))
    v["Lambda_05_3"] = f(Lambda(0.5, 3))
    v["lambda_beta_samples"] = [
        [s, p, b, f(lam_direct(s, p, b))]
        for s, p, b in [(0.5, 2, 0.25), (0.3, 3, 0.1), (0.7, 1.5, -0.3), (0.6, 3, -0.2), (0.75, 2, 0.25)]
    ]
    v["lambda_eps_05_2_025_001"] = f(lam_eps(0.5, 2, 0.25, 0.01))
    v["lambda_eps_samples"] = [
        [s, p, b, e, f(lam_eps(s, p, b, e))]
        for s, p, b, e in [(0.5, 2, -0.25, 0.01), (0.75, 3, 0.5, 0.001)]
    ]
    # negative root of lambda for s = 0.6, p = 3
    v["beta_star_06_3"] = f(mp.findroot(lambda b: lam_direct(0.6, 3, b), (-0.5, -0.3), solver="anderson"))
    v["H_025"] = f(H(0.25))
    v["plap_interval_m05_049"] = f(interval_plap_p2(-0.5, 0.49))
    v["plap_interval_m025_045"] = f(interval_plap_p2(-0.25, 0.45))
    v["plap_interval_m05_025"] = f(interval_plap_p2(-0.5, 0.25))
    a, b, c, d, p = map(mp.mpf, (2, 1, 1, 3, 3))
    v["picone_3_2_1_1_3"] = f(abs(c - d) ** p - abs(a - b) ** (p - 2) * (a - b)
                               * (c ** p / a ** (p - 1) - d ** p / b ** (p - 1)))
    v["hat_fullline_05_2"] = f(hat_fullline(0.5, 2))
    v["hat_fullline_03_3"] = f(hat_fullline(0.3, 3))
    K, M = hat_fem_matrices([0, 0.25, 0.6, 1.0], 0.3)
    v["fem_small"] = {"nodes": [0, 0.25, 0.6, 1.0], "s": 0.3, "K": K, "Mw": M}
    num, den = phi_fullline(0.5, 2, 0.3)
    v["phi_05_2_03"] = {"numerator": f(num), "denominator": f(den)}
    # Dyda gap for the centred hat, s = 1/2
    u = lambda t: min(2 * t, 2 - 2 * t)
    wD = mp.quad(lambda t: u(t) ** 2 / (t * (1 - t)), [0, 0.5, 1])
    v["dyda_hat_05"] = f(hat_fullline(0.5, 2) - 2 * wD)
    OUT.write_text(json.dumps(v, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
