"""Closed-form constants of the fractional Hardy problem.

All constants are one-dimensional integrals evaluated by quadrature:

* ``Lambda_{s,p} = 2 int_0^1 |1 - t**b0|**p / (1 - t)**(1+sp) dt + 2/(sp)``
  with ``b0 = (sp - 1)/p``, the half-line constant;
* ``lambda(beta)``, the eigenvalue attached to the power ``t**beta`` on the
  half-line, and its excised version ``lambda_eps(beta)``;
* ``I(k; alpha)``, ``omega_k`` and the dimensional factor ``C_{N,sp}``.

Integrals over ``(0, 1)`` are split at ``1/2`` and the half next to ``t = 1``
is integrated in the gap variable ``u = 1 - t`` so that powers of ``1 - t``
keep full relative accuracy.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ._core import jp_scalar, log_one_minus_pow, pow1m, pow1m_gap
from .quadrature import QuadratureError, QuadratureSpec, integrate_improper, integrate_singular

__all__ = [
    "SPParams",
    "BetaExponent",
    "HardyReport",
    "LambdaScan",
    "InadmissibleExponentError",
    "omega",
    "ik_alpha",
    "c_nsp",
    "lambda_sp",
    "lambda_beta",
    "lambda_eps",
    "beta_star",
    "sharp_hardy_constant",
    "lambda_monotonicity_scan",
]

_SPEC = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=400)


class InadmissibleExponentError(ValueError):
    """The exponent lies outside the range where the integral converges."""


@dataclass(frozen=True)
class SPParams:
    """Fractional order ``s`` in ``(0, 1)`` and integrability ``p`` in ``(1, inf)``."""

    s: float
    p: float

    def __post_init__(self):
        if not (0.0 < self.s < 1.0):
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        if not (1.0 < self.p < math.inf):
            raise ValueError(f"p must lie in (1, inf), got {self.p}")

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def sp_ge_one(self) -> bool:
        return self.s * self.p >= 1.0

    @property
    def beta_min(self) -> float:
        """Left end ``-1/(p-1)`` of the admissible range of ``lambda``."""
        return -1.0 / (self.p - 1.0)

    @property
    def beta_max(self) -> float:
        """Right end ``sp/(p-1)`` of the admissible range of ``lambda``."""
        return self.sp / (self.p - 1.0)

    @property
    def beta_peak(self) -> float:
        """The maximiser ``(sp - 1)/p`` of ``lambda``."""
        return (self.sp - 1.0) / self.p


@dataclass(frozen=True)
class BetaExponent:
    """An exponent ``beta`` of the power profiles ``t**beta``."""

    beta: float

    def admissible_for_lambda(self, params: SPParams) -> bool:
        return params.beta_min < self.beta < params.beta_max

    def admissible_for_convex_supersolution(self, params: SPParams) -> bool:
        return 0.0 <= self.beta < params.beta_max


@dataclass(frozen=True)
class HardyReport:
    """Value, or bracket, of the sharp Hardy constant.

    ``value`` is ``None`` when only the bracket ``[lo, hi]`` is known.
    """

    N: int
    s: float
    p: float
    domain_class: str
    source: str
    lo: float
    hi: float
    value: Optional[float]
    attained: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("bracket must satisfy lo <= hi")
        if self.source == "theorem_exact" and self.attained:
            raise ValueError("an exact sharp constant is never attained")

    @property
    def constant(self):
        return self.value if self.value is not None else (self.lo, self.hi)

    def to_dict(self) -> dict:
        out = {
            "N": self.N, "s": self.s, "p": self.p, "domain_class": self.domain_class,
            "source": self.source, "attained": self.attained,
        }
        if self.value is not None:
            out["constant"] = self.value
        else:
            out["bracket"] = [self.lo, self.hi]
        return out


def _as_beta(beta) -> float:
    return float(beta.beta if isinstance(beta, BetaExponent) else beta)


def _check_beta(params: SPParams, beta: float) -> None:
    if not (params.beta_min < beta < params.beta_max):
        raise InadmissibleExponentError(
            f"inadmissible exponent: beta={beta} outside "
            f"({params.beta_min}, {params.beta_max}) for s={params.s}, p={params.p}")


def _int01(g0, g1, left: float, right: float, spec: QuadratureSpec) -> float:
    """``int_0^1`` as ``int_0^{1/2} g0(t) dt + int_0^{1/2} g1(u) du`` with
    ``u = 1 - t``; the exponents refer to ``t = 0`` and ``u = 0``."""
    a, _ = integrate_singular(g0, 0.0, 0.5, spec.with_exponents(left, 0.0))
    b, _ = integrate_singular(g1, 0.0, 0.5, spec.with_exponents(right, 0.0))
    return a + b


def _folded_near_zero(beta: float, e: float, p: float, sp: float):
    """``t -> J_p(1 - t**beta) (1 - t**e) / (1 - t)**(1+sp)`` evaluated in
    log form, safe for tiny ``t`` and negative exponents."""
    if e == 0.0:
        return lambda t: 0.0

    def g(t: float) -> float:
        lt = math.log(t)
        sa, la = log_one_minus_pow(lt, beta)
        sb, lb = log_one_minus_pow(lt, e)
        return sa * sb * math.exp((p - 1.0) * la + lb - (1.0 + sp) * math.log1p(-t))

    return g


# --------------------------------------------------------------------------


def omega(k: int) -> float:
    """Volume ``pi**(k/2)/Gamma(k/2 + 1)`` of the unit ball of ``R^k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return math.pi ** (0.5 * k) / math.gamma(0.5 * k + 1.0)


def ik_alpha(k: int, alpha: float, spec: QuadratureSpec | None = None) -> float:
    """``I(k; alpha) = int_0^inf t**k (1 + t**2)**(-(k + 2 + alpha)/2) dt``."""
    if k < 0 or alpha < 0:
        raise ValueError("need k >= 0 and alpha >= 0")
    spec = spec or _SPEC
    q = -0.5 * (k + 2.0 + alpha)

    def f(t: float) -> float:
        return t ** k * (1.0 + t * t) ** q

    # the integrand decays like t**(-2-alpha): compactified exponent alpha
    value, _ = integrate_improper(f, 0.0, spec.with_exponents(0.0, 0.0))
    return value


def c_nsp(N: int, params: SPParams, spec: QuadratureSpec | None = None) -> float:
    """Dimensional factor ``C_{N,sp}``; equal to 1 when ``N = 1``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if N == 1:
        return 1.0
    return (N - 1) * omega(N - 1) * ik_alpha(N - 2, params.sp, spec)


def lambda_sp(params: SPParams, spec: QuadratureSpec | None = None) -> float:
    """Half-line sharp constant ``Lambda_{s,p}``."""
    spec = spec or _SPEC
    s, p = params.s, params.p
    sp = params.sp
    b0 = params.beta_peak
    if b0 == 0.0:
        return 2.0 / sp

    def g0(t: float) -> float:
        return abs(pow1m(t, b0)) ** p / (1.0 - t) ** (1.0 + sp)

    def g1(u: float) -> float:
        return abs(pow1m_gap(u, b0)) ** p / u ** (1.0 + sp)

    return 2.0 * _int01(g0, g1, min(0.0, b0 * p), p - 1.0 - sp, spec) + 2.0 / sp


def lambda_beta(params: SPParams, beta, spec: QuadratureSpec | None = None) -> float:
    """``lambda(beta)`` for ``-1/(p-1) < beta < sp/(p-1)``.

    Uses the folded integrand
    ``J_p(1 - t**beta) (1 - t**e) / (1 - t)**(1+sp)`` on ``(0, 1)`` with
    ``e = sp - 1 - beta (p - 1)``.

    Raises
    ------
    InadmissibleExponentError
        If ``beta`` is outside the admissible range.
    """
    spec = spec or _SPEC
    beta = _as_beta(beta)
    _check_beta(params, beta)
    p, sp = params.p, params.sp
    if beta == 0.0:
        return 2.0 / sp
    e = sp - 1.0 - beta * (p - 1.0)

    g0 = _folded_near_zero(beta, e, p, sp)

    def g1(u: float) -> float:
        return jp_scalar(p, pow1m_gap(u, beta)) * pow1m_gap(u, e) / u ** (1.0 + sp)

    left = min(0.0, beta * (p - 1.0)) + min(0.0, e)
    right = p * (1.0 - params.s) - 1.0
    return 2.0 * _int01(g0, g1, left, right, spec) + 2.0 / sp


def lambda_eps(params: SPParams, beta, eps: float, form: str = "direct",
               spec: QuadratureSpec | None = None) -> float:
    """Excised constant ``lambda_eps(beta)``.

    Parameters
    ----------
    params : SPParams
    beta : float or BetaExponent
        Admissible exponent.
    eps : float
        Relative excision radius in ``(0, 1)``.
    form : {"direct", "folded"}
        ``"direct"`` integrates over ``(0, 1 - eps)`` and ``(1 + eps, inf)``;
        ``"folded"`` maps the outer piece onto ``(0, 1/(1 + eps))`` by
        ``tau -> 1/tau`` and combines it with the inner piece.
    """
    spec = spec or _SPEC
    beta = _as_beta(beta)
    _check_beta(params, beta)
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    p, sp = params.p, params.sp
    if beta == 0.0:
        return 2.0 / sp
    e = sp - 1.0 - beta * (p - 1.0)
    left = min(0.0, beta * (p - 1.0))

    if form == "direct":
        # (0, 1 - eps): near t = 0 in t, the rest in the gap u = 1 - t
        a, _ = integrate_singular(
            lambda t: jp_scalar(p, pow1m(t, beta)) / (1.0 - t) ** (1.0 + sp),
            0.0, 0.5, spec.with_exponents(left, 0.0))
        b = 0.0
        if eps < 0.5:
            b, _ = integrate_singular(
                lambda u: jp_scalar(p, pow1m_gap(u, beta)) / u ** (1.0 + sp),
                eps, 0.5, spec.with_exponents(0.0, 0.0))
        else:
            a, _ = integrate_singular(
                lambda t: jp_scalar(p, pow1m(t, beta)) / (1.0 - t) ** (1.0 + sp),
                0.0, 1.0 - eps, spec.with_exponents(left, 0.0))

        # (1 + eps, inf) in v = tau - 1; decay v**(max(0, beta(p-1)) - 1 - sp)
        def outer(v: float) -> float:
            return jp_scalar(p, -math.expm1(beta * math.log1p(v))) / v ** (1.0 + sp)

        q = 1.0 + sp - max(0.0, beta * (p - 1.0))
        c = 0.0
        if eps < 1.0:
            c, _ = integrate_singular(outer, eps, 1.0, spec.with_exponents(0.0, 0.0))
        d, _ = integrate_improper(outer, 1.0, spec.with_exponents(0.0, q - 2.0))
        return 2.0 * (a + b + c + d) + 2.0 / sp

    if form == "folded":
        lo_left = min(0.0, beta * (p - 1.0)) + min(0.0, e)

        g0 = _folded_near_zero(beta, e, p, sp)

        def g1(u: float) -> float:
            return jp_scalar(p, pow1m_gap(u, beta)) * pow1m_gap(u, e) / u ** (1.0 + sp)

        if eps < 0.5:
            a, _ = integrate_singular(g0, 0.0, 0.5, spec.with_exponents(lo_left, 0.0))
            b, _ = integrate_singular(g1, eps, 0.5, spec.with_exponents(0.0, 0.0))
        else:
            a, _ = integrate_singular(g0, 0.0, 1.0 - eps, spec.with_exponents(lo_left, 0.0))
            b = 0.0
        # ring (1 - eps, 1/(1 + eps)) in the gap u = 1 - tau
        u_hi, u_lo = eps, eps / (1.0 + eps)

        def ring(u: float) -> float:
            lt = math.log1p(-u)
            return jp_scalar(p, math.expm1(beta * lt)) * math.exp(e * lt) / u ** (1.0 + sp)

        c, _ = integrate_singular(ring, u_lo, u_hi, spec.with_exponents(0.0, 0.0))
        return 2.0 * (a + b + c) + 2.0 / sp

    raise ValueError("form must be 'direct' or 'folded'")


def _lambda_safe(params: SPParams, beta: float, spec: QuadratureSpec) -> float:
    """``lambda`` or, if the quadrature stalls, the partial estimate when its
    error bar does not straddle zero (enough to fix a sign)."""
    try:
        return lambda_beta(params, beta, spec)
    except QuadratureError as exc:
        if math.isfinite(exc.value) and abs(exc.value) > exc.err:
            return exc.value
        raise


def beta_star(params: SPParams, spec: QuadratureSpec | None = None, xtol: float = 1e-13) -> float:
    """Negative root of ``lambda`` in ``(-1/(p-1), (sp-1)/p)``.

    The left end of the bracket is ``-1/(p-1) + delta`` with ``delta``
    grown by factors of 10 from ``1e-6`` until ``lambda`` is negative there.
    """
    spec = spec or _SPEC
    left_end, right = params.beta_min, params.beta_peak
    delta = 1e-6
    while True:
        left = left_end + delta * (right - left_end)
        try:
            val = _lambda_safe(params, left, spec)
        except QuadratureError:
            val = math.nan
        if val < 0.0:
            break
        delta *= 10.0
        if delta >= 1.0:
            raise RuntimeError("bracket failure in beta_star")
    return brentq(lambda b: _lambda_safe(params, b, spec), left, right, xtol=xtol, rtol=1e-15, maxiter=200)


def sharp_hardy_constant(N: int, params: SPParams, domain_class: str = "half_space",
                         spec: QuadratureSpec | None = None) -> HardyReport:
    """Sharp Hardy constant of the half-space or of a generic convex set.

    For the half-space, and for convex sets when ``sp >= 1`` or ``p = 2``,
    the constant is ``C_{N,sp} Lambda_{s,p}``.  For convex sets with
    ``sp < 1`` and ``p != 2`` only the bracket
    ``[C_{N,sp} 2/(sp), C_{N,sp} Lambda_{s,p}]`` is available.
    """
    if domain_class not in ("half_space", "generic_convex"):
        raise ValueError("domain_class must be 'half_space' or 'generic_convex'")
    C = c_nsp(N, params, spec)
    top = C * lambda_sp(params, spec)
    exact = domain_class == "half_space" or params.sp_ge_one or params.p == 2.0
    if exact:
        return HardyReport(N, params.s, params.p, domain_class, "theorem_exact", top, top, top)
    return HardyReport(N, params.s, params.p, domain_class, "open_problem_bracket",
                       C * 2.0 / params.sp, top, None)


@dataclass
class LambdaScan:
    """Outcome of :func:`lambda_monotonicity_scan`."""

    params: SPParams
    betas: np.ndarray
    values: np.ndarray
    beta_peak: float
    beta_star: float
    argmax_beta: float
    single_peaked: bool
    argmax_ok: bool
    sign_consistent: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.single_peaked and self.argmax_ok and self.sign_consistent


def _pmap(fn, items, threads: int | None):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def lambda_monotonicity_scan(params: SPParams, grid_size: int = 64,
                             spec: QuadratureSpec | None = None,
                             threads: int | None = None) -> LambdaScan:
    """Evaluate ``lambda`` on a cell-centred grid of the admissible range and
    check the single-peak shape and the sign pattern.

    ``lambda`` should increase up to ``(sp-1)/p``, decrease after it, and be
    nonnegative exactly on ``[beta*, s]``.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    spec = spec or _SPEC
    lo, hi = params.beta_min, params.beta_max
    h = (hi - lo) / grid_size
    betas = lo + h * (np.arange(grid_size) + 0.5)
    values = np.array(_pmap(lambda b: lambda_beta(params, float(b), spec), betas, threads))

    violations = []
    imax = int(np.argmax(values))
    rising = np.diff(values[: imax + 1])
    falling = np.diff(values[imax:])
    # equal neighbours occur when the peak sits between two cells (p = 2 symmetry)
    tie = 1e-10 * float(np.max(np.abs(values)))
    single = bool(np.all(rising > -tie) and np.all(falling < tie))
    if not single:
        violations.append("lambda is not single-peaked on the grid")
    argmax_ok = abs(betas[imax] - params.beta_peak) <= h
    if not argmax_ok:
        violations.append(f"argmax {betas[imax]} not within one cell of {params.beta_peak}")

    bstar = beta_star(params, spec)
    sign_ok = True
    for b, v in zip(betas, values):
        inside = bstar <= b <= params.s
        if min(abs(b - bstar), abs(b - params.s)) < 1e-9:
            continue
        if (v >= 0.0) != inside:
            sign_ok = False
            violations.append(f"sign of lambda({b}) = {v} inconsistent with [beta*, s]")
    return LambdaScan(params, betas, values, params.beta_peak, bstar, float(betas[imax]),
                      single, argmax_ok, sign_ok, violations)
