"""Pointwise fractional p-Laplacian of one-dimensional power profiles.

The operator is

    F(t) = 2 PV int_R J_p(U(t) - U(y)) / |t - y|**(1 + sp) dy,

evaluated as the limit of excised integrals.  Where the profile vanishes the
kernel is integrated in closed form,
``int_{y < a} |t - y|**(-1-sp) dy = (t - a)**(-sp) / sp``.
Inside the support the profile is split into smooth pieces, and each piece
next to a singular endpoint is integrated in the gap variable measured from
that endpoint.

Near ``y = t`` the symmetrised integrand behaves like ``r**(p(1-s) - 1)``,
so the excised integrals approach their limit as
``eps**(p(1-s) + 2j)``; those are the orders removed by extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ._core import jp_array, jp_scalar
from .constants import SPParams, lambda_beta, lambda_eps
from .geometry import Interval
from .quadrature import (
    PVExcision,
    QuadratureSpec,
    integrate_improper,
    integrate_singular,
    principal_value,
)

__all__ = [
    "HalfLinePower",
    "IntervalPower",
    "KelvinInterval",
    "PowerProfile",
    "AppendixBFunctions",
    "SingularPointError",
    "jp",
    "frac_plap_pv",
    "excised_operator",
    "halfline_identity_residual",
    "supersolution_margin_1d",
    "appendix_b_eval",
    "appendix_b_claim_check",
    "picone_gap",
    "power_difference_bound_check",
]

_SPEC = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-15, max_subdivisions=400)


class SingularPointError(ValueError):
    """Evaluation requested at a point where the function is not defined."""


def jp(p: float, t):
    """``J_p(t) = |t|**(p-2) t``; works on scalars and arrays."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    if np.ndim(t) == 0:
        return jp_scalar(p, float(t))
    return jp_array(p, t)


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class _Piece:
    """A smooth piece ``[x0, x1]`` of a profile.

    ``from_left(g) = U(x0 + g)`` and ``from_right(g) = U(x1 - g)`` are exact
    in the gap ``g``; the exponents give ``U ~ g**e`` at each end (``None``
    for a regular end).
    """

    x0: float
    x1: float
    from_left: Callable[[float], float]
    from_right: Callable[[float], float]
    left_exp: float | None
    right_exp: float | None


@dataclass(frozen=True)
class HalfLinePower:
    """``U(t) = t**beta`` for ``t > 0`` and 0 otherwise (``beta = 0`` gives
    the indicator of the half-line)."""

    beta: float
    params: SPParams

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, math.inf

    def value(self, y: float) -> float:
        return y ** self.beta if y > 0 else 0.0

    def pieces(self) -> list[_Piece]:
        b = self.beta
        return [_Piece(0.0, math.inf, lambda g: g ** b, lambda g: math.nan, b, None)]

    def kinks(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class IntervalPower:
    """``U(t) = d_I(t)**beta`` on ``I = (a, b)``, zero outside."""

    beta: float
    params: SPParams
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")

    @property
    def support(self) -> tuple[float, float]:
        return self.a, self.b

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def value(self, y: float) -> float:
        d = min(y - self.a, self.b - y)
        return d ** self.beta if d > 0 else 0.0

    def pieces(self) -> list[_Piece]:
        b, m, h = self.beta, self.midpoint, 0.5 * (self.b - self.a)
        return [
            _Piece(self.a, m, lambda g: g ** b, lambda g: (h - g) ** b, b, None),
            _Piece(m, self.b, lambda g: (h - g) ** b, lambda g: g ** b, None, b),
        ]

    def kinks(self) -> tuple[float, ...]:
        return (self.midpoint,) if self.beta != 0 else ()


@dataclass(frozen=True)
class KelvinInterval:
    """``f(t) = t**(2s-1-beta) (1-t)**beta`` on ``(0, 1)``, zero outside;
    requires ``p = 2`` and ``-1 < beta < 2s``."""

    beta: float
    params: SPParams

    def __post_init__(self):
        if self.params.p != 2.0:
            raise ValueError("the Kelvin profile is defined for p = 2 only")
        if not -1.0 < self.beta < 2.0 * self.params.s:
            raise ValueError("need -1 < beta < 2s")

    @property
    def left_power(self) -> float:
        return 2.0 * self.params.s - 1.0 - self.beta

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, 1.0

    def value(self, y: float) -> float:
        if not 0.0 < y < 1.0:
            return 0.0
        return y ** self.left_power * (1.0 - y) ** self.beta

    def pieces(self) -> list[_Piece]:
        a, b = self.left_power, self.beta
        return [_Piece(0.0, 1.0,
                       lambda g: g ** a * (1.0 - g) ** b,
                       lambda g: (1.0 - g) ** a * g ** b, a, b)]

    def kinks(self) -> tuple[float, ...]:
        return ()


PowerProfile = Union[HalfLinePower, IntervalPower, KelvinInterval]


# --------------------------------------------------------------------------
# operator


def _kernel(profile: PowerProfile, t: float):
    p, sp = profile.params.p, profile.params.sp
    ut = profile.value(t)

    def k(y: float, uy: float) -> float:
        return jp_scalar(p, ut - uy) / abs(t - y) ** (1.0 + sp)

    return ut, k


def _sing_exp(e: float | None, p: float) -> float:
    # J_p(U(t) - U(y)) ~ |U(y)|^(p-1) when U blows up like g^e, e < 0
    if e is None or e >= 0:
        return 0.0
    return e * (p - 1.0)


def _outside(profile: PowerProfile, t: float, lo: float, hi: float,
             spec: QuadratureSpec) -> float:
    """``int`` of the kernel over the support minus ``(lo, hi)``."""
    p = profile.params.p
    sp = profile.params.sp
    ut, k = _kernel(profile, t)
    total = 0.0
    for pc in profile.pieces():
        for c, d in ((pc.x0, min(pc.x1, lo)), (max(pc.x0, hi), pc.x1)):
            if not c < d:
                continue
            at_left, at_right = c == pc.x0, d == pc.x1
            if math.isinf(d):
                # half-line tail; decay y^(max(0, beta(p-1)) - 1 - sp)
                q = 1.0 + sp - max(0.0, profile.beta * (p - 1.0))
                v, _ = integrate_improper(lambda y: k(y, profile.value(y)), c,
                                          spec.with_exponents(0.0, q - 2.0), scale=max(t, 1.0))
                total += v
                continue
            segs = []
            if at_left and at_right:
                m = 0.5 * (c + d)
                segs = [("L", c, m), ("R", m, d)]
            elif at_left:
                segs = [("L", c, d)]
            elif at_right:
                segs = [("R", c, d)]
            else:
                segs = [("M", c, d)]
            for kind, u, v in segs:
                if kind == "L":
                    x0 = pc.x0
                    f = (lambda g, x0=x0: k(x0 + g, pc.from_left(g)))
                    val, _ = integrate_singular(f, u - x0, v - x0,
                                                spec.with_exponents(_sing_exp(pc.left_exp, p), 0.0)
                                                if u == x0 else spec)
                elif kind == "R":
                    x1 = pc.x1
                    f = (lambda g, x1=x1: k(x1 - g, pc.from_right(g)))
                    val, _ = integrate_singular(f, x1 - v, x1 - u,
                                                spec.with_exponents(_sing_exp(pc.right_exp, p), 0.0)
                                                if v == x1 else spec)
                else:
                    val, _ = integrate_singular(lambda y: k(y, profile.value(y)), u, v, spec)
                total += val
    # closed-form tails where the profile vanishes
    a, b = profile.support
    tail = 0.0
    if math.isfinite(a):
        tail += (t - a) ** (-sp)
    if math.isfinite(b):
        tail += (b - t) ** (-sp)
    return total + jp_scalar(p, ut) * tail / sp


def excised_operator(profile: PowerProfile, t: float, lo: float, hi: float,
                     spec: QuadratureSpec | None = None) -> float:
    """``2 int_{R minus (lo, hi)} J_p(U(t) - U(y)) / |t - y|**(1+sp) dy``."""
    if not lo < t < hi:
        raise ValueError("the excised interval must contain t")
    return 2.0 * _outside(profile, t, lo, hi, spec or _SPEC)


def _default_excision(profile: PowerProfile, t: float) -> PVExcision:
    order = profile.params.p * (1.0 - profile.params.s)
    if isinstance(profile, HalfLinePower):
        return PVExcision.geometric("relative", 0.1, 12, order)
    a, b = profile.support
    gap = min([t - a, b - t] + [abs(t - k) for k in profile.kinks()])
    return PVExcision.geometric("absolute", min(0.1, 0.5 * gap), 12, order)


def frac_plap_pv(profile: PowerProfile, t: float, excision: PVExcision | None = None,
                 spec: QuadratureSpec | None = None) -> tuple[float, list]:
    """Principal value ``(-Delta_p)^s U(t)`` with its convergence trace.

    Parameters
    ----------
    profile : HalfLinePower, IntervalPower or KelvinInterval
    t : float
        Evaluation point inside the support.
    excision : PVExcision, optional
        Defaults to a 12-level halving schedule: relative with
        ``eps0 = 0.1`` on the half-line, absolute with
        ``eps0 = min(0.1, gap/2)`` on intervals, where ``gap`` is the
        distance to the nearest endpoint or kink.
    spec : QuadratureSpec, optional

    Returns
    -------
    value : float
    trace : list of (eps, partial)
        Partials are the excised integrals (including the factor 2).

    Raises
    ------
    SingularPointError
        At the midpoint kink of an :class:`IntervalPower` (within ``1e-3``).
    PVDivergenceError
        If the excised integrals do not settle.
    """
    spec = spec or _SPEC
    a, b = profile.support
    if not a < t < b:
        raise ValueError("t must lie inside the support")
    if isinstance(profile, IntervalPower) and profile.beta != 0:
        if abs(t - profile.midpoint) < 1e-3 * (b - a):
            raise SingularPointError("t is within 1e-3 of the midpoint kink")
    excision = excision or _default_excision(profile, t)
    w0 = excision.widths(t)[0]
    base = 2.0 * _outside(profile, t, t - w0, t + w0, spec)
    _, k = _kernel(profile, t)
    ring = lambda y: 2.0 * k(y, profile.value(y))
    return principal_value(ring, t, a, b, excision, spec, base=base)


def halfline_identity_residual(params: SPParams, beta, t: float, eps: float,
                               spec: QuadratureSpec | None = None) -> float:
    """``|F_eps(t) - lambda_eps(beta) t**(beta(p-1) - sp)|`` for ``U = t**beta``.

    ``F_eps`` excises the relative window ``((1-eps) t, (1+eps) t)``; the
    identity is exact at every ``eps``, so the residual is quadrature error.
    """
    beta = float(getattr(beta, "beta", beta))
    prof = HalfLinePower(beta, params)
    F = excised_operator(prof, t, (1.0 - eps) * t, (1.0 + eps) * t, spec)
    lam = lambda_eps(params, beta, eps)
    return abs(F - lam * t ** (beta * (params.p - 1.0) - params.sp))


def supersolution_margin_1d(domain: Interval, params: SPParams, beta: float, t: float,
                            spec: QuadratureSpec | None = None) -> float:
    """``(-Delta_p)^s d_I**beta (t) - lambda(beta) d_I(t)**(beta(p-1) - sp)``.

    Nonnegative for ``0 <= beta < sp/(p-1)``.  Any ``beta`` admissible for
    ``lambda`` is accepted so that negative powers can be probed as well.
    """
    prof = IntervalPower(beta, params, domain.a, domain.b)
    value, _ = frac_plap_pv(prof, t, spec=spec)
    d = float(domain.dist(t))
    return value - lambda_beta(params, beta) * d ** (beta * (params.p - 1.0) - params.sp)


# --------------------------------------------------------------------------
# the borderline case s = 1/2, p = 2, beta < 0


@dataclass(frozen=True)
class AppendixBFunctions:
    """The pair ``H``, ``G`` on ``(0, 1)`` minus the midpoint.

    ``G(t) = -1/(1-t) + log(4t(1-t)/(1-2t)**2)`` and ``H = 2G/t`` on
    ``(0, 1/2)``, both extended symmetrically about ``1/2``.
    """

    @staticmethod
    def G(t: float) -> float:
        t = _fold(t)
        return -1.0 / (1.0 - t) + math.log(4.0 * t * (1.0 - t) / (1.0 - 2.0 * t) ** 2)

    @classmethod
    def H(cls, t: float) -> float:
        return 2.0 * cls.G(t) / _fold(t)

    @staticmethod
    def H_closed(t: float) -> float:
        """``-2/(t(1-t)) + (2/d_I(t)) log(4t(1-t)/(1-2t)**2)``."""
        if not 0.0 < t < 1.0 or t == 0.5:
            raise SingularPointError("H is defined on (0, 1) minus 1/2")
        d = min(t, 1.0 - t)
        return -2.0 / (t * (1.0 - t)) + 2.0 / d * math.log(4.0 * t * (1.0 - t) / (1.0 - 2.0 * t) ** 2)


def _fold(t: float) -> float:
    if not 0.0 < t < 1.0:
        raise SingularPointError("t must lie in (0, 1)")
    if t == 0.5:
        raise SingularPointError("singular point t = 1/2")
    return t if t < 0.5 else 1.0 - t


def appendix_b_eval(t: float) -> tuple[float, float]:
    """``(H(t), G(t))``; raises :class:`SingularPointError` at ``t = 1/2``."""
    return AppendixBFunctions.H(t), AppendixBFunctions.G(t)


def appendix_b_claim_check(beta: float, t: float, spec: QuadratureSpec | None = None
                           ) -> tuple[float, float, float]:
    """Both sides of ``(-Delta)^(1/2) U <= beta H U + 2U/(t(1-t))`` for
    ``U = d_I**beta`` on ``(0, 1)``, ``-1 < beta < 0``.

    Returns ``(lhs, rhs, rhs - lhs)``; the left side uses absolute excision.
    """
    if not -1.0 < beta < 0.0:
        raise ValueError("beta must lie in (-1, 0)")
    params = SPParams(0.5, 2.0)
    lhs, _ = frac_plap_pv(IntervalPower(beta, params), t, spec=spec)
    d = min(t, 1.0 - t)
    H, _ = appendix_b_eval(t)
    u = d ** beta
    rhs = beta * H * u + 2.0 * u / (t * (1.0 - t))
    return lhs, rhs, rhs - lhs


# --------------------------------------------------------------------------
# elementary inequalities


def picone_gap(p: float, a, b, c, d):
    """``|c - d|**p - J_p(a - b) (c**p / a**(p-1) - d**p / b**(p-1))``.

    Nonnegative for ``a, b > 0`` and ``c, d >= 0``; zero iff ``c/a = d/b``.
    Vectorised over array arguments.
    """
    a, b, c, d = (np.asarray(v, dtype=float) for v in (a, b, c, d))
    if np.any(a <= 0) or np.any(b <= 0) or np.any(c < 0) or np.any(d < 0):
        raise ValueError("need a, b > 0 and c, d >= 0")
    gap = np.abs(c - d) ** p - jp_array(p, a - b) * (c ** p / a ** (p - 1) - d ** p / b ** (p - 1))
    return float(gap) if gap.ndim == 0 else gap


def power_difference_bound_check(beta, tau):
    """Check ``|1 - tau**beta| <= |beta| m(tau) |1 - tau|`` where
    ``m = max(tau**(beta-1), 1)`` on ``(0, 1)`` and ``max(tau**beta, 1/tau)``
    for ``tau > 1``.  Vectorised; returns a bool or a bool array."""
    beta = np.asarray(beta, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(beta == 0) or np.any(tau <= 0) or np.any(tau == 1):
        raise ValueError("need beta != 0, tau > 0 and tau != 1")
    lhs = np.abs(-np.expm1(beta * np.log(tau)))
    m = np.where(tau < 1, np.maximum(tau ** (beta - 1.0), 1.0), np.maximum(tau ** beta, 1.0 / tau))
    rhs = np.abs(beta) * m * np.abs(1.0 - tau)
    ok = lhs <= rhs * (1.0 + 1e-13)
    return bool(ok) if ok.ndim == 0 else ok
