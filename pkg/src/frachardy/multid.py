"""Ingredients for dimension ``N >= 2``.

Two reductions bring the ``N``-dimensional half-space problem down to the
half-line:

* the slicing identity

      int_{R^(N-1)} dy' / (m^2 + |x' - y'|^2)^((N+sp)/2) = C_{N,sp} / m^(1+sp),

  with ``C_{N,sp} = (N-1) omega_(N-1) I(N-2; sp)``, evaluated here by a
  radial reduction to one variable;
* separable trial functions ``phi(x', x_N) = chi_M(x') eta(x_N)`` in the
  plane, where ``chi_M(x') = chi(x'/M) / (M^(1/p) ||chi||_p)`` has unit
  ``L^p`` norm.  The seminorm of ``phi`` is at most

      ( C_{2,sp}^(1/p) [eta]  +  (c' ||eta||_p^p [chi]^p / ||chi||_p^p)^(1/p) M^-s )^p,

  where ``c' = 2 I(0; sp)`` integrates the kernel along the ``x_N``
  direction.  Dividing by ``int eta^p x^-sp`` gives a bound that tends to
  ``C_{2,sp}`` times the one-dimensional quotient of ``eta`` as ``M`` grows.

The full ``2N``-dimensional seminorm is never integrated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import SPParams, c_nsp, ik_alpha, omega
from .geometry import HalfLine
from .quadrature import QuadratureSpec, integrate_improper
from .rayleigh import Profile1D, _lp_norm_p, gagliardo_fullline, weighted_pnorm

__all__ = [
    "slice_integral",
    "magic_identity_check",
    "ProductQuotient",
    "halfspace_product_terms",
    "halfspace_product_quotient",
    "cross_decay_slope",
]

_SPEC = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=200)


def slice_integral(N: int, params: SPParams, m: float, spec: QuadratureSpec | None = None) -> float:
    """``int_{R^(N-1)} (m^2 + |z|^2)^(-(N+sp)/2) dz`` in polar coordinates."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if not m > 0:
        raise ValueError("m must be positive")
    spec = spec or _SPEC
    q = -0.5 * (N + params.sp)

    def f(r: float) -> float:
        return r ** (N - 2) * (m * m + r * r) ** q

    # decays like r^(-2-sp)
    v, _ = integrate_improper(f, 0.0, spec.with_exponents(0.0, params.sp), scale=m)
    return (N - 1) * omega(N - 1) * v


def magic_identity_check(N: int, params: SPParams, m: float,
                         spec: QuadratureSpec | None = None) -> float:
    """``|slice_integral - C_{N,sp} / m^(1+sp)|``."""
    lhs = slice_integral(N, params, m, spec)
    rhs = c_nsp(N, params, spec) / m ** (1.0 + params.sp)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class ProductQuotient:
    """Pieces of the separable bound in the plane.

    Attributes
    ----------
    quotient : float
        ``C_{2,sp} [eta]^p / int eta^p x^-sp``, the limit as ``M -> inf``.
    bound : float
        The bound at the given ``M``.
    cross : float
        The cross term ``c' ||eta||^p [chi]^p / (||chi||^p M^sp)`` divided by
        the weighted norm of ``eta``.
    """

    M: float
    quotient: float
    bound: float
    cross: float


def halfspace_product_terms(params: SPParams, eta: Profile1D, chi: Profile1D, M: float,
                            spec: QuadratureSpec | None = None, N: int = 2) -> ProductQuotient:
    """Separable bound for ``chi_M(x_1) eta(x_2)`` on the upper half-plane."""
    if N != 2:
        raise ValueError("only N = 2 is supported")
    if eta.support[0] < 0:
        raise ValueError("eta must be supported in (0, inf)")
    if chi.support[0] < -1 or chi.support[1] > 1:
        raise ValueError("chi must be supported in (-1, 1)")
    if not M > 0:
        raise ValueError("M must be positive")
    p, sp = params.p, params.sp
    den = weighted_pnorm(eta, HalfLine(), params, spec)
    leading = c_nsp(N, params) * gagliardo_fullline(eta, params, spec) / den
    c_cross = 2.0 * ik_alpha(0, N - 2 + sp)
    cross = (c_cross * _lp_norm_p(eta, params, spec or _SPEC) / _lp_norm_p(chi, params, spec or _SPEC)
             * gagliardo_fullline(chi, params, spec) / M ** sp / den)
    bound = (leading ** (1.0 / p) + cross ** (1.0 / p)) ** p
    return ProductQuotient(M, leading, bound, cross)


def halfspace_product_quotient(params: SPParams, eta: Profile1D, chi: Profile1D, M: float,
                               spec: QuadratureSpec | None = None, N: int = 2) -> tuple[float, float]:
    """``(C_{2,sp} * quotient of eta, bound at M)``; see
    :func:`halfspace_product_terms`."""
    r = halfspace_product_terms(params, eta, chi, M, spec, N)
    return r.quotient, r.bound


def cross_decay_slope(params: SPParams, eta: Profile1D, chi: Profile1D,
                      Ms=(10.0, 100.0), spec: QuadratureSpec | None = None) -> float:
    """Log-log slope of ``(bound^(1/p) - quotient^(1/p))`` in ``M``."""
    p = params.p
    ys = []
    for M in Ms:
        r = halfspace_product_terms(params, eta, chi, M, spec)
        ys.append(r.bound ** (1.0 / p) - r.quotient ** (1.0 / p))
    return (math.log(ys[1]) - math.log(ys[0])) / (math.log(Ms[1]) - math.log(Ms[0]))
