"""Singular, improper and principal-value quadrature on the real line.

The integrands met in this package have algebraic endpoint singularities
with exponents known in advance.  ``integrate_singular`` removes them with
the change of variables ``t = a + h w**k`` (``k = 1/(1 + alpha)``) before
handing the integral to QUADPACK's adaptive Gauss-Kronrod driver, and falls
back to a tanh-sinh rule when QUADPACK reports trouble.

Accuracy note: a singular endpoint is resolved exactly only when its
coordinate is representable near the singularity.  Callers that need full
relative accuracy close to a singular point ``b != 0`` should reflect the
integral so that the singular endpoint sits at the origin.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

__all__ = [
    "QuadratureSpec",
    "PVExcision",
    "QuadratureError",
    "NonIntegrableError",
    "PVDivergenceError",
    "integrate_singular",
    "integrate_improper",
    "principal_value",
    "tanh_sinh",
    "gauss_legendre",
    "gauss_jacobi",
]

Integrand = Callable[[float], float]


class QuadratureError(RuntimeError):
    """Quadrature failure; carries the partial estimate and its error."""

    def __init__(self, message: str, value: float = math.nan, err: float = math.inf):
        super().__init__(message)
        self.value = value
        self.err = err


class NonIntegrableError(ValueError):
    """A declared endpoint exponent makes the integral divergent."""


class PVDivergenceError(RuntimeError):
    """The excised integrals do not settle along the schedule."""

    def __init__(self, message: str, trace: list[tuple[float, float]], estimate: float = math.nan):
        super().__init__(message)
        self.trace = trace
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and declared endpoint behaviour of an integrand.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Target relative and absolute accuracy.
    max_subdivisions : int
        Maximum number of adaptive subintervals.
    left_exponent, right_exponent : float
        Algebraic orders ``alpha`` with ``f ~ (t - a)**alpha`` at the left
        end and ``f ~ (b - t)**alpha`` at the right end.  Zero means a
        regular endpoint.  For :func:`integrate_improper` the right exponent
        refers to the compactified variable, i.e. ``q - 2`` for ``f ~ t**-q``.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    left_exponent: float = 0.0
    right_exponent: float = 0.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def with_exponents(self, left: float = 0.0, right: float = 0.0) -> "QuadratureSpec":
        return replace(self, left_exponent=float(left), right_exponent=float(right))


@dataclass(frozen=True)
class PVExcision:
    """Excision schedule for a principal-value integral.

    ``mode="relative"`` removes ``((1 - eps) t0, (1 + eps) t0)``, while
    ``mode="absolute"`` removes ``(t0 - eps, t0 + eps)``.  The excised
    integrals are assumed to behave like
    ``I + sum_j c_j eps**(leading_order + 2 j)``, which is what Richardson
    extrapolation along the trace removes.
    """

    mode: str = "relative"
    epsilon_schedule: tuple[float, ...] = field(
        default_factory=lambda: tuple(0.1 * 2.0 ** -k for k in range(12))
    )
    leading_order: float = 1.0
    max_extrapolation: int = 4

    def __post_init__(self):
        if self.mode not in ("relative", "absolute"):
            raise ValueError("mode must be 'relative' or 'absolute'")
        eps = tuple(float(e) for e in self.epsilon_schedule)
        if len(eps) < 2:
            raise ValueError("the schedule needs at least two levels")
        if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])) or eps[-1] <= 0:
            raise ValueError("epsilon_schedule must be strictly decreasing and positive")
        if self.leading_order <= 0:
            raise ValueError("leading_order must be positive")
        object.__setattr__(self, "epsilon_schedule", eps)

    @classmethod
    def geometric(cls, mode: str = "relative", eps0: float = 0.1, levels: int = 12,
                  leading_order: float = 1.0) -> "PVExcision":
        """Schedule ``eps_k = eps0 * 2**-k`` for ``k < levels``."""
        return cls(mode, tuple(eps0 * 2.0 ** -k for k in range(levels)), leading_order)

    def widths(self, t0: float) -> np.ndarray:
        eps = np.asarray(self.epsilon_schedule)
        return eps * abs(t0) if self.mode == "relative" else eps


# --------------------------------------------------------------------------
# fixed rules

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_GJ_CACHE: dict[tuple[int, float, float], tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[0, 1]``."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def gauss_jacobi(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[0, 1]`` for the weight ``(1 - x)**alpha x**beta``."""
    from scipy.special import roots_jacobi

    key = (n, round(alpha, 15), round(beta, 15))
    if key not in _GJ_CACHE:
        x, w = roots_jacobi(n, alpha, beta)
        _GJ_CACHE[key] = (0.5 * (x + 1.0), w * 0.5 ** (1.0 + alpha + beta))
    return _GJ_CACHE[key]


def tanh_sinh(g: Integrand, tol: float = 1e-12, max_level: int = 9) -> tuple[float, float]:
    """Tanh-sinh rule for ``g`` on ``(0, 1)``; returns ``(value, err)``.

    Nodes that round onto an endpoint are dropped, so ``g`` is never
    evaluated at 0 or 1.
    """
    tmax = 4.0

    def level_sum(tau: np.ndarray) -> float:
        u = 0.5 * math.pi * np.sinh(tau)
        x = 1.0 / (1.0 + np.exp(-2.0 * u))
        w = 0.25 * math.pi * np.cosh(tau) / np.cosh(u) ** 2
        keep = (x > 0.0) & (x < 1.0) & (w > 0.0)
        return float(sum(wi * g(float(xi)) for xi, wi in zip(x[keep], w[keep])))

    h = 0.5
    total = level_sum(h * np.arange(-int(tmax / h), int(tmax / h) + 1))
    estimate, err = h * total, math.inf
    for _ in range(max_level):
        h *= 0.5
        k = np.arange(1, int(tmax / h) + 1, 2)
        total += level_sum(h * np.concatenate([-k[::-1], k]))
        new = h * total
        err = abs(new - estimate)
        estimate = new
        if err <= tol * max(1.0, abs(new)):
            break
    return estimate, err


# --------------------------------------------------------------------------
# adaptive drivers


def _check_exponent(alpha: float, where: str) -> None:
    if not alpha > -1.0:
        raise NonIntegrableError(f"non-integrable endpoint: {where} exponent {alpha} <= -1")


def _stretch(alpha: float) -> float:
    # power k in t = a + h w^k; k (1 + alpha) = 1 flattens the singularity.
    # Capped so that w^k does not underflow for exponents close to -1.
    return min(1.0 / (1.0 + alpha), 24.0) if alpha < 0 else 1.0


def _mapped(f: Integrand, origin: float, h: float, k: float, sign: float) -> Integrand:
    """``w -> h k w^(k-1) f(origin + sign h w^k)``, zero where the node
    collapses onto the singular endpoint."""
    if k == 1.0:
        return lambda w: h * f(origin + sign * h * w)

    def g(w: float) -> float:
        wk = w ** k
        t = origin + sign * h * wk
        if wk < 1e-300 or t == origin:
            return 0.0
        return h * k * (wk / w) * f(t)

    return g


def _adaptive(g: Integrand, spec: QuadratureSpec) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(g, 0.0, 1.0, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=spec.max_subdivisions, full_output=1)
    value, err, ier = out[0], out[1], (out[3] if len(out) > 3 else None)
    if ier is None and math.isfinite(value):
        return value, err
    # QUADPACK stalled: try the double-exponential rule
    try:
        v2, e2 = tanh_sinh(g, tol=spec.rel_tol)
    except (OverflowError, ZeroDivisionError, FloatingPointError):
        v2, e2 = math.nan, math.inf
    target = max(spec.abs_tol, spec.rel_tol * abs(v2)) if math.isfinite(v2) else 0.0
    if math.isfinite(v2) and e2 <= 10 * target:
        return v2, e2
    if math.isfinite(value) and err <= max(spec.abs_tol, spec.rel_tol * abs(value)):
        return value, err
    raise QuadratureError("quadrature failure", value=value, err=err)


def integrate_singular(f: Integrand, a: float, b: float,
                       spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Integrate ``f`` over ``(a, b)`` with declared endpoint singularities.

    Parameters
    ----------
    f : callable
        Scalar integrand; never evaluated at a singular endpoint.
    a, b : float
        Finite limits with ``a < b``.
    spec : QuadratureSpec, optional
        Tolerances and endpoint exponents.

    Returns
    -------
    value, err : float
        The integral and an error estimate.

    Raises
    ------
    NonIntegrableError
        If a declared exponent is ``<= -1``.
    QuadratureError
        If neither the adaptive rule nor the tanh-sinh fallback converges.
    """
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError("integrate_singular needs finite a < b")
    la, ra = spec.left_exponent, spec.right_exponent
    _check_exponent(la, "left")
    _check_exponent(ra, "right")
    kl, kr = _stretch(la), _stretch(ra)

    if kr == 1.0:
        return _adaptive(_mapped(f, a, b - a, kl, 1.0), spec)
    if kl == 1.0:
        return _adaptive(_mapped(f, b, b - a, kr, -1.0), spec)
    h = 0.5 * (b - a)
    v1, e1 = _adaptive(_mapped(f, a, h, kl, 1.0), spec)
    v2, e2 = _adaptive(_mapped(f, b, h, kr, -1.0), spec)
    return v1 + v2, e1 + e2


def integrate_improper(f: Integrand, a: float, spec: QuadratureSpec | None = None,
                       scale: float = 1.0) -> tuple[float, float]:
    """Integrate ``f`` over ``(a, inf)``.

    The half-line is compactified by ``t - a = u/(1 - u)``.  The part
    ``u < 1/2`` (``t < a + scale``) is integrated directly with the declared
    left exponent; on ``u > 1/2`` the complementary variable
    ``v = (1 - u)/u = scale/(t - a)`` is used so that points near infinity
    stay exact.  ``spec.right_exponent`` is the exponent of the compactified
    integrand at ``v = 0``; for ``f ~ t**-q`` it is ``q - 2``.
    """
    spec = spec or QuadratureSpec()
    if not math.isfinite(a):
        raise ValueError("lower limit must be finite")
    _check_exponent(spec.left_exponent, "left")
    _check_exponent(spec.right_exponent, "infinite")
    c = float(scale)
    v1, e1 = integrate_singular(f, a, a + c, spec.with_exponents(spec.left_exponent, 0.0))

    def g(v: float) -> float:
        return c * f(a + c / v) / (v * v)

    v2, e2 = integrate_singular(g, 0.0, 1.0, spec.with_exponents(spec.right_exponent, 0.0))
    return v1 + v2, e1 + e2


def _richardson(partials: Sequence[float], orders: Sequence[float], jmax: int) -> list[float]:
    """Return the most extrapolated estimate available at every level."""
    table: list[list[float]] = []
    best = []
    for k, value in enumerate(partials):
        row = [value]
        for j in range(1, min(k, jmax) + 1):
            factor = 2.0 ** orders[j - 1]
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (factor - 1.0))
        table.append(row)
        best.append(row[-1])
    return best


_EPS = float(np.finfo(float).eps)


def principal_value(f: Integrand, t0: float, a: float, b: float,
                    excision: PVExcision | None = None,
                    spec: QuadratureSpec | None = None,
                    base: float | None = None) -> tuple[float, list[tuple[float, float]]]:
    """Principal value of ``f`` about ``t0`` on ``(a, b)``.

    The integral outside the widest excision is computed once; the rings
    ``w_k < |t - t0| < w_{k-1}`` are added with a 20-point Gauss rule on the
    symmetrised integrand ``f(t0 + r) + f(t0 - r)``.  The trace of excised
    integrals is then extrapolated.

    Parameters
    ----------
    f : callable
        Integrand, smooth on ``(a, b)`` away from ``t0``.
    t0 : float
        Singular point, ``a < t0 < b``.
    a, b : float
        Limits; ``b`` may be ``inf``.
    excision : PVExcision, optional
        Excision convention and schedule.
    spec : QuadratureSpec, optional
        Tolerances; ``left_exponent`` applies at ``a`` and ``right_exponent``
        at ``b`` (compactified exponent if ``b`` is infinite).
    base : float, optional
        Precomputed integral outside the widest excision.

    Returns
    -------
    value : float
        Extrapolated principal value.
    trace : list of (eps, partial)
        Excised integrals along the schedule, up to the level where the
        extrapolated values first agree.

    Raises
    ------
    PVDivergenceError
        If successive extrapolated values do not agree to ``spec.rel_tol``.
    """
    excision = excision or PVExcision()
    spec = spec or QuadratureSpec()
    if not a < t0 < b:
        raise ValueError("t0 must lie strictly inside (a, b)")
    widths = excision.widths(t0)
    if t0 - widths[0] <= a or t0 + widths[0] >= b:
        raise ValueError("the widest excision does not fit inside (a, b)")

    if base is None:
        left, _ = integrate_singular(f, a, t0 - widths[0], spec.with_exponents(spec.left_exponent, 0.0))
        if math.isinf(b):
            right, _ = integrate_improper(f, t0 + widths[0],
                                          spec.with_exponents(0.0, spec.right_exponent),
                                          scale=max(1.0, abs(t0)))
        else:
            right, _ = integrate_singular(f, t0 + widths[0], b,
                                          spec.with_exponents(0.0, spec.right_exponent))
        base = left + right

    x, w = gauss_legendre(20)
    eps = list(excision.epsilon_schedule)
    orders = [excision.leading_order + 2.0 * j for j in range(excision.max_extrapolation)]
    partials = [base]
    best = [base]
    value = math.nan
    noise = 0.0
    for k in range(1, len(widths)):
        lo, hi = widths[k], widths[k - 1]
        r = lo + (hi - lo) * x
        fr = np.array([(f(t0 + ri), f(t0 - ri)) for ri in r])
        partials.append(partials[-1] + (hi - lo) * float(w @ fr.sum(axis=1)))
        # rounding floor: the two sides cancel, and the arguments t0 +- r
        # carry a relative error of order |t0| / r
        noise += _EPS * (hi - lo) * float(w @ np.abs(fr).sum(axis=1)) * (1.0 + abs(t0) / lo)
        best = _richardson(partials, orders, excision.max_extrapolation)
        # stop at the first agreement: rounding in the rings grows as the
        # excision shrinks and extrapolation amplifies it
        tol = max(spec.rel_tol * max(abs(best[-1]), max(abs(v) for v in partials)),
                  spec.abs_tol, 16.0 * noise)
        if k >= 2 and abs(best[-1] - best[-2]) <= tol:
            value = best[-1]
            break
    trace = list(zip(eps, partials))
    if math.isnan(value):
        raise PVDivergenceError("PV divergence", trace, estimate=best[-1])
    return value, trace
