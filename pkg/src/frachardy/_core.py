"""Small numerical kernels shared by several modules."""

from __future__ import annotations

import math

import numpy as np


def jp_scalar(p: float, t: float) -> float:
    """Scalar ``|t|**(p-2) t``, written as ``sign(t) |t|**(p-1)`` so that
    ``t = 0`` is safe for ``p < 2``."""
    if t == 0.0:
        return 0.0
    return math.copysign(abs(t) ** (p - 1.0), t)


def jp_array(p: float, t):
    t = np.asarray(t, dtype=float)
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def pow1m(t: float, e: float) -> float:
    """``1 - t**e`` for ``t > 0`` without cancellation near ``t = 1``."""
    return -math.expm1(e * math.log(t))


def pow1m_gap(u: float, e: float) -> float:
    """``1 - (1 - u)**e`` for ``0 <= u < 1``, accurate for small ``u``."""
    return -math.expm1(e * math.log1p(-u))


def log_one_minus_pow(lt: float, e: float) -> tuple[float, float]:
    """Sign and log-magnitude of ``1 - t**e`` given ``lt = log t`` with
    ``0 < t < 1``; stays finite when ``t**e`` overflows."""
    if e == 0.0:
        return 0.0, -math.inf
    if e > 0.0:
        return 1.0, math.log(-math.expm1(e * lt))
    # 1 - t^e = -t^e (1 - t^-e)
    return -1.0, e * lt + math.log(-math.expm1(-e * lt))
