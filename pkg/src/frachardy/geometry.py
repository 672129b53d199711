"""Convex domains and their distance-to-boundary functions.

Every domain returns ``dist(x) = 0`` outside its closure, so that
``dist(x)**beta`` guarded by ``dist > 0`` is the power of the distance
extended by zero.

Domains serialise to small JSON documents::

    {"type": "interval", "a": 0, "b": 1}
    {"type": "half_line", "origin": 0, "direction": 1}
    {"type": "half_space", "normal": [0, 1], "offset": 0}
    {"type": "ball", "center": [0, 0], "radius": 1}
    {"type": "polytope", "normals": [[...], ...], "offsets": [...]}

A half-space is ``{x : <normal, x> > offset}``; a polytope is
``{x : <a_i, x> < b_i for all i}`` with outward unit normals ``a_i``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy.optimize import linprog

__all__ = [
    "HalfLine",
    "Interval",
    "HalfSpace",
    "Ball",
    "PolytopeH",
    "ConvexDomain",
    "dist",
    "scale",
    "supporting_bound_check",
    "domain_from_dict",
    "domain_to_dict",
    "load_domain",
]


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not abs(n - 1.0) < 1e-12:
        raise ValueError(f"{name} must have unit length (got norm {n})")
    return v


@dataclass(frozen=True)
class HalfLine:
    """``{origin + direction * r : r > 0}`` with ``direction = +-1``."""

    origin: float = 0.0
    direction: int = 1

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    dimension = 1

    def dist(self, x):
        d = self.direction * (np.asarray(x, dtype=float) - self.origin)
        return np.maximum(d, 0.0)


@dataclass(frozen=True)
class Interval:
    """Open interval ``(a, b)``."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Interval needs a < b")

    dimension = 1

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def dist(self, x):
        x = np.asarray(x, dtype=float)
        return np.maximum(np.minimum(x - self.a, self.b - x), 0.0)


@dataclass(frozen=True)
class HalfSpace:
    """``{x : <normal, x> > offset}`` with a unit normal."""

    normal: tuple
    offset: float = 0.0

    def __post_init__(self):
        n = _unit(self.normal, "normal")
        object.__setattr__(self, "normal", tuple(float(c) for c in n))

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def dist(self, x):
        x = np.asarray(x, dtype=float)
        return np.maximum(x @ np.asarray(self.normal) - self.offset, 0.0)


@dataclass(frozen=True)
class Ball:
    """Open ball with the given center and radius."""

    center: tuple
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def dimension(self) -> int:
        return len(self.center)

    def dist(self, x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x - np.asarray(self.center), axis=-1)
        return np.maximum(self.radius - r, 0.0)


@dataclass(frozen=True)
class PolytopeH:
    """``{x : <a_i, x> < b_i}`` with outward unit normals ``a_i``.

    Redundant constraints are allowed.  The interior must be nonempty; this
    is checked with a small linear program (Chebyshev center).
    """

    normals: tuple
    offsets: tuple

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.normals, dtype=float))
        b = np.asarray(self.offsets, dtype=float).ravel()
        if A.shape[0] != b.shape[0]:
            raise ValueError("one offset per normal is required")
        for row in A:
            _unit(row, "normal")
        object.__setattr__(self, "normals", tuple(tuple(float(c) for c in row) for row in A))
        object.__setattr__(self, "offsets", tuple(float(c) for c in b))
        if self.inradius() <= 0:
            raise ValueError("polytope has empty interior")

    @property
    def dimension(self) -> int:
        return len(self.normals[0])

    @property
    def A(self) -> np.ndarray:
        return np.asarray(self.normals)

    @property
    def b(self) -> np.ndarray:
        return np.asarray(self.offsets)

    def chebyshev_center(self) -> tuple[np.ndarray, float]:
        """Largest inscribed ball, from ``max r s.t. <a_i, x> + r <= b_i``."""
        A, b = self.A, self.b
        n = A.shape[1]
        c = np.zeros(n + 1)
        c[-1] = -1.0
        res = linprog(c, A_ub=np.hstack([A, np.ones((len(b), 1))]), b_ub=b,
                      bounds=[(None, None)] * n + [(0, None)])
        if res.status == 3:
            return np.zeros(n), math.inf
        if not res.success:
            raise ValueError("polytope feasibility check failed")
        return res.x[:n], float(res.x[-1])

    def inradius(self) -> float:
        return self.chebyshev_center()[1]

    def dist(self, x):
        x = np.asarray(x, dtype=float)
        slack = self.b - x @ self.A.T
        return np.maximum(np.min(slack, axis=-1), 0.0)


ConvexDomain = Union[HalfLine, Interval, HalfSpace, Ball, PolytopeH]


def dist(domain: ConvexDomain, x):
    """Distance from ``x`` to the boundary of ``domain``; zero outside.

    ``x`` may be a single point or an array of points (last axis is the
    coordinate axis for ``N >= 2``).
    """
    d = domain.dist(x)
    return float(d) if np.ndim(d) == 0 else d


def scale(domain: ConvexDomain, mu: float) -> ConvexDomain:
    """The dilated domain ``mu * domain`` for ``mu > 0``."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    if isinstance(domain, HalfLine):
        return HalfLine(mu * domain.origin, domain.direction)
    if isinstance(domain, Interval):
        return Interval(mu * domain.a, mu * domain.b)
    if isinstance(domain, HalfSpace):
        return HalfSpace(domain.normal, mu * domain.offset)
    if isinstance(domain, Ball):
        return Ball(tuple(mu * c for c in domain.center), mu * domain.radius)
    if isinstance(domain, PolytopeH):
        return PolytopeH(domain.normals, tuple(mu * c for c in domain.offsets))
    raise TypeError(f"unknown domain {domain!r}")


def _supporting_plane(domain: ConvexDomain, x) -> tuple[np.ndarray, np.ndarray]:
    """Nearest boundary point of an interior ``x`` and the inner unit normal
    of a supporting hyperplane there."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(domain, HalfLine):
        return np.array([domain.origin]), np.array([float(domain.direction)])
    if isinstance(domain, Interval):
        if x[0] - domain.a <= domain.b - x[0]:
            return np.array([domain.a]), np.array([1.0])
        return np.array([domain.b]), np.array([-1.0])
    if isinstance(domain, HalfSpace):
        n = np.asarray(domain.normal)
        return x - (x @ n - domain.offset) * n, n
    if isinstance(domain, Ball):
        c = np.asarray(domain.center)
        v = x - c
        r = np.linalg.norm(v)
        u = v / r if r > 0 else np.eye(len(c))[0]
        return c + domain.radius * u, -u
    if isinstance(domain, PolytopeH):
        slack = domain.b - domain.A @ x
        i = int(np.argmin(slack))
        a = domain.A[i]
        return x + slack[i] * a, -a
    raise TypeError(f"unknown domain {domain!r}")


def supporting_bound_check(domain: ConvexDomain, x, samples) -> bool:
    """Check ``dist(y) <= <y - x_bar, nu>_+`` at every sample ``y``.

    ``x_bar`` is the boundary point nearest to ``x`` and ``nu`` the inner
    normal of the supporting hyperplane there; convexity puts the domain on
    one side of that hyperplane.
    """
    xb, nu = _supporting_plane(domain, x)
    if not dist(domain, x) > 0:
        raise ValueError("x must be an interior point")
    pts = np.asarray(samples, dtype=float)
    if domain.dimension == 1:
        pts = pts.reshape(-1, 1)
    d = np.atleast_1d(domain.dist(pts if domain.dimension > 1 else pts[:, 0]))
    plane = np.maximum((pts - xb) @ nu, 0.0)
    return bool(np.all(d <= plane + 1e-12 * (1.0 + np.abs(plane))))


# --------------------------------------------------------------------------
# JSON


def domain_to_dict(domain: ConvexDomain) -> dict:
    if isinstance(domain, HalfLine):
        return {"type": "half_line", "origin": domain.origin, "direction": domain.direction}
    if isinstance(domain, Interval):
        return {"type": "interval", "a": domain.a, "b": domain.b}
    if isinstance(domain, HalfSpace):
        return {"type": "half_space", "normal": list(domain.normal), "offset": domain.offset}
    if isinstance(domain, Ball):
        return {"type": "ball", "center": list(domain.center), "radius": domain.radius}
    if isinstance(domain, PolytopeH):
        return {"type": "polytope", "normals": [list(r) for r in domain.normals],
                "offsets": list(domain.offsets)}
    raise TypeError(f"unknown domain {domain!r}")


def domain_from_dict(doc: dict) -> ConvexDomain:
    kind = doc.get("type")
    if kind == "interval":
        return Interval(float(doc["a"]), float(doc["b"]))
    if kind == "half_line":
        return HalfLine(float(doc.get("origin", 0.0)), int(doc.get("direction", 1)))
    if kind == "half_space":
        return HalfSpace(tuple(doc["normal"]), float(doc.get("offset", 0.0)))
    if kind == "ball":
        return Ball(tuple(doc["center"]), float(doc["radius"]))
    if kind == "polytope":
        return PolytopeH(tuple(map(tuple, doc["normals"])), tuple(doc["offsets"]))
    raise ValueError(f"unknown domain type {kind!r}")


def load_domain(path) -> ConvexDomain:
    return domain_from_dict(json.loads(Path(path).read_text()))
