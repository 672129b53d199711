"""Sharp fractional Hardy inequalities on half-spaces and convex sets.

Modules
-------
quadrature
    Singular, improper and principal-value integration.
constants
    ``Lambda_{s,p}``, ``lambda(beta)``, ``C_{N,sp}`` and related constants.
geometry
    Convex domains and distance functions.
fracops
    The fractional ``p``-Laplacian of power profiles and pointwise checks.
rayleigh
    Gagliardo seminorms, Hardy quotients and ``p = 2`` finite elements.
multid
    Reductions from the half-space to the half-line.
cli
    The ``frac-hardy`` command.
"""

__version__ = "0.1.0"

from .constants import (  # noqa: E402
    SPParams,
    beta_star,
    c_nsp,
    lambda_beta,
    lambda_sp,
    sharp_hardy_constant,
)
from .geometry import Ball, HalfLine, HalfSpace, Interval, PolytopeH, dist  # noqa: E402
from .rayleigh import (  # noqa: E402
    CutoffPsi,
    Mesh1D,
    MeshedFunction,
    Profile1D,
    gagliardo_fullline,
    hardy_quotient,
    weighted_pnorm,
)

__all__ = [
    "__version__",
    "SPParams",
    "beta_star",
    "c_nsp",
    "lambda_beta",
    "lambda_sp",
    "sharp_hardy_constant",
    "Ball",
    "HalfLine",
    "HalfSpace",
    "Interval",
    "PolytopeH",
    "dist",
    "CutoffPsi",
    "Mesh1D",
    "MeshedFunction",
    "Profile1D",
    "gagliardo_fullline",
    "hardy_quotient",
    "weighted_pnorm",
]
