"""
Discrete upper bounds on an interval (p = 2)
============================================

For ``p = 2`` the Hardy constant of an interval equals the half-line
constant.  Piecewise-linear hat functions on a mesh span a subspace of the
admissible functions, so the smallest generalized eigenvalue of the
stiffness and weighted mass matrices bounds the constant from above.  The
minimising sequences pile up at the endpoints, so the meshes are graded.
"""

import numpy as np

from frachardy.constants import SPParams, lambda_sp
from frachardy.geometry import Interval
from frachardy.rayleigh import (
    Mesh1D,
    assemble_forms,
    discrete_hardy_upper_bound,
    hardy_quotient,
    random_meshed_functions,
)

unit = Interval(0.0, 1.0)

# A look at the mesh: nodes cluster like (i/n)**4 near both ends.
mesh = Mesh1D.graded(0.0, 1.0, 16, Mesh1D.default_grading(0.5))
print("first nodes of a 16-element graded mesh:", np.round(mesh.nodes[:5], 6))

K, Mw = assemble_forms(mesh, unit, 0.5)
print(f"matrix size {K.shape}, symmetric: {np.allclose(K, K.T)}, "
      f"smallest eigenvalue of K: {np.linalg.eigvalsh(K)[0]:.4f}")

# Refinement drives the smallest eigenvalue down toward Lambda_(s,2).
for s in (0.3, 0.5, 0.75):
    lam = lambda_sp(SPParams(s, 2.0))
    meshes = [Mesh1D.graded(0.0, 1.0, n, Mesh1D.default_grading(s)) for n in (32, 64, 128, 256)]
    ev = discrete_hardy_upper_bound(meshes, unit, s)
    trace = "  ".join(f"{v:.5f}" for v in ev)
    print(f"s = {s}: Lambda = {lam:.5f}   eigenvalues {trace}")

# Random nonnegative functions on the same meshes never beat the constant.
rng = np.random.default_rng(1)
s = 0.5
lam = lambda_sp(SPParams(s, 2.0))
mesh = Mesh1D.graded(0.0, 1.0, 32, Mesh1D.default_grading(s))
ratios = [hardy_quotient(f, unit, SPParams(s, 2.0)) / lam for f in random_meshed_functions(mesh, 200, rng)]
print(f"\n200 random functions, s = {s}: min quotient/Lambda = {min(ratios):.4f}, "
      f"median = {np.median(ratios):.4f}")
