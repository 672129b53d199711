"""
The half-line constant and the family lambda(beta)
==================================================

Powers ``t**beta`` on the half-line are exact solutions of the fractional
p-Laplace equation with a Hardy potential, and the coefficient in front of
the potential is ``lambda(beta)``.  This script tabulates that coefficient,
locates its maximum and its negative root, and checks the reflection
symmetry that holds for ``p = 2``.
"""

import numpy as np

from frachardy.constants import SPParams, beta_star, lambda_beta, lambda_sp

# Pick a pair (s, p).  The admissible exponents form the open interval
# (-1/(p-1), sp/(p-1)); lambda is positive between its two roots.
params = SPParams(0.6, 3.0)
print(f"s = {params.s}, p = {params.p}")
print(f"admissible beta range: ({params.beta_min:.4f}, {params.beta_max:.4f})")

betas = np.linspace(params.beta_min, params.beta_max, 14)[1:-1]
print("\n   beta      lambda(beta)")
for b in betas:
    print(f"{b:8.4f}   {lambda_beta(params, b):12.6f}")

# The maximum sits at (sp - 1)/p and equals the sharp half-line constant.
b0 = params.beta_peak
print(f"\npeak at (sp-1)/p = {b0:.4f}: lambda = {lambda_beta(params, b0):.12f}")
print(f"Lambda_(s,p)               = {lambda_sp(params):.12f}")

# The two roots: beta = s always, and a negative root found by bracketing.
print(f"\nlambda(s)  = {lambda_beta(params, params.s):.2e}")
print(f"beta_star  = {beta_star(params):.12f}")

# For p = 2 the curve is symmetric about s - 1/2, so beta_star = s - 1.
quad = SPParams(0.3, 2.0)
print(f"\np = 2, s = 0.3: beta_star = {beta_star(quad):.12f}  (s - 1 = {quad.s - 1:.1f})")
for b in (-0.6, -0.3, 0.1):
    mirror = 2 * quad.s - 1 - b
    print(f"lambda({b:+.2f}) = {lambda_beta(quad, b):.10f}   "
          f"lambda({mirror:+.2f}) = {lambda_beta(quad, mirror):.10f}")

# At sp = 1 the constant is exactly 2, whatever p is.
for p in (1.5, 2.0, 4.0):
    print(f"sp = 1, p = {p}: Lambda = {lambda_sp(SPParams(1.0 / p, p)):.15f}")
