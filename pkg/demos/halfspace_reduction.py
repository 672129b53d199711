"""
From the half-line to the half-plane
====================================

Two facts move the one-dimensional constant up to higher dimensions.  A
slicing identity integrates the kernel over hyperplanes parallel to the
boundary and produces the factor ``C_{N,sp}``.  Separable trial functions
``chi(x'/M) eta(x_N)``, stretched along the boundary, then show that
``C_{N,sp} Lambda_{s,p}`` cannot be improved, because the error term decays
like ``M**-s``.
"""

import math

from frachardy.constants import SPParams, c_nsp, lambda_sp
from frachardy.multid import (
    cross_decay_slope,
    halfspace_product_terms,
    magic_identity_check,
    slice_integral,
)
from frachardy.rayleigh import CutoffPsi, Profile1D

params = SPParams(0.5, 2.0)

# The slicing identity for N = 2 and 3.
for N in (2, 3):
    C = c_nsp(N, params)
    for m in (0.5, 2.0):
        lhs = slice_integral(N, params, m)
        print(f"N = {N}, m = {m}: integral = {lhs:.12f}, C/m^(1+sp) = {C / m ** (1 + params.sp):.12f}, "
              f"residual {magic_identity_check(N, params, m):.1e}")
print(f"C_(3,sp) = {c_nsp(3, params):.12f}, 2 pi/(1+sp) = {2 * math.pi / (1 + params.sp):.12f}")

# Separable bound in the plane with a near-extremal eta.
eta = Profile1D.power_cutoff(params.beta_peak + 0.01, CutoffPsi())
chi = Profile1D.bump(-1.0, 1.0)
target = c_nsp(2, params) * lambda_sp(params)
print(f"\nC_(2,sp) Lambda_(s,p) = {target:.6f}")
print("        M        bound    limit (M -> inf)")
for M in (1.0, 4.0, 16.0, 100.0, 1e4):
    r = halfspace_product_terms(params, eta, chi, M)
    print(f"{M:9.0f}   {r.bound:10.6f}   {r.quotient:10.6f}")

slope = cross_decay_slope(params, Profile1D.power_cutoff(0.1), chi)
print(f"\nlog-log slope of the correction between M = 10 and 100: {slope:.4f} (expected -s = {-params.s})")
