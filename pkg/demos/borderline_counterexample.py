"""
Negative powers of the distance on an interval
==============================================

On the half-line, ``t**beta`` is a supersolution for every admissible
exponent.  On the interval ``(0, 1)`` with ``s = 1/2`` and ``p = 2`` the
distance power ``d(t)**beta`` with ``beta < 0`` behaves differently: close to
the midpoint its fractional Laplacian becomes negative, so pointwise
superharmonicity fails there.  An explicit majorant ``beta H(t) u + 2u/(t(1-t))``
explains why, since ``H`` diverges logarithmically at the midpoint.
"""

import math

import numpy as np

from frachardy.constants import SPParams
from frachardy.fracops import (
    IntervalPower,
    appendix_b_claim_check,
    appendix_b_eval,
    frac_plap_pv,
)

beta = -0.25
profile = IntervalPower(beta, SPParams(0.5, 2.0))

print("     t      (-Delta)^(1/2) u      majorant        gap")
for t in (0.1, 0.25, 0.4, 0.45, 0.47, 0.48, 0.49, 0.495, 0.499):
    lhs, rhs, gap = appendix_b_claim_check(beta, t)
    print(f"{t:7.3f}   {lhs:16.6f}   {rhs:12.6f}   {gap:10.6f}")

# The principal value comes with its excision trace; successive partial
# integrals settle quickly away from the kink.
value, trace = frac_plap_pv(profile, 0.49)
print(f"\nPV at t = 0.49: {value:.10f}")
for eps, partial in trace[:4]:
    print(f"  eps = {eps:.2e}: partial = {partial:.10f}")

# H(t) + 4 log((1/2 - t)^2) stays bounded as t approaches 1/2.
print("\n  1/2 - t      H(t)       H(t) + 4 log((1/2-t)^2)")
for d in np.logspace(-1, -6, 6):
    H, _ = appendix_b_eval(0.5 - d)
    print(f"{d:9.1e}   {H:10.4f}   {H + 4 * math.log(d * d):10.6f}")
