"""
Jacobi elliptic functions from the AGM
======================================

The profiles behind every surface in the catalog are Jacobi functions.
They are computed here with the arithmetic-geometric mean and a descending
Landen recurrence, then checked against scipy.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from maxsurf.elliptic import complete_K, incomplete_F, jacobi_sn_cn_dn

# the quarter period K(k) for a few moduli
for k in (0.1, 0.5, 0.8, 0.99):
    print(f"k={k:<5} K={complete_K(k):.15f}  scipy={special.ellipk(k * k):.15f}")

# sn, cn, dn on a quarter period and the two Pythagorean identities
k = 0.8
t = np.linspace(0.0, complete_K(k), 7)
sn, cn, dn = jacobi_sn_cn_dn(t, k)
print("max |sn^2 + cn^2 - 1|      =", np.max(np.abs(sn**2 + cn**2 - 1)))
print("max |dn^2 + k^2 sn^2 - 1|  =", np.max(np.abs(dn**2 + k * k * sn**2 - 1)))

# F inverts sn on (0, K)
print("max |F(sn(t)) - t|         =", np.max(np.abs(incomplete_F(sn, k) - t)))
