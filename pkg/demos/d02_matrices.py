"""
Generating matrices and their invariants
========================================

A 3x3 matrix encodes the coefficients of the three profile equations.  It is
usable when its derived matrix has rank one; then every row and column has
the same product (the module) and every row gives the same discriminant.
"""

from __future__ import annotations

import numpy as np

from maxsurf.genmat import (
    act,
    canonical_elliptic_form,
    classify_parabolic,
    discriminant,
    format_matrix,
    from_factors,
    is_generating,
    module_theta,
)
from maxsurf.families import snsn_matrix

A = np.array(snsn_matrix(0.64, 0.64), dtype=float)
print(format_matrix(A), end="")
print("generating:", is_generating(A))
print("module:", module_theta(A), " discriminant:", discriminant(A))

# rescaling the profiles acts on the matrix but keeps both invariants
B = act(2.0, 0.3, A)
print("after the action: module", module_theta(B), " discriminant", discriminant(B))

# elliptic matrices reduce to a one-sign normal form
cf = canonical_elliptic_form(A)
print("canonical a, b, c =", cf.a, cf.b, cf.c, " signs", cf.eps2, cf.eps3)

# random generating matrices come from six factors
rng = np.random.default_rng(1)
C = from_factors(*rng.uniform(-1, 1, 6))
print("random matrix generating:", is_generating(C))

# a matrix with a zero module falls into one of a few parabolic normal forms
print("parabolic form of the identity:", classify_parabolic(np.eye(3)).form)
