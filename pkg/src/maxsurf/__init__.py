"""Maximal surfaces in Minkowski space given implicitly by ``zeta(z) = phi(x) psi(y)``.

Modules:

``elliptic``  Jacobi ``sn, cn, dn`` and ``K`` (AGM), with a quadrature oracle.
``genmat``    generating matrices: invariants, group action, normal forms.
``profiles``  closed-form solutions of ``f'^2 = a - 2 b f^2 + c f^4``.
``surface``   implicit evaluation, derivatives, PDE residuals, periods.
``singular``  light-cone points, their types, and ``|grad u| = 1`` curves.
``families``  the catalog of concrete surfaces.
"""
from __future__ import annotations

from .families import CATALOG_NAMES, build_catalog, get_entry, verify_entry
from .genmat import GeneratingMatrix, is_generating
from .surface import ImplicitSurface, build_from_matrix, evaluate, evaluate_grid

__all__ = [
    "CATALOG_NAMES",
    "GeneratingMatrix",
    "ImplicitSurface",
    "build_catalog",
    "build_from_matrix",
    "evaluate",
    "evaluate_grid",
    "get_entry",
    "is_generating",
    "verify_entry",
]
__version__ = "0.1.0"
