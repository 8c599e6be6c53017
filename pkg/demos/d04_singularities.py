"""
Light-cone singularities
========================

Special points sit where phi' and psi' vanish and the zeta equation
degenerates.  Near one the surface looks like the cone u = z0 + delta r, and
the three product families show three different local pictures.
"""

from __future__ import annotations

from maxsurf.families import get_entry
from maxsurf.singular import classify, find_special_points, lightcone_fit, sector_census, tangent_check

for name in ("cncn", "sncn", "snsn"):
    e = get_entry(name, k=0.8, m=0.8)
    s = e.surface
    pts = find_special_points(s, e.window, fit=False)
    p = pts[0]
    cl = classify(s)
    census = sector_census(s, p, 1e-2, others=pts)
    print(f"{name}: {len(pts)} points per cell, {cl.type}, xi roots {cl.xi_roots}")
    print(f"  first point ({p.x0:.6f}, {p.y0:.6f}, {p.z0:.6f}), delta={p.delta}")
    print(f"  space-like / time-like sectors: {census.counts}")
    for f in lightcone_fit(s, p):
        print(f"  sheet {f.sheet}: C(r) = {', '.join(f'{c:.3e}' for c in f.C_by_radius)}")
    tc = tangent_check(s, p)
    print(f"  |grad u| = 1 branches at degrees {[round(a, 3) for a in tc.measured_deg]}")

# C(r) halves with r: the remainder after the cone term is cubic in r
