"""
The catalog of examples
=======================

Every entry carries its expected periods, singular lattice, causal
character and sector counts.  verify_entry recomputes all of them.
"""

from __future__ import annotations

from maxsurf.families import build_catalog, verify_entry

for e in build_catalog():
    rep = verify_entry(e)
    print(f"{e.name:<14} {e.title}")
    print(f"{'':<14} {len(rep.items)} checks, {'ok' if rep.ok else 'FAILED'}")
