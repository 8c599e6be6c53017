"""Catalog of the concrete surfaces: product families and their relatives.

Each entry is built with its parameters and carries the metadata the surface
is expected to have (type, discriminant, periods, singular lattice, ...).
:func:`verify_entry` recomputes everything and diffs it against that.

The matrix builders take squared moduli and use only field operations, so
they also accept ``fractions.Fraction`` for exact checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .elliptic import complete_K
from .genmat import (
    DEFAULT_TOL,
    discriminant,
    is_elliptic,
    is_generating,
    module_theta,
)
from .profiles import QuarticCoeffs, solve_profile
from .singular import (
    EXPECTED_CENSUS,
    classify,
    find_special_points,
    sector_census,
    trace_unit_gradient_levelset,
)
from .surface import (
    NULL_BAND,
    ImplicitSurface,
    RadialRHS,
    SumRHS,
    build_from_matrix,
    evaluate_grid,
    periods,
)

__all__ = [
    "CatalogEntry",
    "Expected",
    "Lattice",
    "VerificationReport",
    "CATALOG_NAMES",
    "snsn_matrix",
    "cncn_matrix",
    "sncn_matrix",
    "tanh_matrix",
    "sinsin1_matrix",
    "one_periodic_matrix",
    "build_catalog",
    "get_entry",
    "verify_entry",
]


class ParameterError(ValueError):
    """Catalog parameter outside its admissible range."""


@dataclass(frozen=True)
class Lattice:
    """Points ``(x_off + i x_step, y_off + j y_step)``; a None step means a single value."""

    x_off: float
    x_step: float | None
    y_off: float
    y_step: float | None

    def points(self, window) -> list[tuple[float, float]]:
        """Lattice points in the half-open window ``[x0, x1) x [y0, y1)``."""
        xa, xb, ya, yb = window
        return [(x, y) for x in _axis(self.x_off, self.x_step, xa, xb) for y in _axis(self.y_off, self.y_step, ya, yb)]


def _axis(off, step, lo, hi):
    if step is None:
        return [off] if lo <= off < hi else []
    i0 = math.ceil((lo - off) / step - 1e-12)
    out = []
    i = i0
    while off + i * step < hi - 1e-12 * max(1.0, abs(hi)):
        out.append(off + i * step)
        i += 1
    return out


@dataclass(frozen=True)
class Expected:
    type: str | None = None
    discriminant: float | None = None
    periods: tuple[float | None, float | None] = (None, None)
    lattice: tuple[Lattice, ...] = ()
    census: tuple[int, int] | None = None
    slab_bound: float | None = None
    causal: str | None = None  # "space-like", "weakly-space-like" or "mixed"
    rotational: bool = False


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    title: str
    params: dict
    ranges: dict
    surface: ImplicitSurface
    expected: Expected
    window: tuple[float, float, float, float]
    display_matrix: np.ndarray | None = None


# -- displayed matrices --------------------------------------------------


def snsn_matrix(k2, m2):
    """Generating matrix of ``sn(lam z; km) = sn(x/k'; k) sn(y/m'; m)``."""
    kp2, mp2 = 1 - k2, 1 - m2
    l2 = 1 / (1 - k2 * m2)
    return [
        [1 / kp2, l2 * kp2 * m2 / mp2, k2 / kp2],
        [1 / mp2, l2 * k2 * mp2 / kp2, m2 / mp2],
        [l2 * k2 * m2, 1 / (l2 * kp2 * mp2), l2],
    ]


def cncn_matrix(k2, m2):
    """Generating matrix of ``sn(lam z; km) = cn(x; k/sqrt(1+k^2)) cn(y; m/sqrt(1+m^2))``."""
    l2 = 1 / (1 - k2 * m2)
    return [
        [1 / (1 + k2), -(1 + k2) * m2 * l2 / (1 + m2), -k2 / (1 + k2)],
        [1 / (1 + m2), -(1 + m2) * k2 * l2 / (1 + k2), -m2 / (1 + m2)],
        [k2 * m2 * l2, 1 / (l2 * (1 + k2) * (1 + m2)), l2],
    ]


def sncn_matrix(k2, m2):
    """Generating matrix of ``cn(z; mu k m) = sn(x/k'; k) cn(y; m)``."""
    kp2, mp2 = 1 - k2, 1 - m2
    mu2 = 1 / (1 - kp2 * m2)
    return [
        [1 / kp2, -kp2 * mp2 * m2 * mu2, k2 / kp2],
        [mp2, k2 * mu2 / kp2, -m2],
        [-k2 * m2 * mu2, 1 / (kp2 * mu2), mp2 * mu2],
    ]


def tanh_matrix():
    """``tanh x tanh y = tanh(z / sqrt 2)``."""
    h = 1 / 2
    return [[1, h, 1], [1, h, 1], [h, 2, h]]


def sinsin1_matrix():
    """``sin z = sin x sin y``."""
    return [[1, 0, 0], [1, 0, 0], [0, 1, 1]]


def one_periodic_matrix(alpha2, a2=1):
    """``sn(a z / alpha'; alpha) = cos(a x) / cosh(a y)``, squared parameters."""
    ap2 = 1 - alpha2
    a = [a2, 0, a2 * alpha2 / ap2]
    b = [a2 / 2, -a2 / 2, -a2 * (1 + alpha2) / (2 * ap2)]
    c = [0, -a2, a2 / ap2]
    return [[a[i], b[(i + 1) % 3] + b[(i + 2) % 3], c[i]] for i in range(3)]


# -- builders ------------------------------------------------------------


def _check(name, value, lo, hi):
    if not (lo < value < hi):
        raise ParameterError(f"{name}={value!r} outside ({lo}, {hi})")


def _cell(T1, T2, yspan=(-2.0, 2.0), xspan=(-2.0, 2.0)):
    x = (-T1 / 8, 7 * T1 / 8) if T1 else xspan
    y = (-T2 / 8, 7 * T2 / 8) if T2 else yspan
    return (x[0], x[1], y[0], y[1])


def _snsn(k=0.8, m=0.8):
    _check("k", k, 0, 1)
    _check("m", m, 0, 1)
    A = np.array(snsn_matrix(k * k, m * m), dtype=float)
    s = build_from_matrix(A, name="snsn")
    kp, mp = math.sqrt(1 - k * k), math.sqrt(1 - m * m)
    a, b = kp * complete_K(k), mp * complete_K(m)
    exp = Expected("Type3", 0.25, (4 * a, 4 * b), (Lattice(a, 2 * a, b, 2 * b),), EXPECTED_CENSUS["Type3"], causal="mixed")
    return s, exp, A


def _cncn(k=0.8, m=0.8):
    _check("k", k, 0, 1)
    _check("m", m, 0, 1)
    A = np.array(cncn_matrix(k * k, m * m), dtype=float)
    s = build_from_matrix(A, inits=("turning", "turning", None), deltas=(-1, -1, None), name="cncn")
    a = 2 * complete_K(k / math.sqrt(1 + k * k))
    b = 2 * complete_K(m / math.sqrt(1 + m * m))
    exp = Expected("Type1", 0.25, (2 * a, 2 * b), (Lattice(0.0, a, 0.0, b),), EXPECTED_CENSUS["Type1"], causal="space-like")
    return s, exp, A


def _sncn(k=0.8, m=0.8):
    _check("k", k, 0, 1)
    _check("m", m, 0, 1)
    A = np.array(sncn_matrix(k * k, m * m), dtype=float)
    s = build_from_matrix(A, inits=(None, "turning", "turning"), name="sncn")
    a = math.sqrt(1 - k * k) * complete_K(k)
    b = 2 * complete_K(m)
    exp = Expected("Type2", 0.25, (4 * a, 2 * b), (Lattice(a, 2 * a, 0.0, b),), EXPECTED_CENSUS["Type2"], causal="mixed")
    return s, exp, A


def _tanh():
    A = np.array(tanh_matrix(), dtype=float)
    s = build_from_matrix(A, name="tanh-scherk")
    return s, Expected(None, 0.0, (None, None), (), causal="mixed"), A


def _sinsin1():
    A = np.array(sinsin1_matrix(), dtype=float)
    s = build_from_matrix(A, inits=("zero", "zero", "zero"), name="sinsin1")
    h = 0.5 * math.pi
    exp = Expected("Degenerate", 0.25, (2 * math.pi, 2 * math.pi), (Lattice(h, math.pi, h, math.pi),), causal="weakly-space-like")
    return s, exp, A


def _one_periodic(alpha=0.6, a=1.0):
    _check("alpha", alpha, 0, 1)
    if not (a > 0 and math.isfinite(a)):
        raise ParameterError(f"a={a!r} must be positive")
    A = np.array(one_periodic_matrix(alpha * alpha, a * a), dtype=float)
    s = build_from_matrix(A, inits=("turning", "turning", "zero"), name="one-periodic")
    ap = math.sqrt(1 - alpha * alpha)
    exp = Expected(
        "Type1",
        a**4 / 4,
        (2 * math.pi / a, None),
        (Lattice(0.0, math.pi / a, 0.0, None),),
        EXPECTED_CENSUS["Type1"],
        slab_bound=complete_K(alpha) * ap / a,
        causal="space-like",
    )
    return s, exp, A


def _sinsin(alpha=0.25):
    _check("alpha", alpha, 0, 1)
    b = 1 - alpha
    f = solve_profile(QuarticCoeffs(alpha, 1 / (2 * alpha), 0.0), "zero")
    g = solve_profile(QuarticCoeffs(b, 1 / (2 * b), 0.0), "zero")
    zeta = solve_profile(QuarticCoeffs(1.0, 0.5, 0.0), "zero")
    s = ImplicitSurface(zeta, SumRHS(f, g), name="sinsin")
    sa, sb = math.sqrt(alpha), math.sqrt(b)
    Tx, Ty = 2 * math.pi * sa, 2 * math.pi * sb
    # |G| = 1 needs both sines at the same extreme
    lat = (Lattice(0.25 * Tx, Tx, 0.25 * Ty, Ty), Lattice(0.75 * Tx, Tx, 0.75 * Ty, Ty))
    return s, Expected(None, None, (Tx, Ty), lat, causal="weakly-space-like"), None


def _catenoid():
    zeta = solve_profile(QuarticCoeffs(1.0, -0.5, 0.0), "zero")
    s = ImplicitSurface(zeta, RadialRHS(), name="catenoid")
    return s, Expected(None, None, (None, None), (Lattice(0.0, None, 0.0, None),), (1, 0), causal="space-like", rotational=True), None


_BUILDERS: dict[str, tuple[str, Callable, dict]] = {
    "snsn": ("sn(lam z; km) = sn(x/k'; k) sn(y/m'; m)", _snsn, {"k": (0, 1), "m": (0, 1)}),
    "sncn": ("cn(z; mu km) = sn(x/k'; k) cn(y; m)", _sncn, {"k": (0, 1), "m": (0, 1)}),
    "cncn": ("sn(lam z; km) = cn(x; k~) cn(y; m~)", _cncn, {"k": (0, 1), "m": (0, 1)}),
    "tanh-scherk": ("tanh x tanh y = tanh(z / sqrt 2)", _tanh, {}),
    "one-periodic": ("sn(a z / alpha'; alpha) = cos(a x) / cosh(a y)", _one_periodic, {"alpha": (0, 1), "a": (0, math.inf)}),
    "sinsin": ("sin z = alpha sin(x/sqrt(alpha)) + (1-alpha) sin(y/sqrt(1-alpha))", _sinsin, {"alpha": (0, 1)}),
    "sinsin1": ("sin z = sin x sin y", _sinsin1, {}),
    "catenoid": ("sinh(z)^2 = x^2 + y^2", _catenoid, {}),
}
CATALOG_NAMES = tuple(_BUILDERS)


def get_entry(name: str, **params) -> CatalogEntry:
    """Build one catalog entry; unknown names and bad parameters raise ``ValueError``."""
    try:
        title, builder, ranges = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    unknown = set(params) - set(ranges)
    if unknown:
        raise ParameterError(f"{name} has no parameter(s) {sorted(unknown)}")
    s, exp, A = builder(**params)
    defaults = {k: v.default for k, v in _signature_defaults(builder).items()}
    defaults.update(params)
    T1, T2 = exp.periods
    yspan = (-2.0, 2.0)
    window = _cell(T1, T2, yspan)
    return CatalogEntry(name, title, defaults, ranges, s, exp, window, A)


def _signature_defaults(fn):
    import inspect

    return {k: p for k, p in inspect.signature(fn).parameters.items() if p.default is not inspect.Parameter.empty}


def build_catalog() -> list[CatalogEntry]:
    """Every catalog surface at its default parameters."""
    return [get_entry(name) for name in CATALOG_NAMES]


# -- verification --------------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    items: list = field(default_factory=list)

    def add(self, check: str, passed: bool, detail: str = "") -> None:
        self.items.append((check, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.items)

    @property
    def failures(self) -> list:
        return [it for it in self.items if not it[1]]

    def format(self) -> str:
        lines = [f"entry={self.name}"]
        for check, passed, detail in self.items:
            lines.append(f"{'PASS' if passed else 'FAIL'} {check}" + (f": {detail}" if detail else ""))
        lines.append(f"result={'ok' if self.ok else 'failed'}")
        return "\n".join(lines)


def _near_any(X, Y, pts, r):
    mask = np.zeros(X.shape, dtype=bool)
    for x0, y0 in pts:
        mask |= np.hypot(X - x0, Y - y0) < r
    return mask


def verify_entry(e: CatalogEntry, grid_n: int = 50, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Run the invariant battery on ``e`` and compare with its expected metadata."""
    rep = VerificationReport(e.name)
    s, exp = e.surface, e.expected
    A = e.display_matrix

    if A is not None:
        rep.add("generating", is_generating(A, tol))
        D = discriminant(A, tol)
        if exp.discriminant is not None:
            rep.add("discriminant", abs(D - exp.discriminant) <= 1e-12 * max(1.0, abs(exp.discriminant)), f"{D:.17g}")
        th = module_theta(A, tol)
        rep.add("theta", math.isfinite(th) and is_elliptic(A, tol) == (abs(th) > tol), f"{th:.17g}")

    # residual and self-consistency on the sample window
    xa, xb, ya, yb = e.window
    xs = np.linspace(xa, xb, grid_n)
    ys = np.linspace(ya, yb, grid_n)
    expected_pts = [p for lat in exp.lattice for p in lat.points((xa - 1, xb + 1, ya - 1, yb + 1))]
    g = evaluate_grid(s, xs, ys)
    X, Y = np.meshgrid(xs, ys)
    keep = ~_near_any(X, Y, expected_pts, 1e-2) & ~g.failed
    res = np.abs(g.residual[keep])
    rmax = float(np.max(res)) if res.size else 0.0
    rep.add("pde-residual", np.all(np.isfinite(res)) and rmax <= 1e-8, f"max={rmax:.3e}")
    G = s.rhs.value(X, Y)
    imp = np.abs(s.zeta.value(np.where(g.failed, 0.0, g.z)) - G)[~g.failed]
    rep.add("implicit-consistency", float(np.max(imp)) <= 1e-11, f"max={float(np.max(imp)):.3e}")
    rep.add("evaluation", not g.failed.any(), f"failed={int(g.failed.sum())}")

    # periods
    T = periods(s)
    match = all(
        (a is None and b is None) or (a is not None and b is not None and abs(a - b) <= 1e-9 * max(1.0, b))
        for a, b in zip(T, exp.periods)
    )
    rep.add("periods", match, f"{T}")
    Xc, Yc = X + 0.5 * (xs[1] - xs[0]), Y + 0.5 * (ys[1] - ys[0])
    u0 = s.u(Xc, Yc)
    for axis, Ti in enumerate(T):
        if Ti is None:
            continue
        u1 = s.u(Xc + Ti, Yc) if axis == 0 else s.u(Xc, Yc + Ti)
        d = float(np.nanmax(np.abs(u1 - u0)))
        rep.add(f"periodicity-{'xy'[axis]}", d <= 1e-9, f"max={d:.3e}")

    # singular points
    pts = find_special_points(s, e.window)
    pts = [p for p in pts if p.x0 < xb - 1e-12 and p.y0 < yb - 1e-12]
    want = [p for lat in exp.lattice for p in lat.points(e.window)]
    found = sorted((p.x0, p.y0) for p in pts)
    ok = len(found) == len(want) and all(
        min(math.hypot(x - wx, y - wy) for wx, wy in want) <= 1e-9 for x, y in found
    )
    rep.add("singular-lattice", ok, f"found={len(found)} expected={len(want)}")
    for p in pts:
        c = p.checks
        deriv_ok = max(c.get("dphi", 0.0), c.get("dpsi", 0.0), c.get("dzeta", 0.0)) <= 1e-9
        mm_ok = max(c.get("mmmm_phi", 0.0), c.get("mmmm_psi", 0.0)) <= 1e-8
        D_ok = c.get("discriminant", 1.0) > 0
        rep.add(f"special({p.x0:.6g},{p.y0:.6g})", deriv_ok and mm_ok and D_ok, f"z0={p.z0:.17g} delta={p.delta} type={p.type}")
    if exp.type is not None and s.matrix is not None:
        try:
            cl = classify(s)
            rep.add("type", cl.type == exp.type, cl.type)
        except ValueError as err:
            rep.add("type", False, str(err))
    if exp.census is not None and pts:
        got = sector_census(s, pts[0], 1e-2).counts
        rep.add("sector-census", got == exp.census, f"{got}")

    # entry-specific checks
    finite = g.grad_norm_sq[np.isfinite(g.grad_norm_sq)]
    top = float(np.max(finite))
    if exp.causal == "space-like":
        rep.add("space-like", top < 1.0 - NULL_BAND, f"max |grad u|^2={top:.6g}")
    elif exp.causal == "weakly-space-like":
        rep.add("weakly-space-like", top <= 1.0 + NULL_BAND, f"max |grad u|^2={top:.6g}")
    elif exp.causal == "mixed":
        rep.add("mixed-type", bool(np.any(finite < 1.0 - NULL_BAND) and np.any(finite > 1.0 + NULL_BAND)))
    if exp.slab_bound is not None:
        umax = float(np.nanmax(np.abs(g.z)))
        rep.add("slab", umax <= exp.slab_bound + 1e-9, f"max|u|={umax:.17g} bound={exp.slab_bound:.17g}")
    if exp.rotational:
        r = np.hypot(X, Y)
        d = float(np.max(np.abs(s.u(X, Y) - s.u(r, 0.0 * r))))
        rep.add("rotational", d <= 1e-10, f"max={d:.3e}")
    if e.name == "tanh-scherk":
        curves = trace_unit_gradient_levelset(s, e.window, 256)
        worst = _tanh_curve_residual(curves)
        rep.add("critical-curves", bool(curves) and worst <= 1e-6, f"max={worst:.3e}")
    return rep


def _tanh_curve_residual(curves) -> float:
    """Worst pointwise residual of ``T^2 S^2 + 1 = 2 T^2`` or its ``y`` counterpart."""
    worst = 0.0
    for c in curves:
        T2, S2 = np.tanh(c[:, 0]) ** 2, np.tanh(c[:, 1]) ** 2
        r = np.minimum(np.abs(T2 * S2 + 1 - 2 * T2), np.abs(T2 * S2 + 1 - 2 * S2))
        worst = max(worst, float(np.max(r)))
    return worst
