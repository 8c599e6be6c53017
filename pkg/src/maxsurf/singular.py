"""Light-cone singularities of implicit maximal surfaces.

A point is special when ``phi'(x0) = psi'(y0) = 0`` and ``zeta'(z0) = 0`` with
``zeta(z0) = phi(x0) psi(y0)``.  Near such a point the graph is asymptotic to
the cone ``u = z0 + delta r``.  The causal structure nearby is fixed by the
signs of ``beta_1, beta_2, b_3`` and by the roots of
``beta_1 xi^2 + 2 b_3 xi + beta_2 = 0``: the ``|grad u| = 1`` curves leave the
point along the lines ``y^2 = xi x^2`` for each positive root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from skimage import measure

from .genmat import DEFAULT_TOL, NotApplicableError, row_coefficients
from .surface import NULL_BAND, ImplicitSurface, ProductRHS, RadialRHS

__all__ = [
    "TYPE1",
    "TYPE2",
    "TYPE3",
    "DEGENERATE",
    "SingularPoint",
    "Classification",
    "ConeFit",
    "SectorCensus",
    "TangentCheck",
    "find_special_points",
    "lightcone_fit",
    "classify",
    "sector_census",
    "trace_unit_gradient_levelset",
    "tangent_check",
    "write_polylines",
]

TYPE1, TYPE2, TYPE3, DEGENERATE = "Type1", "Type2", "Type3", "Degenerate"
EXPECTED_CENSUS = {TYPE1: (1, 0), TYPE2: (1, 1), TYPE3: (2, 2)}
DEFAULT_RADII = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class SingularPoint:
    x0: float
    y0: float
    z0: float
    delta: int
    type: str = DEGENERATE
    xi_roots: tuple[float, float] | None = None
    cone_fit_error: float = math.nan
    sheet: int = 0
    checks: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Classification:
    type: str
    xi_roots: tuple[float, float] | None
    beta1: float
    beta2: float
    b3: float
    quadratic_discriminant: float
    discriminant: float


@dataclass(frozen=True)
class ConeFit:
    """Cone fit on one sheet: ``u - z0 = delta r + C r^2 + remainder``."""

    sheet: int
    delta: int
    C: float
    fit_error: float
    radii: tuple[float, ...]
    C_by_radius: tuple[float, ...]

    @property
    def C_spread(self) -> float:
        """``(max C(r) - min C(r)) / max C(r)`` over the sampled radii."""
        c = np.asarray(self.C_by_radius)
        top = np.max(c)
        return float((top - np.min(c)) / top) if top > 0 else 0.0


@dataclass(frozen=True)
class SectorCensus:
    """Arcs of each causal character on a small circle.

    ``space_like`` and ``time_like`` count arcs up to the central symmetry
    ``theta -> theta + pi`` of the cone (directions in ``[0, pi)``); the
    ``full_*`` counts are for the whole circle.
    """

    space_like: int
    time_like: int
    full_space_like: int
    full_time_like: int
    radius: float

    @property
    def counts(self) -> tuple[int, int]:
        return self.space_like, self.time_like


@dataclass(frozen=True)
class TangentCheck:
    measured_deg: tuple[float, ...]
    expected_deg: tuple[float, ...]
    max_error_deg: float
    ok: bool


# -- locating ------------------------------------------------------------


def _deriv_zeros(prof, lo: float, hi: float, cells_per_period: int = 512) -> list[float]:
    """Zeros of ``prof'`` in ``[lo, hi]``: sign changes on a grid, then bisection."""
    if hi < lo:
        return []
    T = prof.period
    width = hi - lo
    n = cells_per_period * (width / T if T else max(width, 1.0))
    n = int(min(max(math.ceil(n), cells_per_period), 2_000_000))
    # pad by one cell so zeros sitting on the window edge are bracketed
    pad = width / n if width > 0 else 1.0 / cells_per_period
    xs = np.linspace(lo - pad, hi + pad, n + 3)
    d = np.asarray(prof.deriv(xs), dtype=float)
    roots = list(xs[d == 0.0])
    idx = np.nonzero(d[:-1] * d[1:] < 0)[0]
    for i in idx:
        a, b = xs[i], xs[i + 1]
        da = d[i]
        for _ in range(200):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            dm = prof.deriv(mid)
            if dm == 0.0:
                a = b = mid
                break
            if (dm > 0) == (da > 0):
                a, da = mid, dm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    slack = 1e-9 * max(1.0, abs(lo), abs(hi))
    roots = sorted(r for r in roots if lo - slack <= r <= hi + slack)
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9 * max(1.0, abs(r)):
            out.append(float(r))
    return out


def _snap_z0(s: ImplicitSurface, G0: float) -> float:
    """``z0`` on the sheet: the branch end where ``zeta = G0`` if there is one."""
    best, gap = math.nan, math.inf
    for end in s.branch:
        if math.isfinite(end):
            g = abs(float(s.zeta.value(end)) - G0)
            if g < gap:
                best, gap = end, g
    if gap <= 1e-7 * max(1.0, abs(G0)):
        return float(best)
    return float(s.solve(G0))


def find_special_points(
    s: ImplicitSurface,
    window: tuple[float, float, float, float],
    cells_per_period: int = 512,
    tol: float = 1e-9,
    fit: bool = True,
) -> list[SingularPoint]:
    """Special points of ``s`` with ``x0 in [x0, x1]`` and ``y0 in [y0, y1]``.

    Each point carries ``delta`` (the root selector with
    ``phi^2(x0) = (b1 + delta sqrt(D)) / c1``), the classification when a
    matrix is attached, and the cone-fit error on the sheet of ``s``.
    """
    xa, xb, ya, yb = (float(v) for v in window)
    if not all(map(math.isfinite, (xa, xb, ya, yb))):
        raise ValueError("window must be finite")
    if isinstance(s.rhs, RadialRHS):
        return _radial_points(s, (xa, xb, ya, yb), fit)

    phi, psi = s.rhs.phi, s.rhs.psi
    xs = _deriv_zeros(phi, xa, xb, cells_per_period)
    ys = _deriv_zeros(psi, ya, yb, cells_per_period)
    zq = s.zeta.coeffs
    zscale = max(abs(zq.a), abs(zq.b), abs(zq.c))
    out = []
    for x0 in xs:
        for y0 in ys:
            G0 = float(s.rhs.value(x0, y0))
            H = float(zq.P(G0 * G0))
            if abs(H) > tol * zscale:
                continue
            z0 = _snap_z0(s, G0)
            if not math.isfinite(z0):
                continue
            checks = {
                "dphi": abs(float(phi.deriv(x0))),
                "dpsi": abs(float(psi.deriv(y0))),
                "dzeta": abs(float(s.zeta.deriv(z0))),
                "implicit": abs(float(s.zeta.value(z0)) - G0),
            }
            if isinstance(s.rhs, ProductRHS):
                f0, g0 = float(phi.value(x0)), float(psi.value(y0))
                delta = phi.coeffs.delta_of_root(f0 * f0)
                checks.update(_mmmm_checks(s, f0, g0, delta))
            else:
                delta = zq.to_phi().delta_of_root(G0 * G0)
            p = SingularPoint(x0, y0, z0, delta, sheet=s.sheet, checks=checks)
            if s.matrix is not None:
                try:
                    cl = classify(s, p)
                    p = replace(p, type=cl.type, xi_roots=cl.xi_roots)
                except NotApplicableError:
                    pass
            if fit:
                fits = lightcone_fit(s, p)
                p = replace(p, cone_fit_error=fits[0].fit_error)
            out.append(p)
    return out


def _mmmm_checks(s: ImplicitSurface, f0: float, g0: float, delta: int) -> dict:
    """Residuals of ``f0^2 = (b1 + delta sqrt(D)) / c1`` and the ``psi`` analogue."""
    out = {}
    for key, prof, v in (("mmmm_phi", s.rhs.phi, f0), ("mmmm_psi", s.rhs.psi, g0)):
        q = prof.coeffs.to_phi()
        D = q.discriminant
        if D < 0:
            out[key] = math.inf
            continue
        if q.c != 0.0:
            target = (q.b + delta * math.sqrt(D)) / q.c
        elif q.b != 0.0:
            target = q.a / (2.0 * q.b)
        else:
            out[key] = math.inf
            continue
        out[key] = abs(v * v - target)
    if s.matrix is not None:
        out["discriminant"] = float(s.matrix.discriminant)
    return out


def _radial_points(s: ImplicitSurface, window, fit: bool) -> list[SingularPoint]:
    xa, xb, ya, yb = window
    if not (xa <= 0.0 <= xb and ya <= 0.0 <= yb):
        return []
    z0 = float(s.solve(0.0))
    if not math.isfinite(z0):
        return []
    p = SingularPoint(0.0, 0.0, z0, int(s.direction), sheet=s.sheet, checks={"implicit": abs(float(s.zeta.value(z0)))})
    if fit:
        fits = lightcone_fit(s, p)
        p = replace(p, delta=fits[0].delta, cone_fit_error=fits[0].fit_error)
    return [p]


# -- local analysis ------------------------------------------------------


def _adjacent_sheet(s: ImplicitSurface, z0: float) -> int | None:
    lo, hi = s.branch
    scale = max(1.0, abs(z0))
    try:
        if math.isfinite(hi) and abs(z0 - hi) <= 1e-9 * scale:
            s.zeta.monotone_interval(s.base, s.sheet + 1)
            return s.sheet + 1
        if math.isfinite(lo) and abs(z0 - lo) <= 1e-9 * scale:
            s.zeta.monotone_interval(s.base, s.sheet - 1)
            return s.sheet - 1
    except ValueError:
        return None
    return None


def _fit_sheet(s: ImplicitSurface, p: SingularPoint, radii, n_angles: int) -> ConeFit:
    th = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    res, rr = [], []
    for r in radii:
        u = s.u(p.x0 + r * np.cos(th), p.y0 + r * np.sin(th))
        res.append(u - p.z0)
        rr.append(np.full(th.shape, r))
    dev = np.concatenate(res)
    rad = np.concatenate(rr)
    delta = 1 if np.nanmean(dev) >= 0 else -1
    e = dev - delta * rad
    C_by = tuple(float(np.nanmax(np.abs(ei - delta * r))) / r**2 for ei, r in zip(res, radii))
    ok = np.isfinite(e)
    r2 = rad[ok] ** 2
    C = float(np.dot(r2, e[ok]) / np.dot(r2, r2)) if ok.any() else math.nan
    fit_error = float(np.max(np.abs(e[ok] - C * r2))) if ok.any() else math.nan
    return ConeFit(s.sheet, delta, C, fit_error, tuple(radii), C_by)


def lightcone_fit(
    s: ImplicitSurface,
    p: SingularPoint,
    radii=DEFAULT_RADII,
    n_angles: int = 256,
) -> list[ConeFit]:
    """Fit ``u - z0 = delta r + C r^2`` on circles around ``p``.

    The first entry is for the sheet of ``s``.  When ``z0`` is an end of that
    sheet the neighbouring sheet holds the other half of the cone and is
    reported second.
    """
    out = [_fit_sheet(s, p, radii, n_angles)]
    other = _adjacent_sheet(s, p.z0)
    if other is not None:
        out.append(_fit_sheet(s.with_sheet(other), p, radii, n_angles))
    return out


def classify(s: ImplicitSurface, p: SingularPoint | None = None, tol: float = DEFAULT_TOL) -> Classification:
    """Type of the singular points of ``s`` from the signs of ``beta_1, beta_2, b_3``.

    The type depends on the matrix only, so ``p`` is optional.  Raises
    ``NotApplicableError`` without a matrix or when the discriminant is not
    positive.
    """
    if s.matrix is None:
        raise NotApplicableError("classification needs a generating matrix")
    A = np.asarray(s.matrix, dtype=float)
    D = float(s.matrix.discriminant)
    scale = float(np.max(np.abs(A)))
    if D <= tol * scale * scale:
        raise NotApplicableError(f"discriminant {D} is not positive")
    beta1, beta2 = float(A[0, 1]), float(A[1, 1])
    b3 = float(row_coefficients(A)[1][2])
    qdisc = 4.0 * (b3 * b3 - beta1 * beta2)
    small = tol * scale
    if min(abs(beta1), abs(beta2), abs(b3)) <= small:
        return Classification(DEGENERATE, None, beta1, beta2, b3, qdisc, D)
    sq = math.sqrt(max(qdisc, 0.0))
    # roots of beta1 xi^2 + 2 b3 xi + beta2, cancellation-free
    big = (-2.0 * b3 - math.copysign(sq, b3)) / (2.0 * beta1)
    other = beta2 / (beta1 * big)
    xi = tuple(sorted((big, other)))
    if beta1 > 0 and beta2 > 0:
        typ = TYPE1 if b3 > 0 else TYPE3
    elif beta1 < 0 and beta2 < 0:
        typ = TYPE1 if b3 < 0 else TYPE3
    else:
        typ = TYPE2
    return Classification(typ, xi, beta1, beta2, b3, qdisc, D)


def _count_arcs(tags: np.ndarray) -> tuple[int, int]:
    """Cyclic count of maximal runs of +1 (space-like) and -1 (time-like)."""
    t = tags[tags != 0]
    if t.size == 0:
        return 0, 0
    if np.all(t == t[0]):
        return (1, 0) if t[0] > 0 else (0, 1)
    starts = t != np.roll(t, 1)
    return int(np.sum(starts & (t > 0))), int(np.sum(starts & (t < 0)))


def sector_census(
    s: ImplicitSurface,
    p: SingularPoint,
    r: float = 1e-2,
    n: int = 1440,
    others: list[SingularPoint] | None = None,
) -> SectorCensus:
    """Count space-like and time-like arcs on the circle of radius ``r`` about ``p``.

    Raises ``ValueError`` if another special point lies within ``2 r``.
    """
    if others is None:
        box = (p.x0 - 2 * r, p.x0 + 2 * r, p.y0 - 2 * r, p.y0 + 2 * r)
        others = find_special_points(s, box, fit=False)
    for q in others:
        d = math.hypot(q.x0 - p.x0, q.y0 - p.y0)
        if 1e-9 < d < 2 * r:
            raise ValueError(f"radius {r} too large: another special point at distance {d:.3g}")
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    g = s.grad_norm_sq(p.x0 + r * np.cos(th), p.y0 + r * np.sin(th))
    tags = np.where(g < 1.0 - NULL_BAND, 1, np.where(g > 1.0 + NULL_BAND, -1, 0))
    fs, ft = _count_arcs(tags)
    ps, pt = _count_arcs(tags[: n // 2])
    return SectorCensus(ps, pt, fs, ft, r)


# -- level curves --------------------------------------------------------


def _bisect_edges(f, lo, hi, fixed, along_x: bool, iters: int = 60):
    """Vectorized bisection for zeros of ``f`` on grid edges ``[lo, hi]``."""
    def g(v):
        return f(v, fixed) if along_x else f(fixed, v)

    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _refine(s: ImplicitSurface, c: np.ndarray, pts: np.ndarray, xs, ys) -> np.ndarray:
    """Move contour vertices onto the zero of ``|grad u|^2 - 1`` along their grid edges."""
    def f(x, y):
        return s.grad_norm_sq(x, y) - 1.0

    i, j = c[:, 0], c[:, 1]
    on_row = np.abs(i - np.round(i)) < 1e-12
    on_col = np.abs(j - np.round(j)) < 1e-12
    out = pts.copy()
    sel = on_row & ~on_col
    if sel.any():
        j0 = np.clip(np.floor(j[sel]).astype(int), 0, xs.size - 2)
        yy = ys[np.round(i[sel]).astype(int)]
        out[sel, 0] = _bisect_edges(f, xs[j0], xs[j0 + 1], yy, True)
    sel = on_col & ~on_row
    if sel.any():
        i0 = np.clip(np.floor(i[sel]).astype(int), 0, ys.size - 2)
        xx = xs[np.round(j[sel]).astype(int)]
        out[sel, 1] = _bisect_edges(f, ys[i0], ys[i0 + 1], xx, False)
    # keep the interpolated vertex where the edge had no clean sign change
    bad = ~np.isfinite(out).all(axis=1)
    out[bad] = pts[bad]
    return out


def trace_unit_gradient_levelset(
    s: ImplicitSurface,
    region: tuple[float, float, float, float],
    grid_n: int = 512,
    refine: bool = True,
) -> list[np.ndarray]:
    """Curves ``|grad u| = 1`` in ``region`` as ``(N, 2)`` arrays of ``(x, y)``.

    Marching squares on ``|grad u|^2 - 1`` sampled on a ``grid_n x grid_n``
    grid; with ``refine`` each vertex is then moved to the exact zero along
    its grid edge.
    """
    xa, xb, ya, yb = region
    if grid_n < 2 or not (xb > xa and yb > ya):
        raise ValueError("need grid_n >= 2 and a non-degenerate region")
    xs = np.linspace(xa, xb, grid_n)
    ys = np.linspace(ya, yb, grid_n)
    X, Y = np.meshgrid(xs, ys)
    F = s.grad_norm_sq(X, Y) - 1.0
    mask = np.isfinite(F)
    if not mask.any():
        return []
    contours = measure.find_contours(np.where(mask, F, 0.0), 0.0, mask=mask)

    dx = (xb - xa) / (grid_n - 1)
    dy = (yb - ya) / (grid_n - 1)
    out = []
    for c in contours:
        pts = np.column_stack([xa + c[:, 1] * dx, ya + c[:, 0] * dy])
        out.append(_refine(s, c, pts, xs, ys) if refine else pts)
    return out


def tangent_check(
    s: ImplicitSurface,
    p: SingularPoint,
    r_in: float = 1e-2,
    r_out: float = 2e-2,
    grid_n: int = 512,
    tol_deg: float = 2.0,
) -> TangentCheck:
    """Compare directions of the traced ``|grad u| = 1`` branches at ``p`` with ``y^2 = xi x^2``.

    Each branch direction is the mean polar angle (mod 180 degrees) of the
    curve points in the annulus ``r_in <= r <= r_out``.
    """
    cl = classify(s, p)
    expected = []
    if cl.xi_roots is not None:
        for xi in cl.xi_roots:
            if xi > 0:
                a = math.degrees(math.atan(math.sqrt(xi)))
                expected += [a, 180.0 - a]
    expected.sort()
    w = 1.5 * r_out
    curves = trace_unit_gradient_levelset(s, (p.x0 - w, p.x0 + w, p.y0 - w, p.y0 + w), grid_n)
    angles = []
    for c in curves:
        d = c - (p.x0, p.y0)
        r = np.hypot(d[:, 0], d[:, 1])
        sel = (r >= r_in) & (r <= r_out)
        angles.extend(np.degrees(np.arctan2(d[sel, 1], d[sel, 0])) % 180.0)
    measured = _cluster_angles(np.asarray(angles))
    if not expected:
        ok = not measured
        return TangentCheck(tuple(measured), (), 0.0 if ok else math.inf, ok)
    if len(measured) != len(expected):
        return TangentCheck(tuple(measured), tuple(expected), math.inf, False)
    err = max(_angle_gap(m, e) for m, e in zip(measured, expected))
    return TangentCheck(tuple(measured), tuple(expected), err, err <= tol_deg)


def _angle_gap(a: float, b: float) -> float:
    d = abs(a - b) % 180.0
    return min(d, 180.0 - d)


def _cluster_angles(a: np.ndarray, gap: float = 5.0) -> list[float]:
    """Circular (period 180) clustering of angles; returns sorted cluster means."""
    if a.size == 0:
        return []
    a = np.sort(a)
    diffs = np.diff(np.concatenate([a, [a[0] + 180.0]]))
    cut = np.nonzero(diffs > gap)[0]
    if cut.size == 0:
        return [float(np.mean(a))]
    # rotate so that the first cluster starts after the largest gap
    start = (cut[-1] + 1) % a.size
    a = np.concatenate([a[start:], a[:start] + 180.0])
    groups = np.split(a, np.nonzero(np.diff(a) > gap)[0] + 1)
    return sorted(float(np.mean(g)) % 180.0 for g in groups)


def write_polylines(curves: list[np.ndarray], fh) -> None:
    """CSV ``x,y`` per vertex, components separated by a blank line."""
    fh.write("x,y\n")
    for n, c in enumerate(curves):
        if n:
            fh.write("\n")
        for x, y in c:
            fh.write(f"{x:.17g},{y:.17g}\n")
