"""Implicit surfaces ``zeta(z) = G(x, y)`` and their evaluation.

``G`` is usually the product ``phi(x) psi(y)`` of two profiles; a sum of two
profiles and the radial function ``sqrt(x^2 + y^2)`` are also supported so
that the catalog can hold the surfaces that are not of product type.

``z = u(x, y)`` is found on one monotone branch (sheet) of ``zeta`` by a
bracketed Newton iteration.  Derivatives of ``u`` come from implicit
differentiation; ``zeta'`` and ``zeta''`` are taken from the profile ODE at
the value ``G`` (not at the computed ``z``), which keeps them accurate next to
the light-cone points where ``zeta'`` vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .genmat import DEFAULT_TOL, GeneratingMatrix, row_coefficients
from .profiles import Profile, QuarticCoeffs, solve_profile

__all__ = [
    "NoSolutionError",
    "SingularPointError",
    "ProductRHS",
    "SumRHS",
    "RadialRHS",
    "ImplicitSurface",
    "EvalResult",
    "GridSample",
    "build_from_matrix",
    "evaluate",
    "evaluate_grid",
    "pde_residual",
    "pde_residual_implicit",
    "pde_residual_fd",
    "causal_character",
    "periods",
]

SPACE_LIKE, NULL, TIME_LIKE = "space-like", "null", "time-like"
NULL_BAND = 1e-10


class NoSolutionError(ValueError):
    """The right-hand side is outside the range of ``zeta`` on the branch."""


class SingularPointError(ValueError):
    """Derivatives requested at a point where ``zeta'(z) = 0``."""


@dataclass(frozen=True)
class ProductRHS:
    """``G = phi(x) * psi(y)``."""

    phi: Profile
    psi: Profile

    separable = "product"

    def value(self, x, y):
        return self.phi.value(x) * self.psi.value(y)

    def derivatives(self, x, y):
        """``G, G_x, G_y, G_xx, G_xy, G_yy``."""
        f, df = self.phi.value(x), self.phi.deriv(x)
        g, dg = self.psi.value(y), self.psi.deriv(y)
        ddf, ddg = self.phi.second_from_value(f), self.psi.second_from_value(g)
        return f * g, df * g, f * dg, ddf * g, df * dg, f * ddg

    def periods(self):
        return self.phi.period, self.psi.period


@dataclass(frozen=True)
class SumRHS:
    """``G = f(x) + g(y)``."""

    f: Profile
    g: Profile

    separable = "sum"

    @property
    def phi(self):
        return self.f

    @property
    def psi(self):
        return self.g

    def value(self, x, y):
        return self.f.value(x) + self.g.value(y)

    def derivatives(self, x, y):
        f, g = self.f.value(x), self.g.value(y)
        zero = np.zeros_like(np.asarray(f * g, dtype=float))
        return (
            f + g,
            self.f.deriv(x) + zero,
            self.g.deriv(y) + zero,
            self.f.second_from_value(f) + zero,
            zero,
            self.g.second_from_value(g) + zero,
        )

    def periods(self):
        return self.f.period, self.g.period


@dataclass(frozen=True)
class RadialRHS:
    """``G = sqrt(x^2 + y^2)``; not differentiable at the origin."""

    separable = None

    def value(self, x, y):
        return np.hypot(x, y)

    def derivatives(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            r3 = r**3
            return r, x / r, y / r, y * y / r3, -x * y / r3, x * x / r3

    def periods(self):
        return None, None


@dataclass(frozen=True)
class EvalResult:
    z: float
    grad: tuple[float, float] | None
    hess: tuple[float, float, float] | None
    grad_norm_sq: float
    causal: str
    singular: bool = False


@dataclass(frozen=True, eq=False)
class GridSample:
    """Surface data on a tensor grid; arrays are indexed ``[iy, ix]``."""

    xs: np.ndarray
    ys: np.ndarray
    z: np.ndarray
    zx: np.ndarray
    zy: np.ndarray
    zxx: np.ndarray
    zxy: np.ndarray
    zyy: np.ndarray
    grad_norm_sq: np.ndarray
    residual: np.ndarray
    singular: np.ndarray
    failed: np.ndarray

    @property
    def causal(self) -> np.ndarray:
        return _causal_labels(self.grad_norm_sq)


def _causal_labels(g):
    g = np.asarray(g, dtype=float)
    out = np.full(g.shape, "", dtype=object)
    out[g < 1.0 - NULL_BAND] = SPACE_LIKE
    out[g > 1.0 + NULL_BAND] = TIME_LIKE
    out[np.abs(g - 1.0) <= NULL_BAND] = NULL
    out[~np.isfinite(g)] = "singular"
    return out


def _causal(g: float) -> str:
    if not math.isfinite(g):
        return "singular"
    if g < 1.0 - NULL_BAND:
        return SPACE_LIKE
    if g > 1.0 + NULL_BAND:
        return TIME_LIKE
    return NULL


@dataclass(frozen=True, eq=False)
class ImplicitSurface:
    """Graph ``z = u(x, y)`` defined by ``zeta(z) = G(x, y)`` on one sheet.

    ``sheet = 0`` is the fundamental branch: the maximal monotone interval of
    ``zeta`` containing ``base``.  Other sheets are the neighbouring monotone
    intervals.
    """

    zeta: Profile
    rhs: ProductRHS | SumRHS | RadialRHS
    matrix: GeneratingMatrix | None = None
    sheet: int = 0
    base: float = 0.0
    name: str = ""
    singular_tol: float = 1e-14
    _branch: tuple = field(init=False, repr=False)

    def __post_init__(self):
        lo, hi = self.zeta.monotone_interval(self.base, self.sheet)
        if math.isfinite(lo) and math.isfinite(hi):
            mid = 0.5 * (lo + hi)
        elif math.isfinite(lo):
            mid = lo + 1.0
        elif math.isfinite(hi):
            mid = hi - 1.0
        else:
            mid = self.base
        direction = 1.0 if self.zeta.deriv(mid) > 0 else -1.0
        object.__setattr__(self, "_branch", (lo, hi, direction))

    @property
    def branch(self) -> tuple[float, float]:
        return self._branch[:2]

    @property
    def direction(self) -> float:
        """Sign of ``zeta'`` on the branch."""
        return self._branch[2]

    @property
    def phi(self):
        return getattr(self.rhs, "phi", None)

    @property
    def psi(self):
        return getattr(self.rhs, "psi", None)

    def with_sheet(self, sheet: int) -> ImplicitSurface:
        return replace(self, sheet=sheet)

    # -- root finding -------------------------------------------------
    def solve(self, v, seed=None):
        """``z`` on the branch with ``zeta(z) = v`` (NaN where impossible)."""
        v = np.asarray(v, dtype=float)
        scalar = v.ndim == 0
        v = np.atleast_1d(v).astype(float)
        lo, hi, s = self._branch
        zeta = self.zeta
        z = np.full(v.shape, np.nan)
        ok = np.isfinite(v)

        a = np.full(v.shape, lo)
        b = np.full(v.shape, hi)
        # bracket infinite ends by doubling away from a finite anchor
        for side, end in ((0, lo), (1, hi)):
            if math.isfinite(end):
                continue
            anchor = hi if side == 0 and math.isfinite(hi) else lo if side == 1 and math.isfinite(lo) else self.base
            step = np.ones(v.shape)
            cur = np.full(v.shape, anchor - 1.0 if side == 0 else anchor + 1.0)
            need = ok.copy()
            for _ in range(80):
                g = s * (zeta.value(cur) - v)
                need &= (g > 0) if side == 0 else (g < 0)
                if not need.any():
                    break
                step = np.where(need, 2.0 * step, step)
                cur = np.where(need, (anchor - step) if side == 0 else (anchor + step), cur)
                cur = np.where(np.isfinite(zeta.value(cur)), cur, np.nan)
            ok &= ~need & np.isfinite(cur)
            if side == 0:
                a = np.where(ok, cur, a)
            else:
                b = np.where(ok, cur, b)

        ga = s * (zeta.value(np.where(ok, a, 0.0)) - v)
        gb = s * (zeta.value(np.where(ok, b, 0.0)) - v)
        span = np.maximum(np.abs(zeta.value(np.where(ok, a, 0.0))), np.abs(zeta.value(np.where(ok, b, 0.0))))
        slack = 8.0 * np.finfo(float).eps * np.maximum(span, 1.0)
        at_a = ok & (ga >= 0) & (ga <= slack)
        at_b = ok & (gb <= 0) & (gb >= -slack)
        inside = ok & (ga < 0) & (gb > 0)
        z[at_a] = a[at_a]
        z[at_b] = b[at_b]

        if inside.any():
            aa, bb, vv = a[inside], b[inside], v[inside]
            if seed is not None:
                zz = np.broadcast_to(np.asarray(seed, dtype=float), v.shape)[inside].copy()
                zz = np.where((zz > aa) & (zz < bb), zz, 0.5 * (aa + bb))
            else:
                zz = 0.5 * (aa + bb)
            active = np.ones(zz.shape, dtype=bool)
            for _ in range(200):
                idx = np.nonzero(active)[0]
                if idx.size == 0:
                    break
                zc = zz[idx]
                g = s * (zeta.value(zc) - vv[idx])
                dg = s * zeta.deriv(zc)
                aa[idx] = np.where(g < 0, zc, aa[idx])
                bb[idx] = np.where(g > 0, zc, bb[idx])
                with np.errstate(divide="ignore", invalid="ignore"):
                    newton = zc - g / dg
                good = np.isfinite(newton) & (newton > aa[idx]) & (newton < bb[idx])
                znew = np.where(good, newton, 0.5 * (aa[idx] + bb[idx]))
                znew = np.where(g == 0, zc, znew)
                tol = 2.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(znew))
                done = (np.abs(znew - zc) <= tol) | (bb[idx] - aa[idx] <= 2 * tol) | (g == 0)
                zz[idx] = znew
                active[idx[done]] = False
            z[inside] = zz
        return float(z[0]) if scalar else z

    def u(self, x, y, seed=None):
        return self.solve(self.rhs.value(x, y), seed)

    # -- derivatives --------------------------------------------------
    def _zeta_slopes(self, G):
        zeta = self.zeta
        H = zeta.coeffs.P(np.asarray(G, dtype=float) ** 2)
        scale = max(abs(zeta.coeffs.a), abs(zeta.coeffs.b), abs(zeta.coeffs.c))
        singular = H <= self.singular_tol * scale
        dz = self.direction * np.sqrt(np.maximum(H, 0.0))
        return dz, zeta.second_from_value(G), singular

    def derivatives(self, x, y):
        """``u_x, u_y, u_xx, u_xy, u_yy, |grad u|^2, singular`` (NaN at singular points)."""
        G, Gx, Gy, Gxx, Gxy, Gyy = self.rhs.derivatives(x, y)
        dz, ddz, singular = self._zeta_slopes(G)
        singular = singular | ~np.isfinite(Gx * Gy)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(singular, np.nan, dz)
            zx, zy = Gx / d, Gy / d
            zxx = (Gxx - ddz * zx * zx) / d
            zxy = (Gxy - ddz * zx * zy) / d
            zyy = (Gyy - ddz * zy * zy) / d
            gns = (Gx * Gx + Gy * Gy) / (d * d)
        return zx, zy, zxx, zxy, zyy, gns, singular

    def grad_norm_sq(self, x, y):
        """``|grad u|^2 = (G_x^2 + G_y^2) / zeta'^2``; independent of the sheet."""
        return self.derivatives(x, y)[5]


def pde_residual(zx, zy, zxx, zxy, zyy):
    """``(1 - u_y^2) u_xx + 2 u_x u_y u_xy + (1 - u_x^2) u_yy``."""
    return (1.0 - zy * zy) * zxx + 2.0 * zx * zy * zxy + (1.0 - zx * zx) * zyy


def evaluate(s: ImplicitSurface, x: float, y: float, seed: float | None = None) -> EvalResult:
    """Evaluate ``u`` and its derivatives at one point.

    Raises ``NoSolutionError`` if ``G(x, y)`` is outside the range of ``zeta``
    on the branch.  At singular points the gradient and Hessian are None.
    """
    z = s.solve(s.rhs.value(x, y), seed)
    if not math.isfinite(z):
        raise NoSolutionError(f"no solution of zeta(z) = G on sheet {s.sheet} at ({x}, {y})")
    zx, zy, zxx, zxy, zyy, gns, singular = (np.asarray(v).item() for v in s.derivatives(x, y))
    if singular:
        return EvalResult(z, None, None, math.nan, "singular", True)
    return EvalResult(z, (zx, zy), (zxx, zxy, zyy), gns, _causal(gns), False)


def evaluate_grid(s: ImplicitSurface, xs, ys) -> GridSample:
    """Evaluate on the tensor grid ``xs x ys`` (arrays indexed ``[iy, ix]``).

    Each row is seeded from its left neighbour; since the bracket is the
    whole branch the result does not depend on the seeds.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    X, Y = np.meshgrid(xs, ys)
    z = s.u(X, Y)
    zx, zy, zxx, zxy, zyy, gns, singular = s.derivatives(X, Y)
    res = pde_residual(zx, zy, zxx, zxy, zyy)
    failed = ~np.isfinite(z)
    return GridSample(xs, ys, z, zx, zy, zxx, zxy, zyy, gns, res, singular & ~failed, failed)


def pde_residual_implicit(s: ImplicitSurface, x, y):
    """Residual of the maximal surface equation from implicit derivatives.

    NaN at singular points.
    """
    zx, zy, zxx, zxy, zyy, _, _ = s.derivatives(x, y)
    r = pde_residual(zx, zy, zxx, zxy, zyy)
    return float(r) if np.ndim(r) == 0 else r


def pde_residual_fd(s: ImplicitSurface, x: float, y: float, h: float) -> float:
    """Residual from central differences of ``u`` on a 3x3 stencil of spacing ``h``."""
    offs = np.array([-h, 0.0, h])
    X, Y = np.meshgrid(x + offs, y + offs)
    U = s.u(X, Y)
    _, _, _, _, _, _, singular = s.derivatives(X, Y)
    if not np.all(np.isfinite(U)) or np.any(singular):
        raise SingularPointError(f"stencil at ({x}, {y}) with h={h} touches a singular point")
    # U[iy, ix]
    ux = (U[1, 2] - U[1, 0]) / (2 * h)
    uy = (U[2, 1] - U[0, 1]) / (2 * h)
    uxx = (U[1, 2] - 2 * U[1, 1] + U[1, 0]) / h**2
    uyy = (U[2, 1] - 2 * U[1, 1] + U[0, 1]) / h**2
    uxy = (U[2, 2] - U[2, 0] - U[0, 2] + U[0, 0]) / (4 * h * h)
    return float(pde_residual(ux, uy, uxx, uxy, uyy))


def causal_character(s: ImplicitSurface, x: float, y: float) -> tuple[str, float]:
    """``("space-like" | "time-like" | "null" | "singular", |grad u|^2)``."""
    gns = float(np.asarray(s.grad_norm_sq(x, y)))
    return _causal(gns), gns


def periods(s: ImplicitSurface, check_half: bool = True, tol: float = 1e-9):
    """Periods ``(T1, T2)`` of ``u`` in ``x`` and ``y`` (None if aperiodic).

    Starts from the profile periods and halves one when ``u(x + T/2, y)``
    already reproduces ``u`` at sample points.
    """
    T1, T2 = s.rhs.periods()
    if not check_half:
        return T1, T2
    rng = np.random.default_rng(12345)
    out = []
    for axis, T in enumerate((T1, T2)):
        if T is None:
            out.append(None)
            continue
        px = rng.uniform(0.0, T1 or 1.0, 16) + 0.0123
        py = rng.uniform(0.0, T2 or 1.0, 16) + 0.0321
        u0 = s.u(px, py)
        shifted = s.u(px + 0.5 * T, py) if axis == 0 else s.u(px, py + 0.5 * T)
        diff = np.abs(shifted - u0)
        if np.all(np.isfinite(diff)) and np.max(diff) <= tol:
            out.append(0.5 * T)
        else:
            out.append(T)
    return tuple(out)


def _row_profiles(A: np.ndarray):
    a, b, c = row_coefficients(A)
    return (
        QuarticCoeffs(a[0], b[0], c[0], "phi"),
        QuarticCoeffs(a[1], b[1], c[1], "phi"),
        QuarticCoeffs(a[2], b[2], c[2], "zeta"),
    )


def build_from_matrix(
    A,
    inits: tuple[str | None, str | None, str | None] = (None, None, None),
    deltas: tuple[int | None, int | None, int | None] = (None, None, None),
    sheet: int = 0,
    name: str = "",
    tol: float = DEFAULT_TOL,
) -> ImplicitSurface:
    """Surface ``zeta(z) = phi(x) psi(y)`` whose profiles are read off ``A``.

    Row ``i`` of ``A`` is ``(a_i, beta_i, c_i)``; rows 1 and 2 give ``phi`` and
    ``psi`` in the ``phi`` convention, row 3 gives ``zeta`` in the ``zeta``
    convention.  An init left as None starts at a zero when possible and at a
    turning point otherwise.
    """
    gm = A if isinstance(A, GeneratingMatrix) else None
    if gm is None:
        gm = GeneratingMatrix(np.asarray(A, dtype=float), tol)
    qs = _row_profiles(gm.entries)
    profs = []
    for q, init, delta in zip(qs, inits, deltas):
        if init is None:
            init = "zero" if q.to_phi().a > tol * max(1.0, abs(q.to_phi().b)) else "turning"
        profs.append(solve_profile(q, init, delta))
    phi, psi, zeta = profs
    return ImplicitSurface(zeta, ProductRHS(phi, psi), gm, sheet=sheet, name=name)
