"""One-variable profiles ``f`` solving ``f'^2 = a - 2 b f^2 + c f^4``.

The closed form is picked from the roots of ``P(s) = a - 2 b s + c s^2`` in
``s = f^2``:

========================  ===========================================
roots of ``P``            profile
========================  ===========================================
``c > 0``, ``0 < s1 < s2``  ``A sn(w t; k)``
``c < 0``, ``s1 < 0 < s2``  ``A cn(w t; k)``
``c < 0``, ``0 < s1 < s2``  ``A dn(w t; k)``
``c < 0``, ``s1 = 0 < s2``  ``A sech(w t)``
double root ``s0 > 0``    ``sqrt(s0) tanh(w t)``
``c = 0``                 ``sin``, ``sinh``, ``cosh``, ``exp`` or linear
========================  ===========================================

Profiles start either at a zero (``init="zero"``, increasing) or at a
positive turning value ``sqrt(s)`` with ``P(s) = 0`` (``init="turning"``;
``delta`` picks ``s = (b + delta sqrt(b^2 - a c)) / c``).  Unbounded
solutions are not supported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import complete_K, jacobi_sn_cn_dn

__all__ = [
    "ProfileError",
    "NoRealSolutionError",
    "UnsupportedProfileError",
    "QuarticCoeffs",
    "Profile",
    "ClosedFormProfile",
    "NumericProfile",
    "solve_profile",
    "integrate_profile_numeric",
    "tanh_family_conditions",
]

ROOT_TOL = 1e-12


class ProfileError(ValueError):
    """Requested profile cannot be built."""


class NoRealSolutionError(ProfileError):
    """``P(s) < 0`` for every admissible ``s``: no real non-constant profile."""


class UnsupportedProfileError(ProfileError):
    """The real solution exists but is unbounded (``1/sn``, ``tan`` type)."""


@dataclass(frozen=True)
class QuarticCoeffs:
    """Coefficients of one of the two sign conventions.

    ``convention="phi"``:  ``f'^2 = a - 2 b f^2 + c f^4``
    ``convention="zeta"``: ``f'^2 = c + 2 b f^2 + a f^4``
    """

    a: float
    b: float
    c: float
    convention: str = "phi"

    def __post_init__(self):
        if self.convention not in ("phi", "zeta"):
            raise ValueError(f"unknown convention {self.convention!r}")

    def to_phi(self) -> QuarticCoeffs:
        if self.convention == "phi":
            return self
        return QuarticCoeffs(self.c, -self.b, self.a, "phi")

    def to_zeta(self) -> QuarticCoeffs:
        if self.convention == "zeta":
            return self
        return QuarticCoeffs(self.c, -self.b, self.a, "zeta")

    @property
    def discriminant(self) -> float:
        return self.b * self.b - self.a * self.c

    def P(self, s):
        """Right-hand side as a polynomial in ``s = f^2``."""
        p = self.to_phi()
        return p.a - 2.0 * p.b * s + p.c * s * s

    def roots(self) -> tuple[float, ...]:
        """Real roots of ``P`` in increasing order."""
        p = self.to_phi()
        if p.c == 0.0:
            return () if p.b == 0.0 else (p.a / (2.0 * p.b),)
        D = p.discriminant
        if D < 0.0:
            return ()
        sq = math.sqrt(D)
        # avoid cancellation: larger-magnitude root first, then Vieta
        big = (p.b + math.copysign(sq, p.b)) / p.c if p.b != 0.0 else sq / p.c
        small = p.a / (p.c * big) if big != 0.0 else 0.0
        return tuple(sorted((big, small)))

    def delta_of_root(self, s: float) -> int:
        """Sign ``delta`` with ``s = (b + delta sqrt(D)) / c``."""
        p = self.to_phi()
        return 1 if p.c * s - p.b >= 0.0 else -1


class Profile:
    """Common interface of closed-form and numeric profiles.

    Subclasses provide :meth:`value` and :meth:`deriv`; everything else follows
    from the ODE.
    """

    coeffs: QuarticCoeffs
    form_tag: str
    period: float | None

    def value(self, t):
        raise NotImplementedError

    def deriv(self, t):
        raise NotImplementedError

    def second_deriv(self, t):
        return self.second_from_value(self.value(t))

    def __call__(self, t):
        return self.value(t)

    def slope_from_value(self, v, sign=1.0):
        """``sign * sqrt(P(v^2))``, clipped at zero."""
        v = np.asarray(v, dtype=float)
        return sign * np.sqrt(np.maximum(self.coeffs.P(v * v), 0.0))

    def second_from_value(self, v):
        """``f'' = 2 f (c f^2 - b)``."""
        p = self.coeffs
        v = np.asarray(v, dtype=float)
        out = 2.0 * v * (p.c * v * v - p.b)
        return float(out) if out.ndim == 0 else out

    def residual(self, t) -> np.ndarray:
        """``f'^2 - P(f^2)`` at ``t``."""
        f = np.asarray(self.value(t))
        return np.asarray(self.deriv(t)) ** 2 - self.coeffs.P(f * f)

    def turning_points(self) -> np.ndarray:
        """Turning points in one period ``[0, T)`` (or all of them if aperiodic)."""
        return np.array([])

    def turning_points_in(self, lo: float, hi: float) -> np.ndarray:
        return np.array([])

    def monotone_interval(self, base: float = 0.0, sheet: int = 0) -> tuple[float, float]:
        """Maximal monotone interval containing ``base``, shifted by ``sheet`` intervals.

        If ``base`` is itself a turning point the interval starts there.
        """
        return (-math.inf, math.inf)


_FORM_TAGS = {
    "sn": "sn-scaled",
    "cn": "cn-scaled",
    "dn": "dn-scaled",
    "sech": "dn-scaled",
    "tanh": "tanh",
    "sin": "trig",
    "linear": "trig",
    "sinh": "exp-like",
    "cosh": "exp-like",
    "exp": "exp-like",
}


@dataclass(frozen=True)
class ClosedFormProfile(Profile):
    """``f(t) = amplitude * J(omega * t + phase)`` for a named function ``J``."""

    coeffs: QuarticCoeffs
    kind: str
    amplitude: float
    omega: float
    modulus: float = 0.0
    phase: float = 0.0
    init: str = "zero"
    delta: int | None = None
    _K: float = field(default=math.nan, repr=False, compare=False)

    def __post_init__(self):
        if self.kind in ("sn", "cn", "dn"):
            object.__setattr__(self, "_K", complete_K(self.modulus))

    @property
    def form_tag(self) -> str:
        return _FORM_TAGS[self.kind]

    @property
    def quarter(self) -> float:
        """``K(k)`` for the Jacobi kinds."""
        return self._K

    def _u(self, t):
        return self.omega * np.asarray(t, dtype=float) + self.phase

    def value(self, t):
        u, A, k = self._u(t), self.amplitude, self.modulus
        kind = self.kind
        if kind in ("sn", "cn", "dn"):
            sn, cn, dn = jacobi_sn_cn_dn(u, k)
            out = A * {"sn": sn, "cn": cn, "dn": dn}[kind]
        elif kind == "sech":
            out = A / np.cosh(u)
        elif kind == "tanh":
            out = A * np.tanh(u)
        elif kind == "sin":
            out = A * np.sin(u)
        elif kind == "sinh":
            out = A * np.sinh(u)
        elif kind == "cosh":
            out = A * np.cosh(u)
        elif kind == "exp":
            out = A * np.exp(u)
        else:  # linear
            out = A * u
        return _ret(out, t)

    def deriv(self, t):
        u, A, w, k = self._u(t), self.amplitude, self.omega, self.modulus
        kind = self.kind
        if kind in ("sn", "cn", "dn"):
            sn, cn, dn = jacobi_sn_cn_dn(u, k)
            d = {"sn": cn * dn, "cn": -sn * dn, "dn": -k * k * sn * cn}[kind]
        elif kind == "sech":
            d = -np.tanh(u) / np.cosh(u)
        elif kind == "tanh":
            d = 1.0 / np.cosh(u) ** 2
        elif kind == "sin":
            d = np.cos(u)
        elif kind == "sinh":
            d = np.cosh(u)
        elif kind == "cosh":
            d = np.sinh(u)
        elif kind == "exp":
            d = np.exp(u)
        else:
            d = np.ones_like(u)
        return _ret(A * w * d, t)

    @property
    def period(self) -> float | None:
        if self.kind in ("sn", "cn"):
            return 4.0 * self._K / self.omega
        if self.kind == "dn":
            return 2.0 * self._K / self.omega
        if self.kind == "sin":
            return 2.0 * math.pi / self.omega
        return None

    def _turning_u(self) -> tuple[float | None, float | None]:
        """First turning point in ``u`` and the spacing between them."""
        K = self._K
        return {
            "sn": (K, 2.0 * K),
            "cn": (0.0, 2.0 * K),
            "dn": (0.0, K),
            "sin": (0.5 * math.pi, math.pi),
            "sech": (0.0, None),
            "cosh": (0.0, None),
        }.get(self.kind, (None, None))

    def turning_points_in(self, lo: float, hi: float) -> np.ndarray:
        u0, du = self._turning_u()
        if u0 is None:
            return np.array([])
        t0 = (u0 - self.phase) / self.omega
        if du is None:
            return np.array([t0]) if lo <= t0 <= hi else np.array([])
        dt = du / self.omega
        j0 = math.ceil((lo - t0) / dt - 1e-12)
        j1 = math.floor((hi - t0) / dt + 1e-12)
        return t0 + dt * np.arange(j0, j1 + 1)

    def turning_points(self) -> np.ndarray:
        T = self.period
        if T is None:
            return self.turning_points_in(-math.inf, math.inf) if self._turning_u()[1] is None else np.array([])
        tp = self.turning_points_in(0.0, T)
        return tp[tp < T * (1 - 1e-14)]

    def monotone_interval(self, base: float = 0.0, sheet: int = 0) -> tuple[float, float]:
        u0, du = self._turning_u()
        if u0 is None:
            if sheet != 0:
                raise ValueError(f"{self.kind} profile has a single monotone branch")
            return (-math.inf, math.inf)
        t0 = (u0 - self.phase) / self.omega
        if du is None:
            right = base >= t0 - 1e-14 * max(1.0, abs(t0))
            if sheet % 2:
                right = not right
            if abs(sheet) > 1:
                raise ValueError("only sheets -1, 0, 1 exist for a single turning point")
            return (t0, math.inf) if right else (-math.inf, t0)
        dt = du / self.omega
        j = math.floor((base - t0) / dt + 1e-12)
        lo = t0 + (j + sheet) * dt
        return (lo, lo + dt)


def _ret(out, t):
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True, eq=False)
class NumericProfile(Profile):
    """Profile tabulated by a fixed-step integrator, Hermite-interpolated."""

    coeffs: QuarticCoeffs
    t: np.ndarray
    f: np.ndarray
    df: np.ndarray
    period: float | None = None
    form_tag: str = "numeric"

    def _locate(self, t):
        tt = np.asarray(t, dtype=float)
        h = self.t[1] - self.t[0]
        i = np.clip(np.floor((tt - self.t[0]) / h).astype(int), 0, len(self.t) - 2)
        s = (tt - self.t[i]) / h
        outside = (tt < self.t[0] - 1e-12 * h) | (tt > self.t[-1] + 1e-12 * h)
        return tt, i, s, h, outside

    def value(self, t):
        tt, i, s, h, outside = self._locate(t)
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        out = h00 * self.f[i] + h10 * h * self.df[i] + h01 * self.f[i + 1] + h11 * h * self.df[i + 1]
        out = np.where(outside, np.nan, out)
        return _ret(out, t)

    def deriv(self, t):
        tt, i, s, h, outside = self._locate(t)
        d00 = 6 * s * s - 6 * s
        d10 = 3 * s * s - 4 * s + 1
        d01 = -d00
        d11 = 3 * s * s - 2 * s
        out = (d00 * self.f[i] + d01 * self.f[i + 1]) / h + d10 * self.df[i] + d11 * self.df[i + 1]
        out = np.where(outside, np.nan, out)
        return _ret(out, t)


def _pick_root(q: QuarticCoeffs, roots: tuple[float, ...], delta: int | None, default: float) -> float:
    if delta is None:
        return default
    if delta not in (-1, 1):
        raise ValueError("delta must be +1 or -1")
    for s in roots:
        if q.delta_of_root(s) == delta:
            return s
    raise ProfileError(f"no root with delta={delta}")


def solve_profile(q: QuarticCoeffs, init: str = "zero", delta: int | None = None) -> ClosedFormProfile:
    """Closed-form profile for the quartic ``q``.

    ``init`` is ``"zero"`` (``f(0) = 0``, ``f'(0) > 0``), ``"turning"``
    (``f(0) = sqrt(s)`` with ``P(s) = 0``; ``delta`` selects the root) or
    ``"unit"`` (``f(0) = 1``, only for the exponential case ``a = c = 0``).
    """
    if init not in ("zero", "turning", "unit"):
        raise ValueError(f"unknown init {init!r}")
    p = q.to_phi()
    a, b, c = float(p.a), float(p.b), float(p.c)
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0 or not math.isfinite(scale):
        raise ProfileError("P is identically zero")
    tiny = ROOT_TOL * scale
    a = 0.0 if abs(a) <= tiny else a
    b = 0.0 if abs(b) <= tiny else b
    c = 0.0 if abs(c) <= tiny else c
    p = QuarticCoeffs(a, b, c)
    if init == "zero" and a < 0.0:
        raise ProfileError("f(0) = 0 needs P(0) >= 0")
    if init == "unit" and not (a == 0.0 and c == 0.0):
        raise ProfileError("init='unit' is only used for exponential profiles")

    def make(kind, A, w, k=0.0, phase=0.0, d=None):
        return ClosedFormProfile(p, kind, A, w, k, phase, init, d)

    if c == 0.0:
        if b == 0.0:
            if a > 0.0 and init == "zero":
                return make("linear", math.sqrt(a), 1.0)
            raise NoRealSolutionError("P is constant and non-positive, or f has no turning point")
        if b > 0.0:
            if a <= 0.0:
                raise NoRealSolutionError("P(s) < 0 for s > 0")
            A, w = math.sqrt(a / (2.0 * b)), math.sqrt(2.0 * b)
            phase = 0.0 if init == "zero" else 0.5 * math.pi
            return make("sin", A, w, 0.0, phase, -1 if init == "turning" else None)
        w = math.sqrt(-2.0 * b)
        if a > 0.0:
            if init != "zero":
                raise ProfileError("sinh profile has no turning point")
            return make("sinh", math.sqrt(-a / (2.0 * b)), w)
        if a < 0.0:
            if init != "turning":
                raise ProfileError("cosh profile has no zero")
            return make("cosh", math.sqrt(a / (2.0 * b)), w, 0.0, 0.0, 1)
        if init != "unit":
            raise ProfileError("exponential profile: use init='unit'")
        return make("exp", 1.0, w)

    D = b * b - a * c
    roots = p.roots()
    if D > 0.0 and len(roots) == 2:
        sep = roots[1] - roots[0]
        double = sep <= ROOT_TOL * max(1.0, abs(roots[0]), abs(roots[1]))
    else:
        double = abs(D) <= (ROOT_TOL * scale) ** 2
    if double:
        s0 = b / c
        if c > 0.0 and s0 > 0.0:
            if init != "zero":
                raise ProfileError("double root: the turning value is an equilibrium")
            return make("tanh", math.sqrt(s0), math.sqrt(c * s0))
        if c > 0.0:
            raise UnsupportedProfileError("unbounded tan-type profile")
        raise NoRealSolutionError("P <= 0 with a double root")
    if D < 0.0:
        if c > 0.0:
            raise UnsupportedProfileError("P has no real roots: unbounded profile")
        raise NoRealSolutionError("P < 0 everywhere")

    r1, r2 = roots
    snap = ROOT_TOL * max(1.0, abs(r1), abs(r2))
    r1 = 0.0 if abs(r1) <= snap else r1
    r2 = 0.0 if abs(r2) <= snap else r2

    if c > 0.0:
        if r1 <= 0.0:
            raise UnsupportedProfileError("bounded region of P >= 0 does not reach s >= 0")
        k = math.sqrt(r1 / r2)
        A, w = math.sqrt(r1), math.sqrt(c * r2)
        if init == "zero":
            return make("sn", A, w, k)
        s = _pick_root(p, (r1, r2), delta, r1)
        if s != r1:
            raise UnsupportedProfileError("turning value at the larger root gives an unbounded profile")
        return make("sn", A, w, k, complete_K(k), p.delta_of_root(r1))

    # c < 0
    if r2 <= 0.0:
        raise NoRealSolutionError("P(s) < 0 for all s > 0")
    if r1 < 0.0:
        k = math.sqrt(r2 / (r2 - r1))
        A, w = math.sqrt(r2), math.sqrt(-c * (r2 - r1))
        if init == "zero":
            return make("cn", A, w, k, -complete_K(k))
        _pick_root(p, (r2,), delta, r2)
        return make("cn", A, w, k, 0.0, p.delta_of_root(r2))
    if init == "zero":
        raise ProfileError("f(0) = 0 is not reachable: P(0) <= 0")
    if r1 == 0.0:
        _pick_root(p, (r2,), delta, r2)
        return make("sech", math.sqrt(r2), math.sqrt(-c * r2), 1.0, 0.0, p.delta_of_root(r2))
    k = math.sqrt(1.0 - r1 / r2)
    A, w = math.sqrt(r2), math.sqrt(-c * r2)
    s = _pick_root(p, (r1, r2), delta, r2)
    phase = 0.0 if s == r2 else complete_K(k)
    return make("dn", A, w, k, phase, p.delta_of_root(s))


def _initial_state(prof: ClosedFormProfile) -> tuple[float, float]:
    return prof.value(0.0), prof.deriv(0.0)


def integrate_profile_numeric(
    q: QuarticCoeffs,
    init: str = "zero",
    delta: int | None = None,
    t_max: float | None = None,
    steps_per_period: int = 4096,
) -> NumericProfile:
    """Integrate ``f'' = 2 f (c f^2 - b)`` with classical RK4 on ``[0, t_max]``.

    Initial data: ``f(0) = 0, f'(0) = sqrt(a)`` or ``f(0) = sqrt(s), f'(0) = 0``.
    The step is ``period / steps_per_period`` (or ``t_max / steps_per_period``
    for aperiodic profiles).  Does not use the closed form.
    """
    p = q.to_phi()
    a, b, c = p.a, p.b, p.c
    if init == "zero":
        if a <= 0.0:
            raise ProfileError("f(0) = 0 needs P(0) > 0")
        f0, d0 = 0.0, math.sqrt(a)
    elif init == "turning":
        roots = [s for s in p.roots() if s > 0.0]
        if not roots:
            raise ProfileError("no positive root of P")
        if delta is None:
            s = roots[0] if c > 0.0 else roots[-1]
        else:
            cand = [s for s in roots if p.delta_of_root(s) == delta]
            if not cand:
                raise ProfileError(f"no positive root with delta={delta}")
            s = cand[0]
        f0, d0 = math.sqrt(s), 0.0
    elif init == "unit":
        f0, d0 = 1.0, math.sqrt(max(p.P(1.0), 0.0))
    else:
        raise ValueError(f"unknown init {init!r}")

    period = _period_estimate(p, init, delta)
    if t_max is None:
        if period is None:
            raise ValueError("t_max is required for aperiodic profiles")
        t_max = period
    h = (period if period is not None else t_max) / steps_per_period
    n = max(1, int(math.ceil(t_max / h - 1e-9)))
    h = t_max / n
    if not (h > 1e-14 * max(1.0, t_max)):
        raise ProfileError("step size underflow")

    def rhs(f):
        return 2.0 * f * (c * f * f - b)

    ts = np.linspace(0.0, t_max, n + 1)
    fs = np.empty(n + 1)
    ds = np.empty(n + 1)
    f, d = f0, d0
    fs[0], ds[0] = f, d
    for i in range(n):
        k1f, k1d = d, rhs(f)
        k2f, k2d = d + 0.5 * h * k1d, rhs(f + 0.5 * h * k1f)
        k3f, k3d = d + 0.5 * h * k2d, rhs(f + 0.5 * h * k2f)
        k4f, k4d = d + h * k3d, rhs(f + h * k3f)
        f = f + h / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f)
        d = d + h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)
        fs[i + 1], ds[i + 1] = f, d
    return NumericProfile(p, ts, fs, ds, period)


def _period_estimate(p: QuarticCoeffs, init: str, delta: int | None) -> float | None:
    # the period comes from complete_K through the same root analysis; it only
    # sets the step size, the trajectory itself is integrated independently
    try:
        return solve_profile(p, init, delta).period
    except ProfileError:
        return None


def tanh_family_conditions(b, alphas, tol: float = 1e-10) -> bool:
    """Check ``1/b1 + 1/b2 + 1/b3 = 0`` and ``b1 b2 b3 = -(alpha1 alpha2 alpha3)^2``.

    ``alphas`` are ``alpha_i`` (their squares enter).  Zero ``b_i`` is a
    domain error.
    """
    b = np.asarray(b, dtype=float)
    al = np.asarray(alphas, dtype=float)
    if b.shape != (3,) or al.shape != (3,):
        raise ValueError("need three b_i and three alpha_i")
    if np.any(b == 0.0):
        raise ValueError("tanh family conditions need all b_i != 0")
    inv = 1.0 / b
    sum_ok = abs(inv.sum()) <= tol * np.max(np.abs(inv))
    prod = float(np.prod(b))
    target = -float(np.prod(al**2))
    prod_ok = abs(prod - target) <= tol * max(abs(prod), abs(target))
    return bool(sum_ok and prod_ok)
