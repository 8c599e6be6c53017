"""Jacobi elliptic functions and the complete elliptic integral of the first kind.

The modulus convention is ``k`` (not the parameter ``m = k**2``) and
``k' = sqrt(1 - k**2)``.  ``sn``, ``cn``, ``dn`` are computed together by the
descending Landen / arithmetic-geometric mean scheme (DLMF 22.20(ii)); the
incomplete integral ``F`` is evaluated by adaptive quadrature and is kept
independent of the AGM path so it can serve as a check on it.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate

__all__ = [
    "kprime",
    "agm_sequence",
    "complete_K",
    "jacobi_sn_cn_dn",
    "incomplete_F",
]

_MAX_ITER = 32
_AGM_TOL = 1e-15


def kprime(k: float) -> float:
    """Complementary modulus ``sqrt(1 - k**2)``."""
    _check_modulus(k, allow_one=True)
    return math.sqrt((1.0 - k) * (1.0 + k))


def _check_modulus(k: float, allow_one: bool) -> None:
    if not math.isfinite(k) or k < 0.0 or k > 1.0:
        raise ValueError(f"modulus k={k!r} outside [0, 1]")
    if k == 1.0 and not allow_one:
        raise ValueError("complete_K diverges at k = 1")


def agm_sequence(k: float) -> tuple[list[float], list[float]]:
    """Return the ``a_n`` and ``c_n`` lists of the AGM started at ``(1, k')``.

    Iteration stops once ``|c_n| <= 1e-15 * a_n`` or after 32 steps.
    """
    a, b, c = 1.0, kprime(k), k
    avals, cvals = [a], [c]
    for _ in range(_MAX_ITER):
        if abs(c) <= _AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        avals.append(a)
        cvals.append(c)
    return avals, cvals


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, ``K(k) = pi / (2 agm(1, k'))``.

    Raises ``ValueError`` for ``k`` outside ``[0, 1)``; ``K`` diverges at ``k = 1``.
    """
    _check_modulus(k, allow_one=False)
    if k == 0.0:
        return 0.5 * math.pi
    avals, _ = agm_sequence(k)
    return 0.5 * math.pi / avals[-1]


def jacobi_sn_cn_dn(t, k: float):
    """Simultaneous ``sn(t; k)``, ``cn(t; k)``, ``dn(t; k)``.

    ``t`` may be a scalar or an array; the three results have its shape.
    The degenerate moduli ``k = 0`` and ``k = 1`` return the trigonometric
    and hyperbolic closed forms.
    """
    _check_modulus(k, allow_one=True)
    tt = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(tt)):
        raise ValueError("jacobi_sn_cn_dn needs finite arguments")

    if k == 0.0:
        sn, cn, dn = np.sin(tt), np.cos(tt), np.ones_like(tt)
    elif k == 1.0:
        sech = 1.0 / np.cosh(tt)
        sn, cn, dn = np.tanh(tt), sech, sech.copy()
    else:
        avals, cvals = agm_sequence(k)
        n = len(avals) - 1
        quarter = 0.5 * math.pi / avals[-1]
        # keep the Landen recursion in [-2K, 2K]
        period = 4.0 * quarter
        tt = tt - period * np.round(tt / period)
        phi = (2.0**n) * avals[-1] * tt
        phi_prev = phi
        for j in range(n, 0, -1):
            phi_prev = phi
            phi = 0.5 * (phi + np.arcsin(cvals[j] / avals[j] * np.sin(phi)))
        sn, cn = np.sin(phi), np.cos(phi)
        denom = np.cos(phi_prev - phi)
        with np.errstate(divide="ignore", invalid="ignore"):
            dn = np.where(np.abs(denom) > 1e-3, cn / denom, np.sqrt(1.0 - (k * sn) ** 2))
        if n == 0:
            dn = np.sqrt(1.0 - (k * sn) ** 2)
    if np.ndim(t) == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def _F_scalar(s: float, k: float) -> float:
    # u = sin(theta) removes the endpoint singularity at u = 1
    theta = math.asin(s)
    val, _ = integrate.quad(
        lambda th: 1.0 / math.sqrt(1.0 - (k * math.sin(th)) ** 2),
        0.0,
        theta,
        epsabs=1e-14,
        epsrel=1e-13,
        limit=200,
    )
    return val


def incomplete_F(s, k: float):
    """Return ``t`` with ``sn(t; k) = s`` for ``|s| <= 1``, by adaptive quadrature.

    Evaluates ``int_0^s du / sqrt((1 - u^2)(1 - k^2 u^2))``.
    """
    if not (0.0 <= k < 1.0):
        raise ValueError(f"incomplete_F needs 0 <= k < 1, got {k!r}")
    ss = np.asarray(s, dtype=float)
    if np.any(np.abs(ss) > 1.0) or not np.all(np.isfinite(ss)):
        raise ValueError("incomplete_F needs |s| <= 1")
    if ss.ndim == 0:
        return _F_scalar(float(ss), k)
    return np.vectorize(_F_scalar, otypes=[float])(ss, k)
