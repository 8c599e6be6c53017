"""Generating matrices: validity, module, discriminant, group action, normal forms.

A non-zero real 3x3 matrix ``A`` is *generating* when every identity
``a[i,al] * a[i,be] == a[j,ga] * a[k,ga]`` holds over all pairs of
permutations ``(i, j, k)``, ``(al, be, ga)`` of ``{0, 1, 2}``.  This is the
same as asking that the derived matrix (see :func:`derived_matrix`) has rank
one.

Matrices are passed around as plain ``numpy`` arrays; :class:`GeneratingMatrix`
is a validated wrapper that also exposes the row coefficients used to build
surfaces.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "NotGeneratingError",
    "InconsistentMatrixError",
    "NotApplicableError",
    "GeneratingMatrix",
    "CanonicalForm",
    "ParabolicForm",
    "DiscriminantReport",
    "derived_matrix",
    "generating_defects",
    "is_generating",
    "from_factors",
    "module_theta",
    "is_elliptic",
    "discriminant",
    "discriminant_report",
    "act",
    "equivalence_lambdas",
    "canonical_elliptic_form",
    "canonical_matrix",
    "classify_parabolic",
    "row_coefficients",
    "parse_matrix",
    "read_matrix",
    "format_matrix",
]

DEFAULT_TOL = float(os.environ.get("MAXSURF_TOL", "1e-10"))

_PERMS = list(itertools.permutations(range(3)))


class NotGeneratingError(ValueError):
    """The matrix violates the generating identities."""


class InconsistentMatrixError(ValueError):
    """Quantities that must agree for a generating matrix do not."""


class NotApplicableError(ValueError):
    """The operation does not apply to this class of matrix."""


def _as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=float)
    if M.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {M.shape}")
    return M


def _scale(M: np.ndarray) -> float:
    return float(np.max(np.abs(M)))


def derived_matrix(A) -> np.ndarray:
    """Rows ``(a11, a22, a33)``, ``(a23, a31, a12)``, ``(a32, a13, a21)``."""
    M = _as_matrix(A)
    return np.array(
        [
            [M[0, 0], M[1, 1], M[2, 2]],
            [M[1, 2], M[2, 0], M[0, 1]],
            [M[2, 1], M[0, 2], M[1, 0]],
        ]
    )


def _minors(D: np.ndarray) -> np.ndarray:
    out = []
    for r1, r2 in itertools.combinations(range(3), 2):
        for c1, c2 in itertools.combinations(range(3), 2):
            out.append(D[r1, c1] * D[r2, c2] - D[r1, c2] * D[r2, c1])
    return np.array(out)


def generating_defects(A) -> np.ndarray:
    """Residuals of all 36 pairwise-product identities, in permutation order."""
    M = _as_matrix(A)
    res = []
    for i, j, k in _PERMS:
        for al, be, ga in _PERMS:
            res.append(M[i, al] * M[i, be] - M[j, ga] * M[k, ga])
    return np.array(res)


def is_generating(A, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``A != 0`` and every 2x2 minor of the derived matrix vanishes.

    The tolerance is relative to the square of the largest entry.
    """
    M = _as_matrix(A)
    scale = _scale(M)
    if not np.all(np.isfinite(M)) or scale == 0.0:
        return False
    return bool(np.all(np.abs(_minors(derived_matrix(M))) <= tol * scale**2))


def from_factors(p1: float, q1: float, r1: float, p2: float, q2: float, r2: float) -> np.ndarray:
    """Generating matrix built from two factor vectors ``(p1, q1, r1)``, ``(p2, q2, r2)``."""
    if p1 * p1 + q1 * q1 + r1 * r1 == 0.0 or p2 * p2 + q2 * q2 + r2 * r2 == 0.0:
        raise ValueError("degenerate factor vector")
    return np.array(
        [
            [p1 * p2, q1 * r2, r1 * q2],
            [r1 * r2, p1 * q2, q1 * p2],
            [q1 * q2, r1 * p2, p1 * r2],
        ]
    )


def module_theta(A, tol: float = DEFAULT_TOL) -> float:
    """Common value of the three row products and three column products.

    Raises ``InconsistentMatrixError`` when the six products disagree.
    """
    M = _as_matrix(A)
    prods = np.concatenate([np.prod(M, axis=1), np.prod(M, axis=0)])
    scale = _scale(M)
    if np.ptp(prods) > tol * max(scale**3, np.finfo(float).tiny):
        raise InconsistentMatrixError(f"row/column products disagree: {prods}")
    return float(prods[0])


def is_elliptic(A, tol: float = DEFAULT_TOL) -> bool:
    """``theta(A) != 0`` (otherwise the matrix is parabolic)."""
    M = _as_matrix(A)
    return abs(module_theta(M, tol)) > tol * _scale(M) ** 3


@dataclass(frozen=True)
class DiscriminantReport:
    """Per-column values ``Delta_alpha / 4``, each listed for ``i = 1, 2, 3``."""

    quarter_deltas: np.ndarray  # shape (3 columns, 3 row choices)

    @property
    def by_column(self) -> np.ndarray:
        return self.quarter_deltas.mean(axis=1)

    @property
    def value(self) -> float:
        return float(self.by_column[1])

    def columns_agree(self, tol: float = DEFAULT_TOL) -> bool:
        cols = self.by_column
        return bool(np.ptp(cols) <= tol * max(1.0, float(np.max(np.abs(cols)))))


def discriminant_report(A, tol: float = DEFAULT_TOL) -> DiscriminantReport:
    """Evaluate ``Delta_alpha`` for every column and every choice of row ``i``.

    For fixed ``alpha`` the three values must agree; otherwise the matrix is
    not generating and ``InconsistentMatrixError`` is raised.  Agreement
    across different columns is reported but not required.
    """
    M = _as_matrix(A)
    scale = _scale(M)
    vals = np.empty((3, 3))
    for al in range(3):
        be, ga = [c for c in range(3) if c != al]
        for i in range(3):
            j, k = [r for r in range(3) if r != i]
            d = (M[j, al] + M[k, al] - M[i, al]) ** 2 - 4.0 * M[i, be] * M[i, ga]
            vals[al, i] = 0.25 * d
        if np.ptp(vals[al]) > tol * max(scale**2, np.finfo(float).tiny):
            raise InconsistentMatrixError(
                f"Delta for column {al + 1} depends on the row choice: {vals[al]}"
            )
    return DiscriminantReport(vals)


def discriminant(A, tol: float = DEFAULT_TOL) -> float:
    """``Delta(A) = Delta_2 / 4``, computed from the middle column."""
    return discriminant_report(A, tol).value


def act(lambda1: float, lambda2: float, A) -> np.ndarray:
    """Action of ``(lambda1, lambda2)`` in ``R+ x R+`` on a 3x3 matrix."""
    if not (lambda1 > 0.0 and lambda2 > 0.0):
        raise ValueError("the group action needs lambda1, lambda2 > 0")
    M = _as_matrix(A)
    l1, l2 = float(lambda1), float(lambda2)
    return np.array(
        [
            [M[0, 0] / l1, M[0, 1], l1 * M[0, 2]],
            [M[1, 0] / l2, M[1, 1], l2 * M[1, 2]],
            [l1 * l2 * M[2, 0], M[2, 1], M[2, 2] / (l1 * l2)],
        ]
    )


def equivalence_lambdas(A, B, tol: float = DEFAULT_TOL) -> tuple[float, float] | None:
    """Return ``(lambda1, lambda2)`` with ``act(lambda1, lambda2, A) == B``, or None.

    ``lambda1`` and ``lambda2`` are read off the first column where it is
    non-zero; zero entries fall back to the other columns carrying the same
    factor.
    """
    M, N = _as_matrix(A), _as_matrix(B)
    scale = max(_scale(M), _scale(N))
    small = tol * scale

    def ratio(candidates):
        # each candidate: (entry of A, entry of B, power of lambda)
        for a, b, p in candidates:
            if abs(a) > small and abs(b) > small:
                r = b / a
                if r <= 0.0:
                    return None
                return r ** (1.0 / p)
        return 1.0

    l1 = ratio([(M[0, 0], N[0, 0], -1), (M[0, 2], N[0, 2], 1)])
    l2 = ratio([(M[1, 0], N[1, 0], -1), (M[1, 2], N[1, 2], 1)])
    if l1 is None or l2 is None:
        return None
    if np.max(np.abs(act(l1, l2, M) - N)) <= small * 10:
        return (l1, l2)
    return None


@dataclass(frozen=True)
class CanonicalForm:
    """Parameters ``(a, b, c, eps2, eps3)`` of the elliptic normal form.

    ``lambdas`` is the group element that maps the original matrix onto
    :meth:`matrix`.
    """

    a: float
    b: float
    c: float
    eps2: int
    eps3: int
    lambdas: tuple[float, float] = (1.0, 1.0)

    def matrix(self) -> np.ndarray:
        return canonical_matrix(self.a, self.b, self.c, self.eps2, self.eps3)


def canonical_matrix(a: float, b: float, c: float, eps2: int, eps3: int) -> np.ndarray:
    e2, e3 = eps2, eps3
    return np.array(
        [
            [a, b, c],
            [e2 * e3 * c, e2 * a, e3 * b],
            [e2 * e3 * b, e2 * c, e3 * a],
        ],
        dtype=float,
    )


def canonical_elliptic_form(A, tol: float = DEFAULT_TOL) -> CanonicalForm:
    """Bring an elliptic generating matrix to the normal form.

    With ``eps_k = sign(a_kk / a_11)`` the group element is
    ``lambda1 = eps2 a11 / a22``, ``lambda2 = eps3 a33 / a11``.
    """
    M = _as_matrix(A)
    if not is_generating(M, tol):
        raise NotGeneratingError("canonical form needs a generating matrix")
    if not is_elliptic(M, tol):
        raise NotApplicableError("canonical elliptic form needs theta(A) != 0")
    e2 = 1 if M[1, 1] / M[0, 0] > 0 else -1
    e3 = 1 if M[2, 2] / M[0, 0] > 0 else -1
    l1 = e2 * M[0, 0] / M[1, 1]
    l2 = e3 * M[2, 2] / M[0, 0]
    B = act(l1, l2, M)
    a, b, c = B[0]
    if np.max(np.abs(B - canonical_matrix(a, b, c, e2, e3))) > math.sqrt(tol) * _scale(B):
        raise InconsistentMatrixError("scaled matrix does not match the normal form")
    return CanonicalForm(float(a), float(b), float(c), e2, e3, (float(l1), float(l2)))


# zero patterns of the three parabolic normal forms; True marks a free entry
_PARABOLIC_FREE = (
    np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=bool),
    np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=bool),
    np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=bool),
)


@dataclass(frozen=True)
class ParabolicForm:
    """Result of :func:`classify_parabolic`.

    ``form`` is 1, 2 or 3 (the order of the normal forms), or None when no
    pattern fits; ``strict`` says every free entry is non-zero.  ``permuted``
    equals ``A[row_perm][:, col_perm]``.
    """

    form: int | None
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    zero_line: bool
    strict: bool
    permuted: np.ndarray = field(repr=False, compare=False, default=None)


def classify_parabolic(A, tol: float = DEFAULT_TOL) -> ParabolicForm:
    """Match a parabolic generating matrix to a normal form by brute force.

    All 36 row/column permutation pairs are tried.  A strict match (every
    free entry non-zero) wins; otherwise a matrix with a zero row or column
    is flagged and matched to the first pattern whose zeros it satisfies.
    """
    M = _as_matrix(A)
    if not is_generating(M, tol):
        raise NotGeneratingError("classification needs a generating matrix")
    if is_elliptic(M, tol):
        raise NotApplicableError("matrix is elliptic (theta != 0)")
    small = tol * _scale(M)
    zero = np.abs(M) <= small
    zero_line = bool(np.any(zero.all(axis=1)) or np.any(zero.all(axis=0)))
    loose = None
    for f, free in enumerate(_PARABOLIC_FREE, start=1):
        for rp in _PERMS:
            for cp in _PERMS:
                Z = zero[np.ix_(rp, cp)]
                if not np.all(Z[~free]):
                    continue
                if not np.any(Z[free]):
                    return ParabolicForm(f, rp, cp, zero_line, True, M[np.ix_(rp, cp)])
                if loose is None:
                    loose = ParabolicForm(f, rp, cp, zero_line, False, M[np.ix_(rp, cp)])
    if loose is not None and zero_line:
        return loose
    return ParabolicForm(None, (0, 1, 2), (0, 1, 2), zero_line, False, M)


def row_coefficients(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read ``(a_i, b_i, c_i)`` from a matrix laid out as ``[a_i, beta_i, c_i]``.

    ``b_i = (beta_j + beta_k - beta_i) / 2``.
    """
    M = _as_matrix(A)
    beta = M[:, 1]
    b = 0.5 * (beta.sum() - 2.0 * beta)
    return M[:, 0].copy(), b, M[:, 2].copy()


@dataclass(frozen=True, eq=False)
class GeneratingMatrix:
    """A validated generating matrix.

    Construction raises ``NotGeneratingError`` if the identities fail at
    ``tol``.  ``np.asarray(gm)`` gives the entries.
    """

    entries: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        M = _as_matrix(self.entries).copy()
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        if not is_generating(M, self.tol):
            raise NotGeneratingError(f"not a generating matrix:\n{M}")

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    @property
    def theta(self) -> float:
        return module_theta(self.entries, self.tol)

    @property
    def discriminant(self) -> float:
        return discriminant(self.entries, self.tol)

    @property
    def elliptic(self) -> bool:
        return is_elliptic(self.entries, self.tol)

    @property
    def beta(self) -> np.ndarray:
        return self.entries[:, 1].copy()

    def row_coefficients(self):
        return row_coefficients(self.entries)

    def act(self, lambda1: float, lambda2: float) -> GeneratingMatrix:
        return GeneratingMatrix(act(lambda1, lambda2, self.entries), self.tol)


def parse_matrix(text: str) -> np.ndarray:
    """Parse nine whitespace-separated reals in row-major order."""
    tokens = text.split()
    if len(tokens) != 9:
        raise ValueError(f"expected 9 numbers, found {len(tokens)}")
    try:
        vals = [float(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"could not parse matrix: {exc}") from None
    return np.array(vals).reshape(3, 3)


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def format_matrix(A) -> str:
    M = _as_matrix(A)
    return "\n".join(" ".join(f"{v:.17g}" for v in row) for row in M) + "\n"
