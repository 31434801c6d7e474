"""Dense complex linear algebra for small matrices (d up to ~20).

Matrices are plain ``numpy`` arrays of dtype ``complex128``; columns are
local state vectors. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from upb.errors import DegenerateError, DimensionError, DomainError, NoSolutionError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "inner_product",
    "rank",
    "nullspace_vector",
    "nearest_isometry",
    "root_of_unity",
    "exact_nonsingular_int",
    "bareiss_determinant",
    "is_integer_matrix",
    "normalize_columns",
    "make_rng",
    "format_matrix",
    "parse_matrix",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    ``orth_tol`` is relative to the product of the two vector norms,
    ``rank_tol`` is relative to the largest singular value.
    """

    orth_tol: float = 1e-9
    rank_tol: float = 1e-8
    fixpoint_tol: float = 1e-12

    def __post_init__(self):
        for name in ("orth_tol", "rank_tol", "fixpoint_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if self.orth_tol >= 1 or self.rank_tol >= 1:
            raise DomainError("orth_tol and rank_tol must be < 1")


DEFAULT_TOL = Tolerances()


def _check_finite(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise DomainError("NaN or infinite entries are not allowed")
    return arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {arr.shape}")
    return _check_finite(arr)


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    return _check_finite(arr)


def make_rng(seed) -> np.random.Generator:
    """Seeded generator; ``seed`` may be an int, a tuple of ints or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (tuple, list)):
        return np.random.default_rng(np.random.SeedSequence([int(s) for s in seed]))
    return np.random.default_rng(seed)


def inner_product(a, b) -> complex:
    """Return sum_k conj(a_k) * b_k."""
    a = as_vector(a)
    b = as_vector(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above ``rank_tol * s_max``."""
    m = as_matrix(m)
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s[0]))


def _fix_phase(v: np.ndarray, tol: float) -> np.ndarray:
    scale = np.max(np.abs(v))
    for x in v:
        if abs(x) > tol * scale:
            return v * (abs(x) / x)
    return v


def nullspace_vector(rows: Sequence, dim: int | None = None, seed=0,
                     tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Random unit vector z with ``inner_product(row, z) == 0`` for every row.

    The vector is a complex Gaussian combination of an orthonormal basis of
    the orthogonal complement, phase-fixed so its first non-negligible entry
    is real and positive. ``dim`` is required when ``rows`` is empty.
    """
    rows = [as_vector(r) for r in rows]
    if dim is None:
        if not rows:
            raise DimensionError("dim is required when no rows are given")
        dim = rows[0].size
    if any(r.size != dim for r in rows):
        raise DimensionError("all rows must have length dim")
    rng = make_rng(seed)
    if rows:
        # <row|z> = 0  <=>  conj(R) z = 0
        r = np.conj(np.vstack(rows))
        _, s, vh = np.linalg.svd(r, full_matrices=True)
        cutoff = tol.rank_tol * s[0] if s.size and s[0] > 0 else 0.0
        k = int(np.count_nonzero(s > cutoff)) if s.size and s[0] > 0 else 0
        basis = vh[k:].conj().T
    else:
        basis = np.eye(dim, dtype=complex)
    if basis.shape[1] == 0:
        raise NoSolutionError("rows span the full space")
    coeffs = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
    z = basis @ coeffs
    z /= np.linalg.norm(z)
    return _fix_phase(z, tol.orth_tol)


def nearest_isometry(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Polar factor of ``m``: the closest matrix with orthonormal columns."""
    m = as_matrix(m)
    if m.shape[0] < m.shape[1]:
        raise DimensionError(f"need rows >= cols, got {m.shape}")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s[-1] <= tol.rank_tol * s[0]:
        raise DegenerateError("input does not have full column rank")
    return u @ vh


def root_of_unity(k: int, power: int = 1) -> complex:
    """exp(2*pi*i*power/k)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    power %= k
    # exact values on the axes keep products tidy
    if 4 * power % k == 0:
        return (1, 1j, -1, -1j)[4 * power // k]
    return cmath.exp(2j * math.pi * power / k)


def is_integer_matrix(m) -> bool:
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            return False
        arr = arr.real
    if arr.dtype.kind in "iu":
        return True
    return bool(np.all(np.isfinite(arr)) and np.all(arr == np.round(arr)))


def bareiss_determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exact_nonsingular_int(m) -> bool:
    """True iff the integer matrix ``m`` has nonzero determinant (exact)."""
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {arr.shape}")
    if not is_integer_matrix(arr):
        raise DomainError("matrix entries must be integers")
    if np.iscomplexobj(arr):
        arr = arr.real
    rows = [[int(round(x)) for x in row] for row in arr.tolist()]
    return bareiss_determinant(rows) != 0


def normalize_columns(m) -> np.ndarray:
    m = as_matrix(m)
    norms = np.linalg.norm(m, axis=0)
    if np.any(norms == 0):
        raise DegenerateError("cannot normalize a zero column")
    return m / norms


# -- matrix text format -------------------------------------------------------

def _format_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _format_entry(z: complex) -> str:
    re, im = z.real, z.imag
    if im == 0:
        return _format_real(re)
    im_s = _format_real(im)
    if not im_s.startswith("-"):
        im_s = "+" + im_s
    return f"{_format_real(re)}{im_s}j"


def format_matrix(m) -> str:
    """Serialize as ``rows cols`` followed by one line of entries per row."""
    m = np.asarray(m, dtype=complex)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines.extend(" ".join(_format_entry(z) for z in row) for row in m)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str | Iterable[str]) -> np.ndarray:
    """Inverse of :func:`format_matrix`; integer entries may omit ``+0j``."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.strip() for ln in lines if ln.strip()]
    if not lines:
        raise DimensionError("empty matrix text")
    try:
        rows, cols = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise DimensionError(f"bad header line: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != rows:
        raise DimensionError(f"expected {rows} rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=complex)
    for i, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != cols:
            raise DimensionError(f"row {i} has {len(tokens)} entries, expected {cols}")
        for j, tok in enumerate(tokens):
            try:
                out[i, j] = complex(tok)
            except ValueError:
                out[i, j] = complex(Fraction(tok))
    return _check_finite(out)
