"""Matrix and vector gadgets that the product-basis builders glue together.

Three matrix families carry the orthogonality patterns:

* hollow isometries (``Lemma1Matrix``): d x (d-b), orthonormal columns,
  column j vanishing on rows j..j+b (mod d-b), plus minor conditions;
* band matrices (``Lemma2Matrix``): (r+1) x 2q, column j orthogonal to
  column q + (j+l) mod q for s <= l < s+r, every maximal minor nonzero;
* prism-complement matrices (``Lemma3Matrix``): (4k+1) x (4k+4) whose
  columns realize the complement of the prism graph.

Constructors either use a closed form or generate-and-check with a seed;
every output is certified by :mod:`upb.verifier` before it is returned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from upb import fixtures
from upb.errors import CertificationError, ConstructionError, DegenerateError, DomainError
from upb.graphs import OrthGraph, graph_X, graph_Y, orthogonality_graph_of
from upb.numerics import (
    DEFAULT_TOL,
    Tolerances,
    make_rng,
    nearest_isometry,
    normalize_columns,
    nullspace_vector,
    root_of_unity,
)
from upb.verifier import Certificate, verify_lemma1, verify_lemma2, verify_lemma3

__all__ = [
    "Lemma1Matrix",
    "Lemma2Matrix",
    "Lemma3Matrix",
    "QubitPairFamily",
    "build_U_fourier",
    "build_U_6_1",
    "solve_u61_root",
    "build_U_general",
    "build_V",
    "build_W",
    "build_qubit_pair_family",
    "default_angles",
    "fixture_V_5_3_2",
    "fixture_W_2",
]

log = logging.getLogger(__name__)

MAX_RETRIES = 25
MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class Lemma1Matrix:
    d: int
    b: int
    U: np.ndarray

    def __post_init__(self):
        if self.U.shape != (self.d, self.d - self.b):
            raise DomainError(f"U must be {self.d} x {self.d - self.b}, got {self.U.shape}")

    @property
    def q(self) -> int:
        return self.d - self.b

    def zero_positions(self) -> list[tuple[int, int]]:
        q = self.q
        return [((j + ell) % q, j) for j in range(q) for ell in range(self.b + 1)]


@dataclass(frozen=True)
class Lemma2Matrix:
    q: int
    r: int
    s: int
    V: np.ndarray

    def __post_init__(self):
        if self.V.shape != (self.r + 1, 2 * self.q):
            raise DomainError(f"V must be {self.r + 1} x {2 * self.q}, got {self.V.shape}")


@dataclass(frozen=True)
class Lemma3Matrix:
    k: int
    W: np.ndarray

    def __post_init__(self):
        shape = (4 * self.k + 1, 4 * self.k + 4)
        if self.W.shape != shape:
            raise DomainError(f"W must be {shape}, got {self.W.shape}")

    @property
    def W_v(self) -> np.ndarray:
        return self.W[:, : 2 * self.k + 2]

    @property
    def W_w(self) -> np.ndarray:
        return self.W[:, 2 * self.k + 2:]


def _seed_tuple(seed) -> tuple[int, ...]:
    if seed is None:
        return (0,)
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)


# -- hollow isometries ----------------------------------------------------------

def build_U_fourier(d: int, certify: bool = True, tol: Tolerances = DEFAULT_TOL) -> Lemma1Matrix:
    """Zero-diagonal unitary from a prescribed eigendecomposition (b = 0).

    Eigenvalues 1 and -1 carry the two vectors mixing |0> with the uniform
    vector on the other coordinates; the remaining eigenvalues are the
    (d-2)-th roots of unity with Fourier columns (first column dropped,
    padded with a leading zero) as eigenvectors.
    """
    if d < 4:
        raise DomainError("the Fourier construction needs d >= 4")
    n = d - 1
    v1 = np.full(d, 1 / math.sqrt(2 * d - 2), dtype=complex)
    v1[0] = 1 / math.sqrt(2)
    v2 = -v1
    v2[0] = 1 / math.sqrt(2)
    U = np.outer(v1, v1.conj()) - np.outer(v2, v2.conj())
    for j in range(1, d - 1):
        vec = np.zeros(d, dtype=complex)
        vec[1:] = [root_of_unity(n, j * t) for t in range(n)]
        vec /= math.sqrt(n)
        U += root_of_unity(d - 2, j) * np.outer(vec, vec.conj())
    out = Lemma1Matrix(d, 0, U)
    if certify:
        cert = verify_lemma1(out, tol)
        if not cert.passed:
            raise CertificationError(f"Fourier hollow unitary failed certification:\n{cert.summary()}")
    return out


def solve_u61_root(tol: float = 1e-14) -> float:
    """Real root of 3u^3 - 2u^2 - 3u - 3 by bisection on [1, 2]."""
    a3, a2, a1, a0 = fixtures.U61_CUBIC

    def f(u):
        return ((a3 * u + a2) * u + a1) * u + a0

    lo, hi = 1.0, 2.0
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def build_U_6_1(certify: bool = True, tol: Tolerances = DEFAULT_TOL) -> Lemma1Matrix:
    """The closed-form d=6, b=1 hollow isometry, columns normalized."""
    u = fixtures.u61_coefficients(solve_u61_root())
    out = Lemma1Matrix(6, 1, normalize_columns(fixtures.u61_template(u)))
    if certify:
        cert = verify_lemma1(out, tol)
        if not cert.passed:
            raise CertificationError(f"U_6,1 failed certification:\n{cert.summary()}")
    return out


def _alternating_projection(mask: np.ndarray, rng: np.random.Generator, tol: Tolerances,
                            max_iter: int) -> tuple[np.ndarray, float, float]:
    d, q = mask.shape
    X = nearest_isometry(rng.standard_normal((d, q)) + 1j * rng.standard_normal((d, q)), tol)
    target = tol.fixpoint_tol / 10
    zres = math.inf
    for _ in range(max_iter):
        Y = X.copy()
        Y[mask] = 0
        X = nearest_isometry(Y, tol)
        zres = float(np.max(np.abs(X[mask])))
        if zres < target:
            break
    X[mask] = 0
    ores = float(np.max(np.abs(X.conj().T @ X - np.eye(q))))
    return X, zres, ores


def build_U_general(d: int, b: int, seed=0, tol: Tolerances = DEFAULT_TOL,
                    max_iter: int = MAX_ITERATIONS, retries: int = MAX_RETRIES) -> Lemma1Matrix:
    """Hollow isometry for any b >= 0, d >= 2b + 4 by alternating projections.

    Alternates between zeroing the banded pattern and snapping back to the
    nearest isometry; converged points are then certified exhaustively.
    Each retry draws a fresh start from ``(seed, attempt)``.
    """
    if b < 0 or d < 2 * b + 4:
        raise DomainError(f"need b >= 0 and d >= 2b + 4, got d={d}, b={b}")
    q = d - b
    mask = np.zeros((d, q), dtype=bool)
    for j in range(q):
        for ell in range(b + 1):
            mask[(j + ell) % q, j] = True
    base = _seed_tuple(seed)
    best = {"zero_residual": math.inf, "orthonormality_residual": math.inf}
    for attempt in range(retries):
        X, zres, ores = _alternating_projection(mask, make_rng(base + (attempt,)), tol, max_iter)
        if zres + ores < best["zero_residual"] + best["orthonormality_residual"]:
            best = {"zero_residual": zres, "orthonormality_residual": ores}
        if zres >= tol.fixpoint_tol or ores >= tol.fixpoint_tol:
            log.debug("hollow isometry d=%d b=%d attempt %d did not converge", d, b, attempt)
            continue
        cand = Lemma1Matrix(d, b, X)
        if verify_lemma1(cand, tol).passed:
            return cand
        log.debug("hollow isometry d=%d b=%d attempt %d failed minor checks", d, b, attempt)
    raise ConstructionError(f"no certified hollow isometry for d={d}, b={b} after {retries} tries", best)


def hollow_isometry(d: int, b: int, seed=0, tol: Tolerances = DEFAULT_TOL) -> Lemma1Matrix:
    """Pick the closed form when one exists, otherwise solve numerically."""
    if b == 0:
        return build_U_fourier(d, tol=tol)
    if (d, b) == (6, 1):
        return build_U_6_1(tol=tol)
    return build_U_general(d, b, seed, tol)


# -- band matrices --------------------------------------------------------------

def build_V(q: int, r: int, s: int, seed=0, tol: Tolerances = DEFAULT_TOL,
            retries: int = MAX_RETRIES) -> Lemma2Matrix:
    """Random first half, second half forced by the band orthogonality, then checked."""
    if r < 1 or s < 1 or q < r + s:
        raise DomainError(f"need r, s >= 1 and q >= r + s, got q={q}, r={r}, s={s}")
    base = _seed_tuple(seed)
    for attempt in range(retries):
        rng = make_rng(base + (attempt,))
        V = np.empty((r + 1, 2 * q), dtype=complex)
        V[:, :q] = normalize_columns(rng.standard_normal((r + 1, q)) + 1j * rng.standard_normal((r + 1, q)))
        for m in range(q):
            partners = [V[:, (m - ell) % q] for ell in range(s, s + r)]
            V[:, q + m] = nullspace_vector(partners, dim=r + 1, seed=rng, tol=tol)
        cand = Lemma2Matrix(q, r, s, V)
        cert = verify_lemma2(cand, tol)
        if cert.passed:
            _log_extra_orthogonality(V, q, r, s, tol)
            return cand
        log.debug("band matrix q=%d r=%d s=%d attempt %d failed", q, r, s, attempt)
    raise ConstructionError(f"no certified band matrix for q={q}, r={r}, s={s} after {retries} tries")


def _log_extra_orthogonality(V, q, r, s, tol):
    g = orthogonality_graph_of(list(V.T), tol)
    required = {(j, q + (j + ell) % q) for j in range(q) for ell in range(s, s + r)}
    extra = g.edges - required
    if extra:
        log.info("band matrix has %d accidental orthogonal pairs: %s", len(extra), sorted(extra))


def fixture_V_5_3_2() -> Lemma2Matrix:
    return Lemma2Matrix(5, 3, 2, fixtures.W_5_3_2.copy())


# -- prism-complement matrices ----------------------------------------------------

def build_W(k: int, seed=0, tol: Tolerances = DEFAULT_TOL, retries: int = MAX_RETRIES) -> Lemma3Matrix:
    """Fill columns v_0..v_{2k+1}, w_0..w_{2k+1} in order; each is a random
    unit vector orthogonal to its already placed neighbours in the prism
    complement. The maximal-minor condition is checked afterwards."""
    if k < 1:
        raise DomainError("k must be >= 1")
    d, n = 4 * k + 1, 4 * k + 4
    g = graph_X(k)
    neighbours = [[a for a in range(c) if g.has_edge(a, c)] for c in range(n)]
    base = _seed_tuple(seed)
    for attempt in range(retries):
        rng = make_rng(base + (attempt,))
        W = np.empty((d, n), dtype=complex)
        for c in range(n):
            W[:, c] = nullspace_vector([W[:, a] for a in neighbours[c]], dim=d, seed=rng, tol=tol)
        cand = Lemma3Matrix(k, W)
        if verify_lemma3(cand, tol).passed:
            return cand
        log.debug("prism-complement matrix k=%d attempt %d failed", k, attempt)
    raise ConstructionError(f"no certified prism-complement matrix for k={k} after {retries} tries")


def fixture_W_2() -> Lemma3Matrix:
    return Lemma3Matrix(2, fixtures.W_2.copy())


# -- qubit pairs -------------------------------------------------------------------

@dataclass(frozen=True)
class QubitPairFamily:
    """4k+4 two-qubit product states realizing the prism graph.

    ``first[i]`` and ``second[i]`` are the qubit factors of state ``i``;
    states are ordered v_0..v_{2k+1}, w_0..w_{2k+1}.
    """

    k: int
    angles: tuple[float, ...]
    first: tuple[np.ndarray, ...]
    second: tuple[np.ndarray, ...]

    @property
    def states(self) -> list[np.ndarray]:
        return [np.kron(a, b) for a, b in zip(self.first, self.second)]

    def orthogonality_graph(self, tol: Tolerances = DEFAULT_TOL) -> OrthGraph:
        return orthogonality_graph_of(self.states, tol)


def default_angles(k: int) -> tuple[float, ...]:
    return tuple((j + 1) * math.pi / (4 * k + 7) for j in range(2 * k + 2))


def _basis(theta: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


def build_qubit_pair_family(k: int, angles: Sequence[float] | None = None, margin: float = 1e-6,
                            tol: Tolerances = DEFAULT_TOL) -> QubitPairFamily:
    """Two-qubit states from 2k+2 real orthonormal bases {b_j, b_j^perp}.

    For 0 <= j <= k (second-factor indices mod 2k+2):
    v_2j = b_j (x) b_2j^perp,     v_2j+1 = b_j^perp (x) b_2j+2,
    w_2j = b_j^perp (x) b_2j+1^perp,  w_2j+1 = b_j (x) b_2j+3.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    m = 2 * k + 2
    angles = default_angles(k) if angles is None else tuple(float(a) for a in angles)
    if len(angles) != m:
        raise DomainError(f"need {m} angles, got {len(angles)}")
    bases = [_basis(t) for t in angles]
    for i in range(m):
        for j in range(i + 1, m):
            for x in bases[i]:
                for y in bases[j]:
                    ov = abs(np.vdot(x, y))
                    if ov < margin or ov > 1 - margin:
                        raise DegenerateError(f"bases {i} and {j} are too close to equal or orthogonal")
    v_first, v_second, w_first, w_second = [None] * m, [None] * m, [None] * m, [None] * m
    for j in range(k + 1):
        b, bp = bases[j]
        v_first[2 * j], v_second[2 * j] = b, bases[2 * j][1]
        v_first[2 * j + 1], v_second[2 * j + 1] = bp, bases[(2 * j + 2) % m][0]
        w_first[2 * j], w_second[2 * j] = bp, bases[2 * j + 1][1]
        w_first[2 * j + 1], w_second[2 * j + 1] = b, bases[(2 * j + 3) % m][0]
    fam = QubitPairFamily(k, angles, tuple(v_first + w_first), tuple(v_second + w_second))
    missing = graph_Y(k).edges - fam.orthogonality_graph(tol).edges
    if missing:
        raise CertificationError(f"qubit pair states miss prism edges {sorted(missing)}")
    return fam


def certificate_for(gadget, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Run the matching certifier for any gadget matrix."""
    if isinstance(gadget, Lemma1Matrix):
        return verify_lemma1(gadget, tol)
    if isinstance(gadget, Lemma2Matrix):
        return verify_lemma2(gadget, tol)
    if isinstance(gadget, Lemma3Matrix):
        return verify_lemma3(gadget, tol)
    raise TypeError(f"not a gadget matrix: {type(gadget).__name__}")
