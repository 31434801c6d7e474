"""Certificates for gadget matrices and product bases.

Unextendibility is decided exactly: a product state orthogonal to every
member of a set S exists iff S can be split among the parties so that no
party's share spans that party's space. :func:`is_extendible` searches the
assignments depth-first and, when it finds one, builds the orthogonal
product state and re-checks it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Any, Sequence

import numpy as np

from upb.basis import ProductBasis, vector_to_json
from upb.errors import DomainError, ResourceError
from upb.graphs import graph_X
from upb.numerics import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    as_vector,
    bareiss_determinant,
    is_integer_matrix,
    nullspace_vector,
)

if TYPE_CHECKING:
    from upb.gadgets import Lemma1Matrix, Lemma2Matrix, Lemma3Matrix

__all__ = [
    "Check",
    "Certificate",
    "submatrix_sweep",
    "verify_mutual_orthogonality",
    "verify_spanning_threshold",
    "spanning_threshold",
    "verify_lemma1",
    "verify_lemma2",
    "verify_lemma3",
    "is_extendible",
    "verify_upb",
    "max_orthogonal_count_qubits",
    "WITNESS_TOL",
    "DEFAULT_BUDGET",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
WITNESS_TOL = 1e-8
DEFAULT_BUDGET = 5 * 10**7
_SWEEP_CHUNK = 20000


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    residual: float | None = None
    count: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.residual is not None:
            out["residual"] = self.residual
        if self.count is not None:
            out["count"] = self.count
        return out


@dataclass
class Certificate:
    subject: str
    checks: list[Check] = field(default_factory=list)
    witness: Any = None
    mode: str = "exact"
    data: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Certificate") -> None:
        self.checks.extend(other.checks)
        if other.witness is not None and self.witness is None:
            self.witness = other.witness
        self.data.update(other.data)

    def as_dict(self) -> dict:
        out = {
            "subject": self.subject,
            "verdict": self.verdict,
            "mode": self.mode,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.data:
            out["data"] = _jsonable(self.data)
        return out

    def summary(self) -> str:
        lines = [f"{self.subject}: {self.verdict.upper()} ({self.mode})"]
        for c in self.checks:
            extra = []
            if c.count is not None:
                extra.append(f"n={c.count}")
            if c.residual is not None:
                extra.append(f"worst={c.residual:.3g}")
            if c.detail:
                extra.append(c.detail)
            lines.append(f"  [{c.status:>4}] {c.name}" + (f"  ({'; '.join(extra)})" if extra else ""))
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        if obj.ndim == 1 and np.iscomplexobj(obj):
            return vector_to_json(obj)
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# -- helpers ------------------------------------------------------------------

def _overlap(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>| relative to |a||b|."""
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


def _pair_check(name: str, mat: np.ndarray, pairs: Sequence[tuple[int, int]],
                tol: Tolerances) -> Check:
    worst, worst_pair = 0.0, None
    exact = is_integer_matrix(mat)
    for a, b in pairs:
        if exact and np.vdot(mat[:, a], mat[:, b]) == 0:
            continue
        ov = _overlap(mat[:, a], mat[:, b])
        if ov > worst:
            worst, worst_pair = ov, (a, b)
    ok = worst <= tol.orth_tol
    detail = "" if ok else f"columns {worst_pair} not orthogonal"
    return Check(name, PASS if ok else FAIL, detail, worst, len(pairs))


def _chunks(it, size):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def submatrix_sweep(mat, row_sets: Sequence[Sequence[int]] | None, col_sets: Sequence[Sequence[int]],
                    tol: Tolerances = DEFAULT_TOL, exact: bool | None = None) -> dict:
    """Test every square submatrix ``mat[rows, cols]`` for nonsingularity.

    ``row_sets=None`` means all rows (the column sets must then be square).
    Returns ``ok``, ``count``, ``min_ratio`` (smallest s_min/s_max),
    ``min_sigma`` (smallest s_min), ``first_failure`` and ``exact``.
    Integer matrices use exact fraction-free determinants.
    """
    mat = np.asarray(mat)
    if exact is None:
        exact = is_integer_matrix(mat)
    col_sets = [tuple(c) for c in col_sets]
    row_sets = [tuple(range(mat.shape[0]))] if row_sets is None else [tuple(r) for r in row_sets]
    result = {"ok": True, "count": 0, "min_ratio": math.inf, "min_sigma": math.inf,
              "first_failure": None, "exact": bool(exact)}
    if not col_sets or not row_sets:
        return result
    if exact:
        ints = np.asarray(np.real(mat)).round().astype(np.int64).tolist()
        for rows in row_sets:
            for cols in col_sets:
                det = bareiss_determinant([[ints[i][j] for j in cols] for i in rows])
                result["count"] += 1
                if det == 0 and result["ok"]:
                    result["ok"] = False
                    result["first_failure"] = (rows, cols)
        return result
    mat = np.asarray(mat, dtype=complex)
    cols_arr = np.array(col_sets, dtype=np.intp)
    for rows_chunk in _chunks(row_sets, max(1, _SWEEP_CHUNK // len(col_sets))):
        rows_arr = np.array(rows_chunk, dtype=np.intp)
        sub = mat[rows_arr[:, None, :, None], cols_arr[None, :, None, :]]
        sv = np.linalg.svd(sub, compute_uv=False)
        smax, smin = sv[..., 0], sv[..., -1]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(smax > 0, smin / smax, 0.0)
        result["count"] += ratio.size
        result["min_ratio"] = min(result["min_ratio"], float(ratio.min()))
        result["min_sigma"] = min(result["min_sigma"], float(smin.min()))
        bad = np.argwhere(ratio <= tol.rank_tol)
        if bad.size and result["ok"]:
            i, j = bad[0]
            result["ok"] = False
            result["first_failure"] = (rows_chunk[i], col_sets[j])
    return result


def _sweep_check(name: str, sweep: dict) -> Check:
    kind = "exact determinants" if sweep["exact"] else f"min s_min/s_max={sweep['min_ratio']:.3g}"
    detail = kind if sweep["ok"] else f"singular submatrix rows/cols {sweep['first_failure']}"
    residual = None if sweep["exact"] else sweep["min_ratio"]
    return Check(name, PASS if sweep["ok"] else FAIL, detail, residual, sweep["count"])


# -- product bases ------------------------------------------------------------

def verify_mutual_orthogonality(pb: ProductBasis, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    cert = Certificate("mutual orthogonality")
    worst, worst_pair = 0.0, None
    grams = []
    for j in range(pb.p):
        mat = np.column_stack(pb.party_vectors(j))
        grams.append(np.abs(mat.conj().T @ mat))
    total = np.ones((pb.n, pb.n))
    for g in grams:
        total = total * g
    for a, b in combinations(range(pb.n), 2):
        if total[a, b] > worst:
            worst, worst_pair = float(total[a, b]), (a, b)
    ok = worst <= tol.orth_tol
    npairs = pb.n * (pb.n - 1) // 2
    cert.add(Check("mutual_orthogonality", PASS if ok else FAIL,
                   "" if ok or worst_pair is None else f"states {worst_pair} overlap",
                   float(worst), npairs))
    if not ok:
        cert.witness = {"pair": list(worst_pair)}
    return cert


def verify_spanning_threshold(vectors: Sequence, m: int, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Pass iff every ``m``-subset of ``vectors`` spans the whole space."""
    vecs = [as_vector(v) for v in vectors]
    if m > len(vecs) or m < 1:
        raise DomainError(f"subset size {m} out of range for {len(vecs)} vectors")
    d = vecs[0].size
    cert = Certificate(f"spanning threshold m={m}")
    name = f"every_{m}_subset_spans"
    if m < d:
        cert.add(Check(name, FAIL, f"{m} vectors cannot span C^{d}", None, 0))
        cert.witness = {"subset": list(range(m))}
        return cert
    mat = np.column_stack(vecs)
    # an m-subset (m >= d) spans iff some d x d minor is nonsingular; use SVD of d x m blocks
    subsets = list(combinations(range(len(vecs)), m))
    count, first = 0, None
    min_ratio = math.inf
    for chunk in _chunks(subsets, _SWEEP_CHUNK):
        idx = np.array(chunk, dtype=np.intp)
        blocks = np.transpose(mat[:, idx], (1, 0, 2))
        sv = np.linalg.svd(blocks, compute_uv=False)
        ratio = sv[:, d - 1] / np.maximum(sv[:, 0], np.finfo(float).tiny)
        count += len(chunk)
        min_ratio = min(min_ratio, float(ratio.min()))
        bad = np.flatnonzero(ratio <= tol.rank_tol)
        if bad.size and first is None:
            first = chunk[bad[0]]
    ok = first is None
    cert.add(Check(name, PASS if ok else FAIL, "" if ok else f"subset {first} is rank deficient",
                   min_ratio, count))
    if not ok:
        cert.witness = {"subset": list(first)}
    return cert


def spanning_threshold(vectors: Sequence, tol: Tolerances = DEFAULT_TOL) -> int | None:
    """Smallest m such that every m-subset spans, or None if the vectors never span."""
    vecs = [as_vector(v) for v in vectors]
    d = vecs[0].size
    for m in range(d, len(vecs) + 1):
        if verify_spanning_threshold(vecs, m, tol).passed:
            return m
    return None


def _deficiency_oracle(vectors: list[np.ndarray], tol: Tolerances):
    """Memoized test: does the subset given by a bitmask fail to span?"""
    d = vectors[0].size
    mat = np.column_stack(vectors)
    cache: dict[int, bool] = {}

    def deficient(mask: int) -> bool:
        if mask.bit_count() < d:
            return True
        hit = cache.get(mask)
        if hit is None:
            idx = [i for i in range(len(vectors)) if mask >> i & 1]
            s = np.linalg.svd(mat[:, idx], compute_uv=False)
            hit = bool(s[d - 1] <= tol.rank_tol * s[0])
            cache[mask] = hit
        return hit

    return deficient


def _search(pb: ProductBasis, tol: Tolerances, budget: int):
    """Depth-first assignment search; returns (witness or None, nodes, invalid witnesses)."""
    oracles = [_deficiency_oracle(pb.party_vectors(j), tol) for j in range(pb.p)]
    masks = [0] * pb.p
    nodes = 0
    invalid = 0

    def recurse(i: int):
        nonlocal nodes, invalid
        if i == pb.n:
            witness = _build_witness(pb, masks, tol)
            if witness is not None:
                return witness
            invalid += 1
            return None
        for j in range(pb.p):
            nodes += 1
            if nodes > budget:
                raise ResourceError(f"assignment search exceeded budget of {budget} nodes")
            trial = masks[j] | (1 << i)
            if oracles[j](trial):
                saved = masks[j]
                masks[j] = trial
                found = recurse(i + 1)
                masks[j] = saved
                if found is not None:
                    return found
        return None

    witness = recurse(0)
    return witness, nodes, invalid


def _build_witness(pb: ProductBasis, masks: list[int], tol: Tolerances):
    local = []
    for j, mask in enumerate(masks):
        rows = [pb.states[i][j] for i in range(pb.n) if mask >> i & 1]
        local.append(nullspace_vector(rows, dim=pb.dims[j], seed=(j, mask), tol=tol))
    overlaps = [math.prod(abs(np.vdot(st[j], local[j])) for j in range(pb.p)) for st in pb.states]
    worst = max(overlaps)
    if worst > WITNESS_TOL:
        return None
    assignment = [next(j for j in range(pb.p) if masks[j] >> i & 1) for i in range(pb.n)]
    return {"local": local, "assignment": assignment, "max_overlap": float(worst)}


def is_extendible(pb: ProductBasis, tol: Tolerances = DEFAULT_TOL,
                  budget: int = DEFAULT_BUDGET) -> Certificate:
    """Exact extendibility decision by assignment enumeration.

    The certificate's ``unextendible`` check passes when no product state is
    orthogonal to every member; otherwise it fails and ``witness`` holds the
    orthogonal product state (``witness["local"]``, one vector per party).
    ``budget`` caps the number of search nodes.
    """
    cert = Certificate("unextendibility (exact assignment search)")
    witness, nodes, invalid = _search(pb, tol, budget)
    cert.data["search_nodes"] = nodes
    if witness is not None:
        cert.witness = witness
        cert.add(Check("unextendible", FAIL,
                       f"orthogonal product state found (assignment {witness['assignment']})",
                       witness["max_overlap"], nodes))
    elif invalid:
        cert.add(Check("unextendible", INCONCLUSIVE,
                       f"{invalid} rank-deficient assignments gave no valid witness", None, nodes))
    else:
        cert.add(Check("unextendible", PASS, "no deficient assignment exists", None, nodes))
    return cert


def _sufficient_unextendibility(pb: ProductBasis, tol: Tolerances) -> Certificate:
    cert = Certificate("unextendibility (spanning thresholds)", mode="sufficient")
    capacity = []
    for j in range(pb.p):
        m = spanning_threshold(pb.party_vectors(j), tol)
        capacity.append(pb.n if m is None else m - 1)
    total = sum(capacity)
    ok = total < pb.n
    cert.data["spanning_capacity"] = capacity
    cert.add(Check("unextendible", PASS if ok else INCONCLUSIVE,
                   f"a product state can be orthogonal to at most {total} of {pb.n} states"
                   + ("" if ok else "; the counting bound does not decide"),
                   None, pb.n))
    return cert


def _party_graph_check(pb: ProductBasis, tol: Tolerances) -> tuple[Check, list]:
    covered = np.zeros((pb.n, pb.n), dtype=bool)
    graphs = []
    for j in range(pb.p):
        mat = np.column_stack(pb.party_vectors(j))
        gram = np.abs(mat.conj().T @ mat)
        orth = gram <= tol.orth_tol
        np.fill_diagonal(orth, False)
        covered |= orth
        graphs.append([(a, b) for a, b in combinations(range(pb.n), 2) if orth[a, b]])
    off = ~np.eye(pb.n, dtype=bool)
    missing = np.argwhere(off & ~covered)
    ok = missing.size == 0
    detail = "" if ok else f"pair {tuple(int(x) for x in missing[0])} orthogonal on no party"
    return Check("party_graphs_union_complete", PASS if ok else FAIL, detail, None, pb.n), graphs


def verify_upb(pb: ProductBasis, tol: Tolerances = DEFAULT_TOL, mode: str = "auto",
               budget: int = DEFAULT_BUDGET) -> Certificate:
    """Certify that ``pb`` is an unextendible product basis.

    ``mode`` is ``"exact"`` (assignment search, may raise ResourceError),
    ``"sufficient"`` (spanning-threshold counting bound) or ``"auto"``
    (exact, falling back to sufficient when the budget runs out).
    """
    if mode not in ("auto", "exact", "sufficient"):
        raise DomainError(f"unknown mode {mode!r}")
    cert = Certificate(f"UPB candidate in {'x'.join(f'C^{d}' for d in pb.dims)}, {pb.n} states")
    cert.extend(verify_mutual_orthogonality(pb, tol))
    graph_check, graphs = _party_graph_check(pb, tol)
    cert.add(graph_check)
    cert.data["party_graphs"] = graphs
    if mode == "sufficient":
        sub = _sufficient_unextendibility(pb, tol)
    else:
        try:
            sub = is_extendible(pb, tol, budget)
        except ResourceError:
            if mode == "exact":
                raise
            sub = _sufficient_unextendibility(pb, tol)
    cert.mode = sub.mode
    cert.extend(sub)
    return cert


def max_orthogonal_count_qubits(first: Sequence, second: Sequence, tol: Tolerances = DEFAULT_TOL) -> int:
    """Largest number of the two-qubit product states first[i] (x) second[i]
    that a single nonzero product state can be orthogonal to.

    On a qubit, the only vectors orthogonal to something are the perps of
    the local vectors, so the candidates are finite.
    """
    first = [as_vector(v) for v in first]
    second = [as_vector(v) for v in second]

    def perp(v):
        return np.array([-np.conj(v[1]), np.conj(v[0])])

    def hits(vectors, z):
        return {i for i, v in enumerate(vectors) if _overlap(v, z) <= tol.orth_tol}

    cand1 = [hits(first, perp(v)) for v in first] + [set()]
    cand2 = [hits(second, perp(v)) for v in second] + [set()]
    return max(len(a | b) for a in cand1 for b in cand2)


# -- gadget certifiers ----------------------------------------------------------

def _orthonormality_residual(mat: np.ndarray) -> float:
    q = mat.shape[1]
    return float(np.max(np.abs(mat.conj().T @ mat - np.eye(q))))


def verify_lemma1(cand: "Lemma1Matrix", tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Orthonormal columns, banded zero pattern, and the two minor conditions."""
    d, b, U = cand.d, cand.b, as_matrix(cand.U)
    q = d - b
    cert = Certificate(f"hollow isometry d={d}, b={b}")
    if U.shape != (d, q):
        cert.add(Check("shape", FAIL, f"expected {(d, q)}, got {U.shape}"))
        return cert
    res = _orthonormality_residual(U)
    cert.add(Check("orthonormal_columns", PASS if res <= tol.orth_tol else FAIL, "", res, q * q))
    zeros = [((j + ell) % q, j) for j in range(q) for ell in range(b + 1)]
    zres = max(abs(U[i, j]) for i, j in zeros)
    cert.add(Check("zero_pattern", PASS if zres <= tol.orth_tol else FAIL, "", float(zres), len(zeros)))
    sizes = [r for r in range(b + 2, q + 1) if r != q - 1]
    total = {"ok": True, "count": 0, "min_ratio": math.inf, "min_sigma": math.inf,
             "first_failure": None, "exact": False}
    for r in sizes:
        sw = submatrix_sweep(U, list(combinations(range(d), r)), list(combinations(range(q), r)), tol)
        total["count"] += sw["count"]
        total["min_ratio"] = min(total["min_ratio"], sw["min_ratio"])
        total["min_sigma"] = min(total["min_sigma"], sw["min_sigma"])
        if not sw["ok"] and total["ok"]:
            total["ok"], total["first_failure"] = False, sw["first_failure"]
    cert.add(_sweep_check("minors_r_by_r", total))
    cert.data["min_sigma_minors"] = total["min_sigma"]
    if b > 0:
        sw = submatrix_sweep(U, list(combinations(range(q, d), b)), list(combinations(range(q), b)), tol)
        cert.add(_sweep_check("bottom_rows_minors", sw))
    else:
        cert.add(Check("bottom_rows_minors", PASS, "vacuous for b = 0", None, 0))
    return cert


def verify_lemma2(cand: "Lemma2Matrix", tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Shifted-band orthogonality and nonsingularity of every maximal minor."""
    q, r, s = cand.q, cand.r, cand.s
    V = np.asarray(cand.V)
    cert = Certificate(f"band matrix q={q}, r={r}, s={s}")
    if V.shape != (r + 1, 2 * q):
        cert.add(Check("shape", FAIL, f"expected {(r + 1, 2 * q)}, got {V.shape}"))
        return cert
    pairs = [(j, (j + ell) % q + q) for j in range(q) for ell in range(s, s + r)]
    cert.add(_pair_check("band_orthogonality", V, pairs, tol))
    sw = submatrix_sweep(V, None, list(combinations(range(2 * q), r + 1)), tol)
    cert.add(_sweep_check("maximal_minors", sw))
    return cert


def lemma3_pairs(k: int) -> dict[str, list[tuple[int, int]]]:
    """Required orthogonal column pairs, split by condition (v-v, w-w, v-w)."""
    m = 2 * k + 2
    g = graph_X(k)
    out = {"vv": [], "ww": [], "vw": []}
    for a, b in g.edge_list():
        if b < m:
            out["vv"].append((a, b))
        elif a >= m:
            out["ww"].append((a, b))
        else:
            out["vw"].append((a, b))
    return out


def verify_lemma3(cand: "Lemma3Matrix", tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Complement-of-prism orthogonality pattern plus every (4k+1)-column minor."""
    k = cand.k
    W = np.asarray(cand.W)
    d, n = 4 * k + 1, 4 * k + 4
    cert = Certificate(f"prism-complement matrix k={k}")
    if W.shape != (d, n):
        cert.add(Check("shape", FAIL, f"expected {(d, n)}, got {W.shape}"))
        return cert
    pairs = lemma3_pairs(k)
    cert.add(_pair_check("v_block_orthogonality", W, pairs["vv"], tol))
    cert.add(_pair_check("w_block_orthogonality", W, pairs["ww"], tol))
    cert.add(_pair_check("cross_orthogonality", W, pairs["vw"], tol))
    sw = submatrix_sweep(W, None, list(combinations(range(n), d)), tol)
    cert.add(_sweep_check("maximal_minors", sw))
    return cert
