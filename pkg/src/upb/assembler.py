"""End-to-end builders for minimum-size unextendible product bases.

Two shapes are covered:

* the general family (d_p - 1 >= sum_{j<p}(d_j - 1) >= 3, parity rule
  failing): party p gets the standard basis plus a hollow isometry, the
  other parties get band matrices whose shifted bands tile the rest of the
  complete graph;
* (2, 2, 4k+1): two qubits carrying the prism graph, the large party
  carrying its complement.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from upb.basis import ProductBasis
from upb.bounds import SystemSpec, f_N, f_m, open_case, theorem1_applicable, theorem1_b, theorem2_k
from upb.errors import CertificationError, DomainError, UnsupportedCaseError
from upb.gadgets import Lemma1Matrix, Lemma2Matrix, build_qubit_pair_family, build_V, build_W, hollow_isometry
from upb.numerics import DEFAULT_TOL, Tolerances, normalize_columns
from upb.verifier import verify_upb

__all__ = [
    "ProductBasis",
    "Theorem1Plan",
    "plan_theorem1",
    "assemble_theorem1",
    "build_theorem1_upb",
    "build_theorem2_upb",
    "build_minimal_upb",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Theorem1Plan:
    """Layer layout: party j < p gets the band of width ``regularities[j]``
    starting at offset ``shifts[j]`` in the complement of the D graph."""

    spec: SystemSpec
    b: int
    q: int
    shifts: tuple[int, ...]
    regularities: tuple[int, ...]

    def __post_init__(self):
        if sum(self.regularities) != self.spec.dims[-1] - 2 * self.b - 1:
            raise DomainError("layer widths do not add up to d_p - 2b - 1")
        if self.shifts[-1] + self.regularities[-1] > self.q:
            raise DomainError("last layer overruns q")


def _spec(spec) -> SystemSpec:
    return spec if isinstance(spec, SystemSpec) else SystemSpec.of(spec)


def plan_theorem1(spec, first_shift: int | None = None) -> Theorem1Plan:
    """Layer plan with consecutive shifts starting at ``first_shift`` (default b + 1)."""
    spec = _spec(spec)
    ok, why = theorem1_applicable(spec)
    if not ok:
        raise UnsupportedCaseError(f"{spec.dims}: general construction does not apply ({why})")
    b = theorem1_b(spec)
    q = spec.dims[-1] - b
    regs = tuple(d - 1 for d in spec.dims[:-1])
    s = b + 1 if first_shift is None else first_shift
    if s < 1:
        raise DomainError("shifts start at 1 or later")
    shifts = []
    for r in regs:
        shifts.append(s)
        s += r
    return Theorem1Plan(spec, b, q, tuple(shifts), regs)


def _to_user_order(spec: SystemSpec, sorted_states: list[list[np.ndarray]]) -> list[list[np.ndarray]]:
    out = []
    for st in sorted_states:
        local = [None] * spec.p
        for sorted_pos, orig_pos in enumerate(spec.perm):
            local[orig_pos] = st[sorted_pos]
        out.append(local)
    return out


def assemble_theorem1(plan: Theorem1Plan, hollow: Lemma1Matrix, bands: Sequence[Lemma2Matrix],
                      seed=None, construction: str = "theorem1") -> ProductBasis:
    """Glue the gadgets into 2q product states (v_0..v_{q-1}, w_0..w_{q-1}).

    Party p: v_i = |i>, w_j = column (j - b) mod q of the hollow isometry, so
    that v_i is orthogonal to w_j exactly when (j - i) mod q <= b.
    Party j < p: the normalized columns of the j-th band matrix.
    """
    spec, b, q = plan.spec, plan.b, plan.q
    dp = spec.dims[-1]
    if hollow.d != dp or hollow.b != b:
        raise DomainError(f"hollow isometry has (d, b) = {(hollow.d, hollow.b)}, need {(dp, b)}")
    if len(bands) != spec.p - 1:
        raise DomainError(f"need {spec.p - 1} band matrices, got {len(bands)}")
    for j, band in enumerate(bands):
        want = (q, plan.regularities[j], plan.shifts[j])
        if (band.q, band.r, band.s) != want:
            raise DomainError(f"band {j} has (q, r, s) = {(band.q, band.r, band.s)}, need {want}")
    U = normalize_columns(hollow.U)
    last = [np.eye(dp, dtype=complex)[i] for i in range(q)]
    last += [U[:, (j - b) % q] for j in range(q)]
    others = [list(normalize_columns(np.asarray(band.V, dtype=complex)).T) for band in bands]
    states = [[others[j][i] for j in range(spec.p - 1)] + [last[i]] for i in range(2 * q)]
    return ProductBasis(spec.original_dims, _to_user_order(spec, states), construction, seed, b)


def _finish(pb: ProductBasis, verify: bool | str, tol: Tolerances) -> ProductBasis:
    if verify:
        mode = verify if isinstance(verify, str) else "auto"
        cert = verify_upb(pb, tol, mode=mode)
        if not cert.passed:
            raise CertificationError(f"assembled basis failed verification:\n{cert.summary()}")
        log.info("verified %s: %d states, mode %s", pb.construction, pb.n, cert.mode)
    return pb


def build_theorem1_upb(spec, seed: int = 0, first_shift: int | None = None, verify: bool | str = True,
                       tol: Tolerances = DEFAULT_TOL) -> ProductBasis:
    """Build an f_N + 1 state UPB for dims covered by the general theorem."""
    plan = plan_theorem1(spec, first_shift)
    dp = plan.spec.dims[-1]
    hollow = hollow_isometry(dp, plan.b, (seed, plan.spec.p - 1), tol)
    bands = [build_V(plan.q, r, s, (seed, j), tol)
             for j, (r, s) in enumerate(zip(plan.regularities, plan.shifts))]
    pb = assemble_theorem1(plan, hollow, bands, seed)
    return _finish(pb, verify, tol)


def build_theorem2_upb(k: int, seed: int = 0, angles: Sequence[float] | None = None,
                       verify: bool | str = True, tol: Tolerances = DEFAULT_TOL,
                       spec: SystemSpec | None = None) -> ProductBasis:
    """Build a 4k+4 state UPB in C^2 (x) C^2 (x) C^{4k+1}."""
    if k < 1:
        raise DomainError("k must be >= 1")
    spec = spec or SystemSpec.of((2, 2, 4 * k + 1))
    if theorem2_k(spec) != k:
        raise DomainError(f"{spec.dims} is not (2, 2, {4 * k + 1})")
    fam = build_qubit_pair_family(k, angles, tol=tol)
    W = normalize_columns(build_W(k, seed, tol).W)
    states = [[fam.first[i], fam.second[i], W[:, i]] for i in range(4 * k + 4)]
    pb = ProductBasis(spec.original_dims, _to_user_order(spec, states), "theorem2", seed, None)
    return _finish(pb, verify, tol)


def build_minimal_upb(dims, seed: int = 0, verify: bool | str = True,
                      tol: Tolerances = DEFAULT_TOL) -> ProductBasis:
    """Dispatch to whichever builder covers ``dims``; result has f_N + 1 states."""
    spec = _spec(dims)
    if theorem1_applicable(spec)[0]:
        pb = build_theorem1_upb(spec, seed, verify=verify, tol=tol)
    elif (k := theorem2_k(spec)) is not None:
        pb = build_theorem2_upb(k, seed, verify=verify, tol=tol, spec=spec)
    else:
        report = f_m(spec)
        if report.exact:
            why = f"f_m = {report.value} is known ({report.rule.value}) but no builder here covers it"
        else:
            why = open_case(spec)
        raise UnsupportedCaseError(f"no construction for dims {spec.original_dims}: {why}")
    assert pb.n == f_N(spec) + 1
    return pb
