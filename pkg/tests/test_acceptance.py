"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import time
from itertools import combinations_with_replacement

import numpy as np
import pytest
from scipy.optimize import minimize

from upb.assembler import build_theorem1_upb, build_theorem2_upb
from upb.basis import ProductBasis
from upb.bounds import f_m, f_N, theorem1_applicable
from upb.gadgets import build_U_6_1, build_U_fourier, fixture_V_5_3_2, fixture_W_2, solve_u61_root
from upb.graphs import complement, graph_C, graph_C_layer, graph_D, graph_X, graph_Y, is_complete, union
from upb.numerics import Tolerances
from upb.verifier import is_extendible, verify_lemma1, verify_lemma2, verify_lemma3, verify_upb

ORTH_TOL = Tolerances(orth_tol=1e-9)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


# 1 -----------------------------------------------------------------------------

BOUND_VALUES = {(2, d): 2 * d for d in range(2, 7)}
BOUND_VALUES.update({
    (4, 4): 8, (2, 2, 3): 6, (2, 2, 5): 8, (2, 2, 2, 2): 6, (2, 2, 2, 4): 8, (2, 2, 2, 2, 5): 10,
    (3, 3): 5, (3, 4): 6, (4, 6): 10, (6, 6): 12,
})


def test_criterion_1_bounds_table(report):
    t0 = time.perf_counter()
    wrong = {dims: f_m(dims).value for dims, v in BOUND_VALUES.items()
             if not (f_m(dims).exact and f_m(dims).value == v)}
    elapsed = time.perf_counter() - t0
    ok = not wrong and elapsed < 1
    report(1, ok, f"{len(BOUND_VALUES) - len(wrong)}/{len(BOUND_VALUES)} exact values match, {elapsed:.3f}s"
           + (f"; mismatches {wrong}" if wrong else ""))
    assert ok


# 2 -----------------------------------------------------------------------------

def test_criterion_2_fixtures(report):
    t0 = time.perf_counter()
    c_v = verify_lemma2(fixture_V_5_3_2())
    c_w = verify_lemma3(fixture_W_2())
    c_u = verify_lemma1(build_U_6_1(certify=False))
    u10 = solve_u61_root()
    elapsed = time.perf_counter() - t0
    n_v = c_v.check("maximal_minors").count
    n_w = c_w.check("maximal_minors").count
    ores = c_u.check("orthonormal_columns").residual
    ok = (c_v.passed and n_v == math.comb(10, 4) and "exact" in c_v.check("maximal_minors").detail
          and c_w.passed and n_w == 220 and "exact" in c_w.check("maximal_minors").detail
          and c_u.passed and abs(u10 - 1.6445) < 1e-3 and ores < 1e-10 and elapsed < 5)
    report(2, ok, f"W_5,3,2 {c_v.verdict} ({n_v} exact dets), W_2 {c_w.verdict} ({n_w} exact dets), "
           f"U_6,1 {c_u.verdict} (u10={u10:.6f}, orth residual {ores:.1e}), {elapsed:.2f}s")
    assert ok


# 3 -----------------------------------------------------------------------------

def test_criterion_3_fourier(report):
    lines, ok = [], True
    slowest = 0.0
    for d in range(4, 11):
        t0 = time.perf_counter()
        g = build_U_fourier(d, certify=False)
        cert = verify_lemma1(g)
        elapsed = time.perf_counter() - t0
        slowest = max(slowest, elapsed)
        unit = np.linalg.norm(g.U.conj().T @ g.U - np.eye(d))
        diag = np.max(np.abs(np.diag(g.U)))
        sigma = cert.data["min_sigma_minors"]
        good = cert.passed and unit < 1e-10 and diag < 1e-12 and sigma > 1e-8
        ok &= good
        lines.append(f"d={d}:{'ok' if good else 'BAD'}(s_min {sigma:.1e})")
    ok &= slowest < 120
    report(3, ok, " ".join(lines) + f", slowest {slowest:.1f}s")
    assert ok


# 4 -----------------------------------------------------------------------------

def theorem1_family(max_p=4, max_d=8):
    out = []
    for p in range(2, max_p + 1):
        for dims in combinations_with_replacement(range(2, max_d + 1), p):
            if theorem1_applicable(dims)[0]:
                out.append(dims)
    return out


def test_criterion_4_theorem1_family(report):
    family = theorem1_family()
    t0 = time.perf_counter()
    failures = []
    for dims in family:
        pb = build_theorem1_upb(dims, seed=0, verify=False, tol=ORTH_TOL)
        cert = verify_upb(pb, ORTH_TOL, mode="exact")
        if not (cert.passed and pb.n == f_N(dims) + 1):
            failures.append(dims)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300 and len(family) > 0
    for must in [(4, 6), (6, 6), (4, 4, 7), (2, 2, 2, 4), (2, 3, 3, 8)]:
        ok &= must in family
    # f_N(4,4,8) = 14 is even, so f_m = f_N there and no f_N + 1 basis is wanted
    ok &= (4, 4, 8) not in family
    report(4, ok, f"{len(family) - len(failures)}/{len(family)} shapes verified exactly, {elapsed:.1f}s"
           + (f"; failures {failures}" if failures else ""))
    assert ok


# 5 -----------------------------------------------------------------------------

def test_criterion_5_theorem2(report):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for k, mode in [(1, "exact"), (2, "exact"), (3, "sufficient")]:
        pb = build_theorem2_upb(k, seed=0, verify=False)
        cert = verify_upb(pb, mode=mode)
        good = cert.passed and cert.mode == mode and pb.n == 4 * k + 4 == f_N(pb.dims) + 1
        ok &= good
        parts.append(f"k={k} n={pb.n} {mode} {cert.verdict}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 180
    report(5, ok, ", ".join(parts) + f", {elapsed:.1f}s")
    assert ok


# 6 -----------------------------------------------------------------------------

PALETTE_SHARE = 0.75


def palette(d):
    e = np.eye(d, dtype=complex)
    vecs = list(e)
    vecs.append(np.ones(d) / math.sqrt(d))
    vecs.append((e[0] - e[1]) / math.sqrt(2))
    vecs.append((e[0] + 1j * e[1]) / math.sqrt(2))
    return vecs


def random_instance(dims, n, rng):
    """Product states mixing a small palette (to force degeneracies) with random vectors."""
    states = []
    for _ in range(n):
        local = []
        for d in dims:
            if rng.random() < PALETTE_SHARE:
                pal = palette(d)
                v = pal[rng.integers(len(pal))]
            else:
                v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            local.append(v / np.linalg.norm(v))
        states.append(local)
    return ProductBasis(dims, states)


def min_total_overlap(pb, rng, starts=40):
    """min over product z of sum_s prod_j |<s_j|z_j>|^2 / |z_j|^2, by multistart BFGS."""
    mats = [np.array(pb.party_vectors(j)).conj() for j in range(pb.p)]
    splits = np.cumsum([2 * d for d in pb.dims])[:-1]

    def objective(x):
        total = np.ones(pb.n)
        for mat, part in zip(mats, np.split(x, splits)):
            d = part.size // 2
            z = part[:d] + 1j * part[d:]
            total = total * np.abs(mat @ z) ** 2 / np.vdot(z, z).real
        return float(total.sum())

    best = math.inf
    for _ in range(starts):
        res = minimize(objective, rng.standard_normal(2 * sum(pb.dims)), method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 2000})
        best = min(best, res.fun)
        if best < 1e-12:
            break
    return best


def test_criterion_6_oracle_equivalence(report):
    rng = np.random.default_rng(2024)
    agree, extendible, bad_witness = 0, 0, 0
    gap_low, gap_high = math.inf, 0.0
    for trial in range(200):
        dims = (2, 2) if trial % 2 == 0 else (2, 3)
        pb = random_instance(dims, int(rng.integers(1, 6)), rng)
        cert = is_extendible(pb)
        ext = cert.witness is not None
        if ext and cert.witness["max_overlap"] > 1e-8:
            bad_witness += 1
        m = min_total_overlap(pb, rng)
        agree += (m < 1e-6) == ext
        extendible += ext
        if ext:
            gap_high = max(gap_high, m)
        else:
            gap_low = min(gap_low, m)
    ok = agree == 200 and bad_witness == 0
    report(6, ok, f"{agree}/200 agree ({extendible} extendible), bad witnesses {bad_witness}, "
           f"minimizer max {gap_high:.1e} on extendible vs min {gap_low:.1e} on unextendible")
    assert ok


# 7 -----------------------------------------------------------------------------

def test_criterion_7_negative_control(report):
    pb = build_theorem1_upb((4, 6), seed=0)
    worst, extendible = 0.0, 0
    for i in range(pb.n):
        smaller = pb.without(i)
        cert = is_extendible(smaller)
        if cert.witness is None:
            continue
        z = np.ones(1, dtype=complex)
        for vec in cert.witness["local"]:
            z = np.kron(z, vec)
        ov = max(abs(np.vdot(smaller.full_state(s), z)) for s in range(smaller.n))
        worst = max(worst, ov)
        extendible += ov <= 1e-8
    ok = extendible == pb.n == 10
    report(7, ok, f"{extendible}/{pb.n} one-state deletions extendible, worst witness overlap {worst:.1e}")
    assert ok


# 8 -----------------------------------------------------------------------------

def test_criterion_8_graph_identities(report):
    t0 = time.perf_counter()
    checked = 0
    ok = True
    for b in range(4):
        for d in range(2 * b + 4, 13):
            D, C = graph_D(d, b), graph_C(d, b)
            ok &= is_complete(union(D, C)) and not (D.edges & C.edges) and complement(D) == C
            q = d - b
            # every composition of q - b - 1 into layers, consecutive from shift b + 1
            total = q - b - 1
            for mask in range(1 << (total - 1)):
                cuts = [i for i in range(1, total) if mask >> (i - 1) & 1]
                widths = [y - x for x, y in zip([0] + cuts, cuts + [total])]
                s, layers = b + 1, []
                for r in widths:
                    layers.append(graph_C_layer(d, b, r, s))
                    s += r
                ok &= sum(len(g) for g in layers) == len(C) and union(*layers) == C
                checked += 1
    for k in range(1, 6):
        Y, X = graph_Y(k), graph_X(k)
        ok &= is_complete(union(X, Y)) and not (X.edges & Y.edges)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10
    report(8, ok, f"D/C partitions for b<=3, d<=12; {checked} layer decompositions; prism k<=5; {elapsed:.2f}s")
    assert ok
