"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import random
import time

import pytest

from mirabolic.decorated import dim_stats, enumerate_basis
from mirabolic.geometry import oracle, orbit_dimension_fit
from mirabolic.hecke import hecke_relation_suite
from mirabolic.laurent import v
from mirabolic.mv import (
    MVElement, act_left, act_right, double_centralizer_check, enumerate_mv_basis, left_generators, xi1_set,
)
from mirabolic.schur import commutation_identity_check, relation_suite
from mirabolic.stabilization import eta_compatibility, k_word, mu_window_check, random_generator_word, stabilize_fit
from mirabolic.verify import E_KERNELS, KINDS, left_generator, normalized_consistency, oracle_verify, displayed_products_report


@pytest.fixture
def report(capsys):
    def emit(num, title, ok, detail, started):
        with capsys.disabled():
            print(f"\n[acceptance {num:>2}] {'PASS' if ok else 'FAIL'}  {title}: {detail} ({time.time() - started:.1f}s)")
    return emit


def test_01_oracle_equivalence(report):
    t0 = time.time()
    reps = [oracle_verify(2, 2, q) for q in (2, 3)]
    reps += [oracle_verify(3, 3, q, sample=200, seed=1) for q in (2, 3)]
    ok = all(r["passed"] for r in reps) and all(r["checked"] >= 200 for r in reps[2:])
    detail = ", ".join(f"({r['n']},{r['d']},q={r['q']}) {r['mismatches']}/{r['checked']}" for r in reps)
    report(1, "kernels vs convolution counts", ok, "mismatches " + detail, t0)
    assert ok


def test_02_displayed_products(report):
    t0 = time.time()
    rep = displayed_products_report((2, 3))
    first, second = rep["products"]
    typo = [t for t in first["terms"] if t["verdict"] == "printed coefficient is a typo"]
    index = [t for t in second["terms"] if t["verdict"] == "matrix index typo"]
    ok = (first["formula_matches_counts"] and second["formula_matches_counts"]
          and len(typo) == 1 and typo[0]["printed"] == str(v(2)) and typo[0]["formula"] == str(v(2) - 1)
          and len(index) == 2 and any("should_be" in t for t in index))
    report(2, "two displayed products recomputed", ok,
           f"coefficient typos {len(typo)} (v^2 vs v^2 - 1), index typo pair {len(index) // 2}", t0)
    assert ok


def test_03_relation_battery(report):
    t0 = time.time()
    failed = []
    for n, d in ((2, 2), (2, 3), (3, 2), (3, 3)):
        for r in relation_suite(n, d):
            if not r.get("supplementary") and not r["passed"]:
                failed.append(f"{r['relation']}@({n},{d})")
    elapsed = time.time() - t0
    ok = not failed and elapsed <= 300
    report(3, "generator relation battery", ok, f"failing {failed or 'none'}", t0)
    assert ok


def test_04_hecke_battery(report):
    t0 = time.time()
    failed = [f"{r['relation']}@d={d}" for d in (2, 3) for r in hecke_relation_suite(d) if not r["passed"]]
    ok = not failed and time.time() - t0 <= 60
    report(4, "Hecke relations in the corner algebra", ok, f"failing {failed or 'none'}", t0)
    assert ok


def test_05_commutation_identity(report):
    t0 = time.time()
    total = passed = 0
    for n in (2, 3):
        for d in (2, 3):
            for t in range(1, n):
                for r in commutation_identity_check(n, d, t):
                    if r["skipped"]:
                        continue
                    total += 1
                    passed += r["passed"]
    ok = total > 0 and passed == total and time.time() - t0 <= 60
    report(5, "divided-power commutation identity", ok, f"{passed}/{total} admissible cases hold", t0)
    assert ok


def test_06_normalized_consistency(report):
    t0 = time.time()
    reps = [normalized_consistency(2, 2, max_R=2), normalized_consistency(3, 3, sample=60, seed=2, max_R=2)]
    ok = all(r["passed"] for r in reps) and all(r["checks"]["divided_power"] > 0 for r in reps)
    detail = ", ".join(f"({r['n']},{r['d']}) {r['checks']}" for r in reps)
    report(6, "normalized kernels vs rescaled and iterated", ok, detail, t0)
    assert ok


def _rect_mismatches(n, d, q):
    bad = tot = 0
    o = oracle(n, d, q, d)
    for A in xi1_set(n, d):
        for kind in KINDS:
            for h in (range(1, n + 1) if kind == "dec" else range(1, n)):
                L = left_generator(kind, A, h)
                if L is None:
                    continue
                tot += 1
                got = {X: c.at_v2(q) for X, c in E_KERNELS[kind](A, h).items()}
                bad += {X: c for X, c in got.items() if c} != o.product_counts(L, A)
    return bad, tot


def _commute_failures(n, d):
    bad = 0
    for g in left_generators(n):
        for t in range(d):
            for key in enumerate_mv_basis(n, d):
                x = MVElement.basis(n, key)
                bad += act_right(act_left(g, x), t) != act_left(g, act_right(x, t))
    return bad


def test_07_mv(report):
    t0 = time.time()
    keys = len(enumerate_mv_basis(2, 2))
    rect = {(n, d, q): _rect_mismatches(n, d, q) for n, d in ((2, 2), (3, 2)) for q in (2, 3)}
    comm = {nd: _commute_failures(*nd) for nd in ((2, 2), (3, 2), (2, 3))}
    ok = keys == 13 and all(b == 0 for b, _ in rect.values()) and not any(comm.values())
    report(7, "MV basis, left action, bimodule", ok,
           f"keys {keys}; kernel mismatches {sum(b for b, _ in rect.values())}/{sum(t for _, t in rect.values())};"
           f" commutator failures {sum(comm.values())}", t0)
    assert ok


def test_08_double_centralizer(report):
    t0 = time.time()
    r = double_centralizer_check(2, 2, v0=2)
    xi = len(enumerate_basis(2, 2))
    ok = (r["passed"] and r["dim_S"] == xi == r["dim_commutant_H"] and r["dim_H"] == r["dim_commutant_S"]
          and time.time() - t0 <= 60)
    report(8, "double centralizer at (2,2), v0=2", ok,
           f"dim S {r['dim_S']} = |Xi| {xi} = dim End_H {r['dim_commutant_H']}; dim H {r['dim_H']} = dim End_S {r['dim_commutant_S']}", t0)
    assert ok


def test_09_geometry(report):
    t0 = time.time()
    totals = {}
    for n, d, q in ((2, 2, 2), (2, 2, 3), (3, 3, 2)):
        o = oracle(n, d, q)
        nf = len(o.flags())
        totals[(n, d, q)] = (sum(o.census().values()), nf * nf * q ** d)
    trips = {}
    for n, d in ((2, 2), (3, 2)):
        for q in (2, 3):
            o = oracle(n, d, q)
            trips[(n, d, q)] = sum(o.classify(o.canonical_triple(m)) != m for m in enumerate_basis(n, d))
    dims = sum(orbit_dimension_fit(m, (2, 3, 5, 7))["degree"] != dim_stats(m)[0] for m in enumerate_basis(2, 2))
    ok = all(a == b for a, b in totals.values()) and not any(trips.values()) and dims == 0
    report(9, "orbit census, round trips, dimension fits", ok,
           f"census {[a for a, _ in totals.values()]}; round-trip failures {sum(trips.values())}; degree mismatches {dims}", t0)
    assert ok


def test_10_stabilization(report):
    t0 = time.time()
    words = bad = 0
    for n in (2, 3):
        rng = random.Random(100 + n)
        for _ in range(50):
            w = random_generator_word(n, rng.randint(1, 3), rng)
            fit = stabilize_fit(w, holdout=2)
            words += 1
            bad += fit.k_product(n) != k_word(w)
    eta_ok = eta_compatibility(2, 2)["passed"]
    failing = []
    for n in (2, 3):
        for r in mu_window_check(n, 3)["relations"]:
            if not r.get("supplementary") and not r["passed"]:
                failing.append(f"{r['relation']}@n={n}")
    ok = bad == 0 and eta_ok and not failing
    report(10, "stable fits, eta, window relations", ok,
           f"fits {words - bad}/{words} validated; eta {'ok' if eta_ok else 'fails'}; window failing {failing or 'none'}", t0)
    assert ok
