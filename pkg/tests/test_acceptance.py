"""Acceptance suite: one PASS/FAIL line per criterion, all comparisons exact."""

import time
from fractions import Fraction

import pytest
import sympy as sp

from toricqc.algebra import linalg, parse_expression
from toricqc.examples import RunConfig, diff_matrices, operator_list_check, run_example
from toricqc.fixtures import load_fan, load_fixture, printed_matrix
from toricqc.graded_ring import check_frobenius, check_grading
from toricqc.ladder import ladder_diagram, ladder_fans, match_coordinates
from toricqc.schubert import gr2n_quantum_ring
from toricqc.toric import primitive_collections, unimodular_match
from toricqc.transition import (compute_filtration, compute_residues, conifold_residue_identity,
                                is_self_adjoint)

from conftest import cached_report, cached_resolution


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
        assert ok, text
    return emit


def _failed(report, keys=None):
    return [k for k, v in report.checks.items() if not v and (keys is None or k in keys)]


def _timed(name):
    start = time.perf_counter()
    report = run_example(RunConfig(name))
    return report, time.perf_counter() - start


def test_criterion_1_flag_resolution_matrices(verdict):
    report, seconds = _timed("fl123")
    res = cached_resolution("fl123")
    sec = res.section
    diffs = {el: diff_matrices(res.matrix(el), printed_matrix(sec, el))
             for el in ("fp1", "fp2", "fp3")}
    q3 = parse_expression("q3/(1-q3)", ("q1", "q2", "q3"))
    has_rational = any(x == q3 for row in res.matrix("fp3") for x in row if x)
    ok = not any(diffs.values()) and has_rational and seconds < 30 and report.ok
    verdict(1, ok, f"three 8x8 matrices agree entry for entry, q3/(1-q3) present, "
                   f"{seconds:.1f} s")


def test_criterion_2_flag_transition(verdict):
    report = cached_report("fl123")
    keys = ["residue_matches_fixture", "V_is_image_pi", "W_is_pi_ker_r", "transition_regular",
            "transition_closed", "transition_intertwines_divisors", "transition_ring_isomorphism",
            "transition_bijective", "transition_pairing"]
    ok = report.data["convention"] == "dlog" and all(k in report.checks for k in keys) \
        and not _failed(report, keys)
    verdict(2, ok, "N (dlog) matches, filtration equals Image pi^* / pi^*(Ker r^*), "
                   "induced operators equal p1*, p2*")


@pytest.mark.xfail(strict=True, reason="the printed second matrix is (m1-2m2)* with three "
                                       "misprinted entries")
def test_criterion_3_gr24_literal_printed_matrices(verdict):
    res = cached_resolution("gr24")
    sec = res.section
    diffs = diff_matrices(res.matrix("m1"), printed_matrix(sec, "m1")) + \
        diff_matrices(res.matrix("m2"), printed_matrix(sec, "m2"))
    verdict(3, not diffs, f"literal printed matrices: {len(diffs)} entries differ")


def test_criterion_3_gr24(verdict):
    report = cached_report("gr24")
    res = cached_resolution("gr24")
    sec = res.section
    # the printed matrix differs from the computed (m1-2m2)* exactly at the recorded entries
    printed = diff_matrices(res.matrix("m1-2*m2"), printed_matrix(sec, "m2"))
    recorded = [(c["row"], c["col"]) for c in sec["corrections"]["m2"]]
    keys = ["resolution_m1_matches_fixture", "resolution_m2_matches_fixture",
            "residue_matches_fixture", "V_matches_fixture", "W_matches_fixture",
            "transition_regular", "transition_closed", "transition_intertwines_divisors",
            "transition_ring_isomorphism", "transition_injective", "transition_pairing",
            "weight_W-2", "weight_W-1", "weight_W0", "weight_W1", "weight_transition_plus"]
    ok = report.data["convention"] == "plain" and not _failed(report, keys) \
        and all(k in report.checks for k in keys) \
        and sorted((r, c) for r, c, *_ in printed) == sorted(recorded)
    verdict(3, ok, "m1* and corrected (m1-2m2)* agree, N (plain), V, W, transition and "
                   "weight-filtration theorems with theta(m1^2-2m1m2) = i(d^2-2 delta)")


def test_criterion_4_gr25(verdict):
    report, seconds = _timed("gr25")
    res = report.data["residues"]
    constant = all(Fraction(x) is not None for m in res["matrices"].values()
                   for row in m for x in row)
    filt = report.data["filtration"]
    keys = ["products_m1", "products_m2", "products_m3", "V_matches_fixture", "W_matches_fixture",
            "jordan_blocks", "transition_regular", "transition_closed",
            "transition_intertwines_divisors", "transition_ring_isomorphism",
            "transition_bijective", "transition_pairing"]
    families = {str(f) for m in cached_resolution("gr25").extraction.matrices
                for row in m.entries for x in row if x for f, _ in x.den}
    ok = not _failed(report, keys) and all(k in report.checks for k in keys) and constant \
        and res["nilpotency_index"] == {"q2": 5, "q3": 5} \
        and (filt["dim_V"], filt["dim_W"]) == (12, 2) \
        and report.data["weight_filtration"]["jordan_blocks"] == {"1": 10, "5": 2} \
        and families == {"1 - q2", "1 - q3", "1 - q2 - q3"} and seconds < 300
    verdict(4, ok, f"all 60 products, nilpotent constant N2 and N3, dim V = 12, dim W = 2, "
                   f"Jordan type {{1:10, 5:2}}, {seconds:.1f} s")


def test_criterion_5_shipped_operators(verdict):
    res = cached_resolution("gr25")
    check = operator_list_check(res)
    model = res.model
    hd = model.half_degrees()
    leading = True
    for i, out in enumerate(res.extraction.results):
        for beta, vec in out.items():
            c1b = sum(c * n for c, n in zip(model.c1, beta))
            for k, x in enumerate(vec):
                if x and hd[i] - hd[k] - c1b >= 0 and (beta, k, x) != ((0,) * len(beta), i, 1):
                    leading = False
    verdict(5, bool(check) and leading and len(res.section["operators"]) == 20,
            "D0..D19 give phi_i + O(1/z) and the same matrices as the derived operators")


def test_criterion_6_schubert_oracle(verdict):
    reports = [cached_report(n) for n in ("fl123", "gr24", "gr25")]
    matches = ["smoothing_d_matches_fixture", "smoothing_delta_matches_fixture"]
    ok = not _failed(reports[1], matches) and reports[2].checks["smoothing_w10_matches_fixture"]
    rings = [gr2n_quantum_ring(4), gr2n_quantum_ring(5)] + \
        [cached_resolution(n).ring for n in ("fl123", "gr24", "gr25")]
    ok = ok and all(check_frobenius(r) and check_grading(r) for r in rings)
    ok = ok and all(v for rep in reports for k, v in rep.checks.items()
                    if k.endswith(("_frobenius", "_graded")))
    verdict(6, bool(ok), "Gr(2,4) and Gr(2,5) divisor matrices equal the fixtures; Frobenius "
                         "and grading hold on every ring")


@pytest.mark.xfail(strict=True, reason="the roof recipe yields a small resolution that differs "
                                       "from the shipped Gr(2,5) resolution by a flop")
def test_criterion_7_exact_gr25_fan(verdict):
    lf = ladder_fans(5, (2,))
    exact = match_coordinates(lf.res, load_fan("gr25_res"))
    verdict(7, exact is not None, "ladder (5,[2]) reproduces the Gr(2,5) resolution exactly")


def test_criterion_7_ladder_fans(verdict):
    lf5 = ladder_fans(5, (2,))
    target = load_fan("gr25_res")
    among = any(match_coordinates(c, target) is not None for c in lf5.candidates)
    sing = match_coordinates(lf5.sing, load_fan("gr25_sing")) is not None
    shape = lf5.res.nrays == 9 and len(lf5.res.cones) == 20
    flag = unimodular_match(ladder_fans(3, (1, 2)).res, load_fan("fl123_res")) is not None
    relations = True
    for n, steps in ((3, (1, 2)), (4, (2,)), (5, (2,))):
        lad = ladder_diagram(n, steps)
        relations &= all(not any(lad.relation_sum(r)) for r in lad.roofs)
        relations &= all(not any(lad.relation_sum(cb, cm))
                         for cb, cm in zip(lad.corners, lad.upper_corners))
    verdict(7, among and sing and shape and flag and relations,
            "(5,[2]) singular fan exact, 9 rays and 20 cones, shipped resolution among the small "
            "resolutions; (3,[1,2]) unimodular match; roof and box relations hold")


def _commuting(mats):
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ab, ba = linalg.matmul(mats[i], mats[j]), linalg.matmul(mats[j], mats[i])
            if any(not ((not x and not y) or x == y) for r, s in zip(ab, ba) for x, y in zip(r, s)):
                return False
    return True


def _classical_limit_is_sr(res):
    sec = res.section
    gens = sp.symbols(" ".join(sec["generators"]))
    rays = [sum(c * g for c, g in zip(row, gens)) for row in res.model.data.a]
    fan = load_fan(sec["fan"])
    G = sp.groebner([sp.Mul(*[rays[i] for i in c]) for c in primitive_collections(fan)], *gens,
                    order="grevlex", domain="QQ")
    basis = [sp.sympify(b.replace("^", "**")) for b in sec["basis"]]
    cl = res.ring.classical_limit()
    for a in range(cl.dim):
        for b in range(a, cl.dim):
            v = cl.product(cl.basis_vector(a), cl.basis_vector(b))
            expr = basis[a] * basis[b] - sum(sp.Rational(str(x)) * e for x, e in zip(v, basis))
            if G.reduce(sp.expand(expr))[1] != 0:
                return False
    return True


def test_criterion_8_property_suites(verdict):
    names = ("fl123", "gr24", "gr25")
    results = {}
    results["commuting"] = all(_commuting([m.entries for m in cached_resolution(n).extraction.matrices])
                               for n in names)
    # commutativity of the full product table together with the unit gives associativity
    results["associative"] = all(_commuting(cached_resolution(n).ring.mult) for n in ("fl123", "gr24"))
    adjoint = []
    for n in names:
        rep = cached_report(n)
        pairing = cached_resolution(n).ring.pairing
        for m in rep.data["residues"]["matrices"].values():
            adjoint.append(is_self_adjoint([[Fraction(x) for x in row] for row in m], pairing))
    results["self_adjoint"] = all(adjoint)
    res = cached_resolution("gr24")
    base = compute_residues({"q2": res.matrix("m1-2*m2")}, ["q2"], "plain")
    ref = compute_filtration(base, res.ring.pairing)
    invariant = True
    for lam in (1, -3, Fraction(1, 2)):
        for convention in ("plain", "dlog"):
            m = [[x * lam if x else 0 for x in row] for row in res.matrix("m1-2*m2")]
            f = compute_filtration(compute_residues({"q2": m}, ["q2"], convention), res.ring.pairing)
            invariant &= linalg.subspace_equal(f.V, ref.V) and linalg.subspace_equal(f.W, ref.W)
    results["filtration_invariance"] = invariant
    results["conifold"] = all(conifold_residue_identity(d, 12) for d in ((1, 1, 1), (2, 3, 5)))
    results["classical_limit"] = all(_classical_limit_is_sr(cached_resolution(n)) for n in names)
    bad = [k for k, v in results.items() if not v]
    verdict(8, not bad, "commutation, associativity, self-adjoint residues, filtration "
                        "invariance, conifold identity to order 12, classical limit"
                        + (f" (failed: {bad})" if bad else ""))


def test_fixtures_are_complete():
    for name in ("fl123", "gr24", "gr25"):
        fx = load_fixture(name)
        assert {"resolution", "smoothing", "transition"} <= set(fx)
