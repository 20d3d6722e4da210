import copy

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from toricqc.algebra import linalg, parse_expression, parse_poly
from toricqc.errors import DegeneratePairing, NotClosed, PresentationError
from toricqc.fixtures import load_fixture, printed_matrix
from toricqc.graded_ring import (check_commutativity, check_frobenius, check_grading,
                                 check_pairing, check_unit, ring_from_presentation, subquotient)
from toricqc.schubert import fl123_quantum_ring

from conftest import cached_resolution


def flag_ring():
    gens = ("p1", "p2")
    rels = [parse_poly(t, gens) for t in ("p1^2+p2^2-p1*p2", "p1^3", "p2^3")]
    basis = [parse_poly(t, gens) for t in ("1", "p1", "p2", "p1^2", "p2^2", "p1^2*p2")]
    return ring_from_presentation(gens, rels, basis, normalization=(basis[-1], 1))


def test_flag_presentation():
    ring, pres = flag_ring()
    assert ring.dim == 6
    assert not any(pres.normal_form(parse_poly("p1^3", pres.generators)))
    # p1 * p2 = p1^2 + p2^2 in the quotient
    assert pres.normal_form(parse_poly("p1*p2", pres.generators)) == [0, 0, 0, 1, 1, 0]
    for check in (check_unit, check_commutativity, check_frobenius, check_pairing, check_grading):
        assert check(ring), check.__name__


def test_square_of_exceptional_generator_vanishes(gr24):
    v = gr24.model.class_vector(parse_poly("m2^2", ("m1", "m2")))
    assert not any(v)


def test_unit_times_basis_is_identity(gr25):
    cl = gr25.ring.classical_limit()
    for k in range(cl.dim):
        assert cl.product(cl.basis_vector(cl.unit), cl.basis_vector(k)) == cl.basis_vector(k)


def test_wrong_basis_size_reports_degree():
    gens = ("x",)
    with pytest.raises(PresentationError) as err:
        ring_from_presentation(gens, [parse_poly("x^3", gens)], [parse_poly("1", gens)])
    assert err.value.degree == 2


def test_frobenius_catches_perturbed_entry():
    fx = load_fixture("fl123")["smoothing"]
    ring = fl123_quantum_ring(printed_matrix(fx, "p1"), printed_matrix(fx, "p2"))
    assert check_frobenius(ring)
    bad = copy.deepcopy(ring)
    bad.mult[1][3][1] = bad.mult[1][3][1] + 1
    verdict = check_frobenius(bad)
    assert not verdict and verdict.witness is not None


def test_flag_quantum_ring_all_triples():
    fx = load_fixture("fl123")["smoothing"]
    ring = fl123_quantum_ring(printed_matrix(fx, "p1"), printed_matrix(fx, "p2"))
    assert check_frobenius(ring).message == "Frobenius property holds on all 216 triples"


def test_classical_limit_of_flag_oracle_matches_presentation():
    fx = load_fixture("fl123")["smoothing"]
    ring = fl123_quantum_ring(printed_matrix(fx, "p1"), printed_matrix(fx, "p2"))
    classical, _ = flag_ring()
    assert ring.classical_limit().mult == classical.mult


def test_zero_subquotient(fl123):
    ring, lifts = subquotient(fl123.ring, [], [], {"q3": 1})
    assert ring.dim == 0 and lifts == []


def test_subquotient_detects_escape(fl123):
    V = [fl123.ring.basis_vector(1)]
    with pytest.raises(NotClosed):
        subquotient(fl123.ring.classical_limit(), V, [])


def test_subquotient_detects_degenerate_pairing(fl123):
    cl = fl123.ring.classical_limit()
    top = [0] * cl.dim
    top[-1] = 1
    with pytest.raises(DegeneratePairing):
        subquotient(cl, [top], [])


def test_subquotient_agrees_with_lifted_products(fl123):
    from toricqc.transition import compute_filtration, compute_residues
    rd = compute_residues({"q3": fl123.matrix("fp3")}, ["q3"], "dlog")
    filt = compute_filtration(rd, fl123.ring.pairing)
    quot, lifts = subquotient(fl123.ring, filt.V, filt.W, {"q3": 1})
    assert quot.dim == 6
    ring = fl123.ring
    for a in range(quot.dim):
        for b in range(quot.dim):
            lifted = [x.substitute({"q3": 1}) if x else 0
                      for x in ring.product(lifts[a], lifts[b])]
            induced = [0] * ring.dim
            for k in range(quot.dim):
                c = quot.mult[a][k][b]
                if c:
                    c = c.extend(ring.variables)
                    induced = [x + c * y for x, y in zip(induced, lifts[k])]
            diff = [x - y for x, y in zip(lifted, induced)]
            assert all(not x or not x.den for x in diff)
            for e in {e for x in diff if x for e in x.num.terms}:
                vec = [x.num.terms.get(e, 0) if x else 0 for x in diff]
                assert linalg.in_span(vec, filt.W)


# -- rings built from the extraction ---------------------------------------

@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_resolution_ring_axioms(name):
    ring = cached_resolution(name).ring
    for check in (check_unit, check_commutativity, check_frobenius, check_pairing, check_grading):
        assert check(ring), (name, check.__name__)


@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_quantum_matrices_commute(name):
    res = cached_resolution(name)
    mats = [m.entries for m in res.extraction.matrices]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ab = linalg.matmul(mats[i], mats[j])
            ba = linalg.matmul(mats[j], mats[i])
            assert all((not x and not y) or x == y for r, s in zip(ab, ba) for x, y in zip(r, s))


@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_classical_limit_is_stanley_reisner_ring(name):
    """q -> 0 gives the cup product of the Stanley-Reisner ring; the ideal
    membership is decided independently with a sympy Groebner basis."""
    res = cached_resolution(name)
    sec = res.section
    gens = sp.symbols(" ".join(sec["generators"]))
    data = res.model.data
    rays = [sum(c * g for c, g in zip(row, gens)) for row in data.a]
    from toricqc.toric import primitive_collections
    from toricqc.fixtures import load_fan
    fan = load_fan(sec["fan"])
    rels = [sp.Mul(*[rays[i] for i in coll]) for coll in primitive_collections(fan)]
    G = sp.groebner(rels, *gens, order="grevlex", domain="QQ")
    basis = [sp.sympify(b.replace("^", "**")) for b in sec["basis"]]
    cl = res.ring.classical_limit()
    for a in range(cl.dim):
        for b in range(a, cl.dim):
            v = cl.product(cl.basis_vector(a), cl.basis_vector(b))
            expr = basis[a] * basis[b] - sum(sp.Rational(str(x)) * e for x, e in zip(v, basis))
            assert G.reduce(sp.expand(expr))[1] == 0, (sec["basis"][a], sec["basis"][b])


@given(st.integers(0, 19), st.integers(0, 19), st.integers(0, 19))
def test_gr25_associativity(a, b, c):
    ring = cached_resolution("gr25").ring
    e = ring.basis_vector
    left = ring.product(ring.product(e(a), e(b)), e(c))
    right = ring.product(e(a), ring.product(e(b), e(c)))
    assert all((not x and not y) or x == y for x, y in zip(left, right))


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_flag_toric_associativity(a, b, c):
    ring = cached_resolution("fl123").ring
    e = ring.basis_vector
    left = ring.product(ring.product(e(a), e(b)), e(c))
    right = ring.product(e(a), ring.product(e(b), e(c)))
    assert all((not x and not y) or x == y for x, y in zip(left, right))


def test_ring_serialization(gr24):
    d = gr24.ring.to_dict()
    assert d["basis"] == gr24.section["basis"]
    names = tuple(d["variables"])
    for k, row in enumerate(d["mult"][1]):
        for j, text in enumerate(row):
            x = gr24.ring.mult[1][k][j]
            assert (text == "0" and not x) or parse_expression(text, names) == x
