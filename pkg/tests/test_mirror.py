from fractions import Fraction

import pytest

from toricqc.algebra import TruncatedSeries, parse_expression, parse_poly, series_mul
from toricqc.errors import InsufficientOrders, InsufficientTruncation, NoClosedForm
from toricqc.examples import operator_list_check, resolution
from toricqc.fixtures import product_vector
from toricqc.mirror import format_operator, gamma_factor

# beta-terms of the Gr(2,5) resolution I-function at z = 1, in the 20-element
# basis; computed independently from the hypergeometric product with a sympy
# Groebner basis of the Stanley-Reisner ideal
GR25_TERMS = {
    (1, 0, 0): ["1", "-5", "2", "2", "15", "-12", "-12", "5", "-35", "42", "42", "-35", "70",
                "-112", "-112", "140", "14", "-28", "-28", "84/5"],
    (0, 1, 0): ["0", "0", "0", "0", "1", "-2", "-1", "1", "0", "-2", "0", "2", "0", "0", "0",
                "0", "0", "0", "0", "0"],
    (0, 0, 1): ["0", "0", "0", "0", "1", "-1", "-2", "1", "0", "0", "-2", "2", "0", "0", "0",
                "0", "0", "0", "0", "0"],
    (1, 1, 0): ["1", "-3", "-2", "1", "6", "6", "-4", "-2", "-10", "-12", "10", "8", "15", "20",
                "-20", "-20", "-103/3", "-10/3", "185/3", "42/5"],
    (0, 2, 0): ["0", "0", "0", "0", "1/4", "-1/2", "-1/4", "1/4", "-1/2", "3/4", "3/4", "-3/4",
                "1/4", "1/2", "-1/2", "-3/4", "-1/2", "1/4", "1", "0"],
    (0, 1, 1): ["0", "0", "0", "0", "0", "0", "0", "0", "-1", "2", "2", "-3", "1", "-1", "-1",
                "-1", "-8/3", "10/3", "10/3", "4/5"],
}

# coefficient of q1*q2 in s(q)^2, s = sum_beta (sum of the coordinates of the beta-term) q^beta,
# by a double loop over lattice points
GR25_CONVOLUTION_Q1Q2 = Fraction(556, 5)


def test_beta_zero_term_is_unit(gr25):
    unit = gr25.ring.basis_vector(0)
    assert gr25.extraction.ifn.terms[(0, 0, 0)] == unit


@pytest.mark.parametrize("beta", sorted(GR25_TERMS))
def test_gr25_beta_terms(gr25, beta):
    got = gr25.extraction.ifn.terms[beta]
    assert [Fraction(x) for x in got] == [Fraction(x) for x in GR25_TERMS[beta]]


def test_gr25_convolution(gr25):
    ifn = gr25.extraction.ifn
    s = TruncatedSeries(ifn.names, (1, 1, 1), {b: sum(v) for b, v in ifn.terms.items()})
    assert series_mul(s, s).coefficient((1, 1, 0)) == GR25_CONVOLUTION_Q1Q2


def test_exceptional_term_starts_at_negative_z_power(gr25):
    z = gr25.extraction.ifn.zexpansion((0, 1, 0))
    assert z.highest() == -2 and z.lowest() == -3


def test_flag_exceptional_term_degree_bookkeeping(fl123):
    ifn = fl123.extraction.ifn
    beta = (0, 0, 1)
    z = ifn.zexpansion(beta)
    # c1 . beta = 0, so each class of half-degree p sits at z^-p
    for power, vec in z.coeffs.items():
        degs = {fl123.model.half_degrees()[k] for k, x in enumerate(vec) if x}
        assert degs == {-power}


def test_gamma_factor_small_cases():
    # 1/(R+1)(R+2) = 1/2 - 3/4 R + 7/8 R^2 - ...
    assert gamma_factor(2, 2) == [Fraction(1, 2), Fraction(-3, 4), Fraction(7, 8)]
    # R(R-1) for degree -2
    assert gamma_factor(-2, 2) == [0, -1, 1]
    assert gamma_factor(0, 3) == [1, 0, 0, 0]


# -- operators --------------------------------------------------------------

@pytest.mark.parametrize("k, text", [
    (0, "1"),
    (16, "(zD1)^5 + (-q1 - q1*q2 - q1*q3)*1"),
    (17, "(zD1)^4*(zD2) + (-q1*q2)*1"),
    (18, "(zD1)^4*(zD3) + (-q1*q3)*1"),
])
def test_gr25_operators(gr25, k, text):
    assert format_operator(gr25.model, gr25.extraction.operators[k]) == text


def test_shipped_operator_list(gr25):
    assert operator_list_check(gr25)


@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_trivial_mirror_map(name):
    """D_i I = phi_i + O(1/z) with no q-correction in the leading term."""
    res = __import__("conftest").cached_resolution(name)
    model = res.model
    hd = model.half_degrees()
    for i, out in enumerate(res.extraction.results):
        for beta, vec in out.items():
            c1b = sum(c * n for c, n in zip(model.c1, beta))
            for k, x in enumerate(vec):
                if x and hd[i] - hd[k] - c1b >= 0:
                    assert (beta, k, x) == ((0,) * len(beta), i, 1)


# -- matrices ---------------------------------------------------------------

def test_flag_exceptional_entry(fl123):
    entry = fl123.extraction.matrices[2].entries[4][3]
    assert entry == parse_expression("q3/(1-q3)", ("q1", "q2", "q3"))


def test_gr24_rational_entries(gr24):
    m = gr24.matrix("m1-2*m2")
    want = parse_expression("2*(1+q2)/(1-q2)", ("q1", "q2"))
    assert m[4][2] == want and m[6][4] == want


def test_gr25_product_with_top_power(gr25):
    got = gr25.ring.product(gr25.vector("m1"), gr25.vector("m1^6"))
    want = product_vector("5*m2*m3*q1 + (5*m1*m3-5*m2*m3)*q1*q2 + (5*m1*m2-5*m2*m3)*q1*q3",
                          gr25.model.presentation, gr25.section["variables"])
    assert got == want


@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_zero_q_gives_cup_product(name):
    res = __import__("conftest").cached_resolution(name)
    zero = {v: 0 for v in res.model.qnames}
    cup = res.model.divisor_matrices()
    for qm, c in zip(res.extraction.matrices, cup):
        at0 = [[x.evaluate(zero) if x else 0 for x in row] for row in qm.entries]
        assert at0 == c


def test_truncation_independence():
    base = resolution("gr24")
    for t in ((1, 8), (3, 10)):
        other = resolution("gr24", truncation=t)
        assert [m.entries for m in other.extraction.matrices] == \
            [m.entries for m in base.extraction.matrices]


def test_truncation_too_small_for_grading():
    with pytest.raises(InsufficientTruncation):
        resolution("gr24", truncation=(0, 8))


def test_truncation_too_small_for_fit():
    with pytest.raises(InsufficientOrders):
        resolution("gr24", truncation=(3, 2))


def test_missing_ansatz_factor_is_reported():
    with pytest.raises(NoClosedForm) as err:
        resolution("fl123", ansatz=["1-q1"])
    assert err.value.series is not None


def test_ansatz_from_config():
    assert parse_poly("1-q3", ("q1", "q2", "q3")) in resolution("fl123", ansatz=["1-q3"]).model.ansatz
