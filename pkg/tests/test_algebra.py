from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricqc.algebra import (I, Poly, RationalFunction, Scalar, TruncatedSeries, format_scalar,
                             parse_expression, parse_poly, parse_rational, parse_scalar,
                             rational_from_series, residue_at_one, series_mul)
from toricqc.errors import (HigherOrderPole, InsufficientOrders, NoClosedForm, NonIsolatedPole,
                            StructuralError)

Q = ("q",)
Q3 = ("q1", "q2", "q3")


def rf(text, names=Q3):
    return parse_expression(text, names)


# -- scalars ----------------------------------------------------------------

def test_i_squares_to_minus_one():
    assert I * I == -1
    assert Scalar(3) == 3


def test_scalar_text_round_trip():
    for x in (Scalar(1, -2), Scalar(0, Fraction(3, 7)), Fraction(-5, 3), I):
        assert parse_scalar(format_scalar(x)) == x


rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@given(rationals, rationals, rationals, rationals)
def test_scalar_field_axioms(a, b, c, d):
    x, y = Scalar(a, b), Scalar(c, d)
    assert x * y == y * x
    assert (x + y) - y == x
    if c or d:
        assert (x / y) * y == x
    assert parse_scalar(format_scalar(x)) == x


# -- series -----------------------------------------------------------------

def test_difference_of_squares():
    a = rf("1+q", Q).expand((2,))
    b = rf("1-q", Q).expand((2,))
    assert series_mul(a, b) == rf("1-q^2", Q).expand((2,))


def test_telescoping_geometric_series():
    s = rf("q2/(1-q2)").expand((0, 3, 0))
    assert series_mul(s, rf("1-q2").expand((0, 3, 0))).terms == {(0, 1, 0): 1}


def test_series_variable_mismatch():
    a = TruncatedSeries(("q",), (2,), {(1,): 1})
    b = TruncatedSeries(("q1", "q2"), (2, 2), {(1, 0): 1})
    with pytest.raises(StructuralError):
        series_mul(a, b)


def test_series_uses_componentwise_minimum_bound():
    a = TruncatedSeries(("q",), (5,), {(k,): 1 for k in range(6)})
    b = TruncatedSeries(("q",), (2,), {(0,): 1})
    assert series_mul(a, b).bounds == (2,)


small_poly = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                             st.integers(-4, 4), max_size=5)


@given(small_poly, small_poly, small_poly)
def test_series_associative(a, b, c):
    names, bounds = ("x", "y"), (4, 4)
    sa, sb, sc = (TruncatedSeries(names, bounds, t) for t in (a, b, c))
    assert series_mul(series_mul(sa, sb), sc) == series_mul(sa, series_mul(sb, sc))


@given(small_poly)
def test_series_has_no_zero_terms(a):
    s = TruncatedSeries(("x", "y"), (2, 2), a)
    assert all(c for c in s.terms.values())
    assert all(max(e) <= 2 for e in s.terms)


# -- rational reconstruction ------------------------------------------------

def test_geometric_series_closed_form():
    s = TruncatedSeries(Q, (6,), {(k,): 1 for k in range(1, 7)})
    got = rational_from_series(s, [parse_poly("1-q", Q)])
    assert got == rf("q/(1-q)", Q)


def test_constant_series():
    s = TruncatedSeries(Q3, (3, 6, 6), {(0, 0, 0): 1})
    ansatz = [parse_poly(t, Q3) for t in ("1-q2", "1-q3", "1-q2-q3")]
    assert rational_from_series(s, ansatz) == rf("1")


def test_two_factor_denominator_recovered():
    target = rf("-q2*q3/((1-q2)*(1-q2-q3)) + 3*q2/(1-q2)")
    ansatz = [parse_poly(t, Q3) for t in ("1-q2", "1-q3", "1-q2-q3")]
    got = rational_from_series(target.expand((0, 8, 8)), ansatz, exact_vars=("q1",))
    assert got == target


def test_no_closed_form_outside_ansatz():
    s = rf("q/(1-2*q)", Q).expand((8,))
    with pytest.raises(NoClosedForm) as err:
        rational_from_series(s, [parse_poly("1-q", Q)])
    assert err.value.series is s


def test_too_few_orders():
    s = rf("q/(1-q)", Q).expand((2,))
    with pytest.raises(InsufficientOrders):
        rational_from_series(s, [parse_poly("1-q", Q)], degree_cap=2)


numerators = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                             st.integers(-5, 5), max_size=4)


@given(numerators, st.integers(0, 1), st.integers(0, 1))
def test_reconstruction_inverts_expansion(num, e1, e2):
    names = ("a", "b")
    factors = [(parse_poly("1-a", names), 1)] * e1 + [(parse_poly("1-a-b", names), 1)] * e2
    f = RationalFunction(Poly(names, num), factors)
    ansatz = [parse_poly("1-a", names), parse_poly("1-a-b", names)]
    assert rational_from_series(f.expand((7, 7)), ansatz, degree_cap=2) == f


# -- residues ---------------------------------------------------------------

def test_flag_residue_entry():
    assert residue_at_one(rf("q3/(1-q3)"), "q3", "dlog") == rf("-1")


def test_grassmannian_residue_entry():
    assert residue_at_one(rf("2*(1+q2)/(1-q2)"), "q2", "plain") == rf("4")


def test_regular_function_has_zero_residue():
    for conv in ("plain", "dlog"):
        assert residue_at_one(rf("1"), "q2", conv).is_zero()


def test_higher_order_pole():
    with pytest.raises(HigherOrderPole):
        residue_at_one(rf("1/(1-q2)^2"), "q2")


def test_non_isolated_pole():
    f = RationalFunction(Poly.one(Q3), [(parse_poly("1-q2", Q3), 1), (parse_poly("1-q2^2", Q3), 1)])
    with pytest.raises(NonIsolatedPole):
        residue_at_one(f, "q2")


def test_residue_leaves_other_variables():
    f = rf("q1*q3/((1-q2)*(1-q2-q3))")
    assert residue_at_one(f, "q2", "plain") == rf("-q1")


@given(numerators)
def test_dlog_is_minus_plain(num):
    names = ("q1", "q2")
    a = Poly(names, {(i, j): c for (i, j), c in num.items()})
    f = RationalFunction(a, [(parse_poly("1-q2", names), 1)])
    plain = residue_at_one(f, "q2", "plain")
    assert residue_at_one(f, "q2", "dlog") == -plain
    assert plain == RationalFunction.from_poly(a.substitute({"q2": 1}))


# -- serialization ----------------------------------------------------------

@given(numerators, st.integers(0, 2), st.integers(0, 1))
def test_rational_text_round_trip(num, e1, e2):
    names = ("q2", "q3")
    factors = [(parse_poly("1-q2", names), e1), (parse_poly("1-q2-q3", names), e2)]
    f = RationalFunction(Poly(names, num), [(g, m) for g, m in factors if m])
    assert parse_rational(str(f), names) == f


def test_gaussian_coefficients_survive_text():
    f = parse_expression("i*q - 1/3", Q)
    assert parse_rational(str(f), Q) == f
    assert f.evaluate({"q": 1}) == Scalar(Fraction(-1, 3), 1)


def test_monomial_text():
    assert str(parse_poly("q1^2*q2", ("q1", "q2"))) == "q1^2*q2"
