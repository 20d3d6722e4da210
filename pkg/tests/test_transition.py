from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from toricqc.algebra import linalg, parse_expression
from toricqc.errors import StructuralError, TheoremViolation
from toricqc.transition import (compute_filtration, compute_residues, conifold_residue_identity,
                                is_self_adjoint, jordan_blocks, nilpotency_index, rank_one_model,
                                weight_filtration)

from conftest import cached_report


def _residue(res, element, var, convention):
    return compute_residues({var: res.matrix(element)}, [var], convention).matrices[var]


def test_flag_residue_entry(fl123):
    n = _residue(fl123, "fp3", "q3", "dlog")
    nonzero = [(i, j, x) for i, row in enumerate(n) for j, x in enumerate(row) if x]
    assert nonzero == [(4, 3, -1)]


def test_gr24_residue_entries(gr24):
    n = _residue(gr24, "m1-2*m2", "q2", "plain")
    nonzero = {(i, j): x for i, row in enumerate(n) for j, x in enumerate(row) if x}
    assert nonzero[(4, 2)] == 4 and nonzero[(6, 4)] == 4


def test_regular_divisor_has_no_residue(fl123, gr24):
    for res, el, var in ((fl123, "fp1", "q3"), (gr24, "m1", "q2")):
        assert linalg.is_zero_matrix(_residue(res, el, var, "plain"))


def test_nilpotency_indices(fl123, gr24):
    assert nilpotency_index(_residue(fl123, "fp3", "q3", "dlog")) == 2
    n = _residue(gr24, "m1-2*m2", "q2", "plain")
    ranks = [linalg.rank(n), linalg.rank(linalg.matmul(n, n)),
             linalg.rank(linalg.matmul(n, linalg.matmul(n, n)))]
    assert ranks == [2, 1, 0]
    assert cached_report("gr25").data["residues"]["nilpotency_index"] == {"q2": 5, "q3": 5}


def test_residues_are_self_adjoint(fl123, gr24):
    assert is_self_adjoint(_residue(fl123, "fp3", "q3", "dlog"), fl123.ring.pairing)
    assert is_self_adjoint(_residue(gr24, "m1-2*m2", "q2", "plain"), gr24.ring.pairing)
    assert cached_report("gr25").checks["residues_self_adjoint"]


@given(st.integers(-6, 6).filter(bool), st.sampled_from(["plain", "dlog"]))
def test_filtration_is_independent_of_scale_and_convention(lam, convention):
    from conftest import cached_resolution
    res = cached_resolution("gr24")
    m = [[x * lam if x else 0 for x in row] for row in res.matrix("m1-2*m2")]
    base = _residue(res, "m1-2*m2", "q2", "plain")
    rd = compute_residues({"q2": m}, ["q2"], convention)
    sign = 1 if convention == "plain" else -1
    assert rd.matrices["q2"] == [[sign * lam * x for x in row] for row in base]
    got = compute_filtration(rd, res.ring.pairing)
    want = compute_filtration({"q2": base}, res.ring.pairing)
    assert linalg.subspace_equal(got.V, want.V) and linalg.subspace_equal(got.W, want.W)


def test_dimensions_of_subquotients():
    dims = {n: cached_report(n).data["dims"] for n in ("fl123", "gr24", "gr25")}
    assert [(d["dim_V"], d["dim_W"], d["dim_quotient"]) for d in dims.values()] == \
        [(7, 1, 6), (6, 1, 5), (12, 2, 10)]
    assert cached_report("gr25").data["weight_filtration"]["jordan_blocks"] == {"1": 10, "5": 2}


def test_all_residues_zero():
    zero = linalg.zeros(3, 3)
    filt = compute_filtration({"q": zero})
    assert len(filt.V) == 3 and filt.W == []
    wf = weight_filtration(zero)
    assert len(wf.piece(0)) == 3 and wf.piece(-1) == []


# -- Jordan blocks and the weight filtration --------------------------------

@st.composite
def nilpotent_matrices(draw):
    dim = draw(st.integers(1, 6))
    upper = [[draw(st.integers(-2, 2)) if j > i else 0 for j in range(dim)] for i in range(dim)]
    # conjugate by a unimodular lower-triangular matrix
    low = [[1 if i == j else (draw(st.integers(-1, 1)) if j < i else 0) for j in range(dim)]
           for i in range(dim)]
    inv = [[Fraction(x) for x in row] for row in sp.Matrix(low).inv().tolist()]
    return linalg.matmul(linalg.matmul(low, upper), inv)


def _sympy_blocks(n):
    _, J = sp.Matrix(n).jordan_form()
    sizes, run = [], 1
    for i in range(J.rows - 1):
        if J[i, i + 1] == 1:
            run += 1
        else:
            sizes.append(run)
            run = 1
    sizes.append(run)
    out = {}
    for s in sizes:
        out[s] = out.get(s, 0) + 1
    return out


@given(nilpotent_matrices())
def test_jordan_blocks_agree_with_sympy(n):
    assert jordan_blocks(n) == _sympy_blocks(n)


@given(nilpotent_matrices())
def test_weight_filtration_properties(n):
    wf = weight_filtration(n)
    top = max(wf.blocks)
    dim = lambda k: len(wf.piece(k))  # noqa: E731
    for k in range(-top, top + 1):
        image = [linalg.matvec(n, v) for v in wf.piece(k)]
        assert all(linalg.in_span(v, wf.piece(k - 2)) for v in image if any(v))
    power = linalg.identity(len(n))
    for k in range(1, top):
        power = linalg.matmul(power, n)
        assert dim(k) - dim(k - 1) == dim(-k) - dim(-k - 1)
        image = [linalg.matvec(power, v) for v in wf.piece(k)] + wf.piece(-k - 1)
        assert linalg.subspace_equal(linalg.span_basis(image), wf.piece(-k))


def test_jordan_blocks_reject_non_nilpotent():
    with pytest.raises(StructuralError):
        jordan_blocks([[1, 0], [0, 0]])


# -- identities and models --------------------------------------------------

@pytest.mark.parametrize("degrees", [(1, 1, 1), (2, 3, 5), (-1, 1, 2)])
def test_conifold_identity(degrees):
    assert conifold_residue_identity(degrees)


def test_rank_one_model():
    pairing = [[0, 1], [1, 0]]
    v = rank_one_model([[0, 0], [3, 0]], pairing, [0, 1])
    assert v and v.witness == 3
    assert not rank_one_model([[1, 0], [0, 1]], pairing, [0, 1])


def test_rank_one_model_on_flag():
    assert cached_report("fl123").checks["rank_one_model"]


def test_theta_sign_ambiguity():
    rep = cached_report("gr24")
    assert rep.checks["weight_transition_plus"] and rep.checks["weight_transition_minus"]


@pytest.mark.parametrize("name", ["fl123", "gr24", "gr25"])
def test_topology_and_transition(name):
    rep = cached_report(name)
    assert rep.checks["topology"]
    assert all(v for k, v in rep.checks.items() if k.startswith("transition_"))


def test_residue_order_independence():
    rep = cached_report("gr25")
    assert rep.data["residues"]["opposite_order_agrees"] == {"q2": True, "q3": True}


def test_dlog_convention_negates_the_whole_report():
    plain = cached_report("gr25", "plain")
    dlog = cached_report("gr25", "dlog")
    assert plain.ok and dlog.ok
    for var, m in plain.data["residues"]["matrices"].items():
        other = dlog.data["residues"]["matrices"][var]
        assert [[Fraction(x) for x in r] for r in m] == [[-Fraction(x) for x in r] for r in other]


# -- violations --------------------------------------------------------------

def test_non_constant_residue_is_a_violation():
    names = ("q1", "q2")
    m = [[parse_expression("q1/(1-q2)", names)]]
    with pytest.raises(TheoremViolation):
        compute_residues({"q2": m}, ["q2"], "plain")


def test_non_nilpotent_residue_is_a_violation():
    m = [[parse_expression("1/(1-q)", ("q",))]]
    with pytest.raises(TheoremViolation) as err:
        compute_residues({"q": m}, ["q"], "plain")
    assert err.value.report == [["-1"]] or err.value.report == [["1"]]


def test_double_pole_is_a_violation():
    m = [[parse_expression("1/(1-q)^2", ("q",))]]
    with pytest.raises(TheoremViolation):
        compute_residues({"q": m}, ["q"], "plain")
