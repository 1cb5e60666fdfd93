import pytest

from monadpreserve.algebra import satisfies
from monadpreserve.monads import builtin_instances
from monadpreserve.props import (DISCERNING, NO, NOT_DISCERNING, UNKNOWN, YES, algebraic_relevance_check,
                                 generic_operation, is_affine, matrix_law, n_relevance_check,
                                 relevance_check, relevant_and_affine_implies_relevant_test,
                                 two_discerning_check)
from monadpreserve.reproduce import DISCERNING_FIVE, FIGURE_1A
from monadpreserve.terms import Signature, parse_equation

B = builtin_instances()
M = Signature({"m": 2})


@pytest.mark.parametrize("sel", list(FIGURE_1A))
def test_affine_and_relevant_table(sel):
    affine, relevant = FIGURE_1A[sel]
    assert is_affine(B[sel]).yes == affine
    v = relevance_check(B[sel], 2)
    assert (v.holds == YES) if relevant else v.no


def test_affine_examples():
    v = is_affine(B["powerset"])
    assert v.no and v.condition == "|T1| = 2" and len(v.witness["T1"]) == 2
    assert is_affine(B["dist"]).yes
    assert is_affine(B["writer:z2"]).no
    assert is_affine(B["multiset:f2"]).condition == "|T1| = 2"


def test_powerset_relevance_witness():
    v = relevance_check(B["powerset"], 2)
    assert v.no and v.witness["size"] == 2
    assert sorted(v.witness["u"]) == [0, 1]
    assert len(v.witness["psi(u,u)"]) == 4
    assert v.summary() == "no (psi(u,u) = T(diag)(u) fails)"


def test_dist_relevance_witness_is_two_point_uniform():
    v = relevance_check(B["dist"], 3)
    assert v.no
    assert v.witness["u"] == [[0, "1/2"], [1, "1/2"]]
    assert v.witness["T(diag)(u)"] == [[[0, 0], "1/2"], [[1, 1], "1/2"]]


def test_maybe_relevant_with_certificate():
    v = relevance_check(B["maybe"], 3)
    assert v.yes and v.certificate and v.bound == 3


def test_writer_n_relevance():
    W = B["writer:z2"]
    assert n_relevance_check(W, 2).no
    v3 = n_relevance_check(W, 3)
    assert v3.holds in (YES, UNKNOWN) and not v3.no
    assert v3.details["chi form holds"]
    for sel in ("maybe", "reader:2"):
        assert n_relevance_check(B[sel], 3).yes


def test_dist_not_three_relevant():
    assert n_relevance_check(B["dist"], 3).no


def test_n_relevance_needs_two():
    with pytest.raises(ValueError):
        n_relevance_check(B["maybe"], 1)


@pytest.mark.parametrize("sel", ["reader:2", "dist", "writer:trivial", "powerset+", "multiset:trivial"])
def test_relevant_and_affine_implication(sel):
    assert relevant_and_affine_implies_relevant_test(B[sel], 3)


def test_generic_operation_and_matrix_law():
    P = B["powerset"]
    union = frozenset({0, 1})
    assert generic_operation(P, union, [frozenset({"a"}), frozenset({"b"})]) == frozenset({"a", "b"})
    lhs, rhs = matrix_law(P, union, 2)
    assert lhs == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}) and rhs == frozenset({(0, 0), (1, 1)})
    R = B["reader:2"]
    for omega in R.elements(range(2)):
        l, r = matrix_law(R, omega, 2)
        assert l == r


@pytest.mark.parametrize("sel", list(FIGURE_1A))
def test_algebraic_relevance_agrees_with_relevance(sel):
    v = algebraic_relevance_check(B[sel], max_arity=2)
    assert v.no != FIGURE_1A[sel][1]


def test_not_discerning_by_derivation():
    v = two_discerning_check(parse_equation("m(x, m(y, y)) = m(y, x)", M))
    assert v.status == NOT_DISCERNING and v.derivation.replay()
    assert str(v.companion.equation) == "m(x, m(y, y')) = m(x, m(y', y))"


@pytest.mark.parametrize("src", DISCERNING_FIVE)
def test_discerning_countermodels(src):
    eq = parse_equation(src, M)
    v = two_discerning_check(eq)
    assert v.status == DISCERNING
    assert satisfies(v.countermodel, eq)[0]
    assert not satisfies(v.countermodel, v.companion.equation)[0]
    assert v.to_json()["countermodel"]["carrier"] == v.countermodel.size


def test_verdict_json_shapes():
    doc = relevance_check(B["powerset"], 2).to_json()
    assert doc["holds"] == NO and "witness" in doc and doc["condition"]
