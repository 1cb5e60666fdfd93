import pytest

from monadpreserve.core import Z2, validate_monoid
from monadpreserve.presentations import (NONTRIVIAL, TRIVIAL, UNDECIDED, MonoidPresentation,
                                         affineness_of_presented, encode_as_theory, load_presentation, monoids,
                                         parse_presentation, parse_word, presentation_of_monoid, t1_triviality)
from monadpreserve.props import NO, UNKNOWN, YES
from monadpreserve.terms import ParseError


def pres(text):
    return parse_presentation(text)


def test_parse_words_and_presentations():
    assert parse_word("ab a", ["a", "b"]) == ("a", "b", "a")
    assert parse_word("ε", ["a"]) == ()
    assert parse_word("xxy", ["x", "xx", "y"]) == ("xx", "y")
    p = pres("generators: a, b\nrelations: ab = ba ; aa =   # comment")
    assert p.generators == ("a", "b")
    assert p.relations == ((("a", "b"), ("b", "a")), (("a", "a"), ()))
    assert MonoidPresentation.from_json(p.to_json()) == p


@pytest.mark.parametrize("text", ["relations: a = ", "generators: a ; relations: a = b", "generators: a ; a",
                                  "generators: a ; relations: a = = a"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ValueError)):
        pres(text)


def test_encoding():
    sig, eqs = encode_as_theory(pres("generators: a ; relations: a ="))
    assert list(sig.items()) == [("f_a", 1)] and str(eqs[0]) == "f_a(x) = x"
    _, eqs = encode_as_theory(pres("generators: a ; relations: aa ="))
    assert str(eqs[0]) == "f_a(f_a(x)) = x"
    _, eqs = encode_as_theory(pres("generators: a, b ; relations: ab = ba"))
    assert str(eqs[0]) == "f_a(f_b(x)) = f_b(f_a(x))"


def test_trivial_by_one_step():
    v = t1_triviality(pres("generators: a ; relations: a ="))
    assert v.status == TRIVIAL and v.trace == {"a": [("a",), ()]} and v.replay()


@pytest.mark.parametrize("text", ["generators: a ; relations: aa =", "generators: a"])
def test_nontrivial_with_z2(text):
    v = t1_triviality(pres(text))
    assert v.status == NONTRIVIAL and v.replay()
    assert v.countermodel.op == Z2.op and v.images == {"a": 1}


def test_inverse_pair_file_is_trivial():
    v = t1_triviality(load_presentation("presentations/inverse-pair.txt"))
    assert v.status == TRIVIAL and v.replay()
    assert v.to_json()["trace"]["a"][-1] == "ε"


def test_budgets_exhausted_is_unknown():
    p = pres("generators: a")
    v = t1_triviality(p, rewrite_budget=50, model_bound=1)
    assert v.status == UNDECIDED and not v.replay()
    a = affineness_of_presented(p, 50, 1)
    assert a.holds == UNKNOWN and "undecidable" in a.details["note"]


def test_affineness_of_presented():
    assert affineness_of_presented(pres("generators: a ; relations: a =")).holds == YES
    assert affineness_of_presented(pres("generators: a ; relations: aa =")).holds == NO


def test_monoid_enumeration():
    two = list(monoids(2))
    assert len(two) == 2 and two[0].op == Z2.op
    for n in (2, 3):
        assert all(validate_monoid(m) is None for m in monoids(n))


def test_table_presentation_is_nontrivial_for_nontrivial_monoids():
    for m in list(monoids(2)) + list(monoids(3))[:6]:
        v = t1_triviality(presentation_of_monoid(m), rewrite_budget=2000, model_bound=3)
        assert v.status == NONTRIVIAL
