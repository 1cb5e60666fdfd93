import itertools

import pytest
from hypothesis import given, strategies as st

from monadpreserve.terms import (App, Equation, NotDiscerningCandidate, ParseError, Signature, Var, args_of,
                                 classify, discerning_companion, enumerate_terms, parse_equation, parse_term,
                                 parse_theory, signature_of, vars_of)

RING = Signature.parse("mul/2, add/2, zero/0, one/0")
M = Signature({"m": 2})
F = Signature({"f": 3, "m": 2})


def eq(src, sig=RING):
    return parse_equation(src, sig)


def test_parse_examples():
    assert parse_term("mul(x, one)", RING) == App("mul", (Var("x"), App("one", ())))
    assert parse_term("one()", RING) == parse_term("one", RING)
    t = parse_term("f(x,x,z)", F)
    assert args_of(t) == ["x", "x", "z"]


@pytest.mark.parametrize("src, col", [
    ("mul(x)", 1),
    ("mul(x, y, z)", 1),
    ("mul(x, y", 9),
    ("mul(x, y))", 10),
    ("one(x)", 1),
    ("mul(mul, x)", 5),
])
def test_parse_errors_have_positions(src, col):
    with pytest.raises(ParseError) as info:
        parse_term(src, RING)
    assert info.value.column == col


def test_theory_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_theory("theory t\nops: m/2\neq: m(x) = x\n")
    assert info.value.line == 3


def test_theory_file_parses():
    th = parse_theory(open("theories/classes.theory", encoding="utf-8").read())
    assert th.name == "classes" and len(th.equations) == 6 and th.sig == RING


def test_vars_and_args():
    t = parse_term("add(mul(x1, x4), mul(x1, x2))", RING)
    assert args_of(t) == ["x1", "x4", "x1", "x2"]
    assert vars_of(t) == ["x1", "x4", "x2"]
    assert args_of(Var("x")) == ["x"]
    t = parse_term("mul(mul(x, y), x)", RING)
    assert vars_of(t) == ["x", "y"] and args_of(t) == ["x", "y", "x"]
    assert eq("mul(y, x) = mul(x, z)").variables == ["y", "x", "z"]


@pytest.mark.parametrize("src, yes, no", [
    ("mul(x, zero) = zero", {"strict_drop", "one_drop", "drop"}, {"dup", "linear"}),
    ("mul(x, mul(y, y)) = mul(y, y)", {"one_drop", "dup", "drop"}, {"strict_drop", "strict_dup"}),
    ("mul(x, x) = mul(y, y)", {"drop"}, {"one_drop"}),
    ("mul(x, x) = x", {"strict_dup", "two_dup"}, {"drop"}),
    ("mul(x, add(y, z)) = add(mul(x, y), mul(x, z))", {"strict_dup"}, {"drop"}),
    ("mul(x, one) = x", {"linear"}, {"drop", "dup"}),
])
def test_classify_examples(src, yes, no):
    flags = classify(eq(src)).as_dict()
    assert all(flags[f] for f in yes)
    assert not any(flags[f] for f in no)


TERMS = list(enumerate_terms(M, ["x", "y"], 3))


def test_term_family_size():
    # 2 variables, then 2 + 4, 6 + 32, 38 + 1408
    assert len(TERMS) == 1446 == len(set(TERMS))


def _lattice(c):
    assert not c.strict_drop or c.one_drop
    assert not c.one_drop or c.drop
    assert not c.strict_dup or c.dup
    assert not c.two_dup or c.dup
    assert c.linear == (not c.drop and not c.dup)


def test_classification_lattice_small_family_exhaustive():
    small = [t for t in TERMS if len(args_of(t)) <= 4]
    for l, r in itertools.product(small, repeat=2):
        _lattice(classify(Equation(l, r)))


@given(st.sampled_from(TERMS), st.sampled_from(TERMS))
def test_classification_lattice(l, r):
    _lattice(classify(Equation(l, r)))


def test_print_parse_round_trip():
    for t in TERMS:
        assert parse_term(str(t), M) == t


@pytest.mark.parametrize("src, s2, s2p", [
    ("m(y, m(x, y)) = m(y, x)", "m(y, m(x, y'))", "m(y', m(x, y))"),
    ("m(x, m(y, y)) = m(y, x)", "m(x, m(y, y'))", "m(x, m(y', y))"),
])
def test_companion_examples(src, s2, s2p):
    c = discerning_companion(parse_equation(src, M))
    assert (str(c.s2), str(c.s2_swapped)) == (s2, s2p)
    assert c.variable == "y" and c.fresh == "y'" and c.side == "lhs"
    assert classify(c.equation).linear


def test_companion_side_recorded():
    c = discerning_companion(parse_equation("m(x, x) = x", M))
    assert c.side == "lhs" and str(c.equation) == "m(x, x') = m(x', x)"


@pytest.mark.parametrize("src, reason", [
    ("m(x, y) = m(y, x)", "not 2-dup"),
    ("m(x, m(y, y)) = m(y, y)", "drops"),
    ("m(x, x) = m(x, x)", "both sides"),
    ("m(m(x, x), m(y, y)) = m(x, y)", "2 duplicated"),
    ("m(x, m(x, x)) = x", "not 2-dup"),
])
def test_companion_rejections(src, reason):
    with pytest.raises(NotDiscerningCandidate, match=reason):
        discerning_companion(parse_equation(src, M))


def test_companion_is_linear_whenever_defined():
    small = [t for t in enumerate_terms(M, ["x", "y", "z"], 2) if len(args_of(t)) <= 3]
    hits = 0
    for l, r in itertools.product(small, repeat=2):
        e = Equation(l, r)
        try:
            c = discerning_companion(e)
        except NotDiscerningCandidate:
            continue
        hits += 1
        assert classify(c.equation).linear
    assert hits > 0


def test_signature_of():
    e = eq("mul(x, zero) = add(x, one)")
    assert signature_of(e) == Signature([("mul", 2), ("zero", 0), ("add", 2), ("one", 0)])
    with pytest.raises(ValueError):
        Signature([("m", 2), ("m", 1)])
