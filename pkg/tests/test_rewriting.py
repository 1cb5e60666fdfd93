from monadpreserve.rewriting import derive, match, positions, replace_at, search, subterm_at
from monadpreserve.terms import Signature, Var, parse_equation, parse_term

M = Signature({"m": 2})


def t(src):
    return parse_term(src, M)


def e(src):
    return parse_equation(src, M)


def test_match_binds_consistently():
    assert match(t("m(x, x)"), t("m(y, y)")) == {"x": Var("y")}
    assert match(t("m(x, x)"), t("m(y, z)")) is None
    assert match(t("m(x, y)"), t("z")) is None


def test_positions_and_replacement():
    s = t("m(a, m(b, c))")
    assert [p for p, _ in positions(s)] == [(), (0,), (1,), (1, 0), (1, 1)]
    assert subterm_at(s, (1, 0)) == Var("b")
    assert replace_at(s, (1,), Var("d")) == t("m(a, d)")


def test_commutativity_from_its_axiom():
    d = derive([e("m(x, y) = m(y, x)")], t("m(a, m(b, c))"), t("m(m(c, b), a)"))
    assert d is not None and d.replay()


def test_commutativity_derived_from_x_yy_equals_yx():
    ax = e("m(x, m(y, y)) = m(y, x)")
    d = derive([ax], t("m(x, y)"), t("m(y, x)"), max_depth=4)
    assert d is not None and d.replay()
    assert d.chain()[0] == t("m(x, y)") and d.chain()[-1] == t("m(y, x)")


def test_search_reports_exhaustion():
    d, exhausted = search([e("m(x, x) = x")], t("m(x, y)"), t("m(y, x)"), max_depth=2)
    assert d is None and exhausted


def test_replay_detects_tampering():
    d = derive([e("m(x, y) = m(y, x)")], t("m(a, b)"), t("m(b, a)"))
    assert d.replay()
    d.goal = t("m(a, a)")
    assert not d.replay()


def test_trivial_derivation():
    d = derive([], t("x"), t("x"))
    assert d.steps == [] and d.replay()
