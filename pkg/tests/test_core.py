import itertools
import json

import pytest
from hypothesis import given, strategies as st

from monadpreserve.core import (BOOLEAN, F2, TRIVIAL_SEMIRING, Z2, BudgetExceeded, FinFun, FinSet, MonoidTable,
                                SemiringTable, StructureError, compose, enumerate_maps, product, validate_monoid,
                                validate_semiring)


def fun(dom, cod, table):
    return FinFun(FinSet(dom), FinSet(cod), tuple(table))


def test_compose_identity():
    f = fun(2, 3, [2, 0])
    assert compose(FinFun.identity(FinSet(2)), f) == f
    assert compose(f, FinFun.identity(FinSet(3))) == f


def test_compose_involution_and_constant():
    swap = fun(2, 2, [1, 0])
    assert compose(swap, swap).table == (0, 1)
    assert compose(fun(2, 2, [0, 0]), fun(2, 2, [1, 1])).table == (1, 1)


def test_compose_mismatch():
    with pytest.raises(StructureError):
        compose(fun(2, 3, [0, 1]), fun(2, 2, [0, 1]))


def test_finfun_rejects_out_of_range():
    with pytest.raises(StructureError):
        fun(2, 2, [0, 2])


def test_product_examples():
    assert product([]).carrier.size == 1
    p = product([2, 3])
    assert p.carrier.size == 6 and p.index((1, 2)) == 5 and p.tuple(5) == (1, 2)
    q = product([2, 2, 2])
    assert q.carrier.size == 8 and q.index((1, 0, 1)) == 5 and q.tuple(5) == (1, 0, 1)


@given(st.lists(st.integers(1, 4), max_size=4))
def test_product_round_trip(sizes):
    p = product(sizes)
    for i in range(p.carrier.size):
        assert p.index(p.tuple(i)) == i


def test_projection():
    p = product([2, 3])
    assert p.projection(1).table == (0, 1, 2, 0, 1, 2)


def test_enumerate_maps_counts():
    assert len(list(enumerate_maps(FinSet(1), FinSet(3)))) == 3
    assert len(list(enumerate_maps(FinSet(2), FinSet(2)))) == 4
    assert sum(1 for _ in enumerate_maps(FinSet(9), FinSet(3))) == 19683


def test_enumerate_maps_lexicographic_and_unique():
    tables = [f.table for f in enumerate_maps(FinSet(2), FinSet(3))]
    assert tables == sorted(tables) and len(set(tables)) == 9


def test_enumerate_maps_budget_refuses_before_iterating():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_maps(FinSet(40), FinSet(3), budget=10**6)
    assert exc.value.count == 3**40


def small_funs(n):
    return [FinFun(FinSet(n), FinSet(n), t) for t in itertools.product(range(n), repeat=n)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_compose_associative_exhaustive(n):
    fs = small_funs(n)
    for f, g, h in itertools.product(fs, fs[:5], fs[:5]):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


@pytest.mark.parametrize("table", [F2, BOOLEAN, TRIVIAL_SEMIRING])
def test_stock_semirings_valid(table):
    assert validate_semiring(table) is None


def test_broken_semiring_reports_commutativity():
    broken = SemiringTable(2, (0, 0, 1, 0), F2.mul, 0, 1)
    v = validate_semiring(broken)
    assert v.axiom == "add commutativity" and v.witness == (0, 1)


def _mutants(t: SemiringTable):
    for field in ("add", "mul"):
        tab = getattr(t, field)
        for i in range(len(tab)):
            for v in range(t.size):
                if v != tab[i]:
                    new = list(tab)
                    new[i] = v
                    yield SemiringTable(t.size, **{**{"add": t.add, "mul": t.mul}, field: tuple(new)},
                                        zero=t.zero, one=t.one)
    yield SemiringTable(t.size, t.add, t.mul, t.one, t.zero)


def test_single_entry_mutations_of_f2():
    # 1 + 1 = 1 turns F2 into the Boolean semiring, the one mutant that is still a semiring
    accepted = [m for m in _mutants(F2) if validate_semiring(m) is None]
    assert [(m.add, m.mul) for m in accepted] == [(BOOLEAN.add, BOOLEAN.mul)]


def test_semiring_json_round_trip(tmp_path):
    path = tmp_path / "f2.json"
    path.write_text(json.dumps(F2.to_json()))
    loaded = SemiringTable.from_json(path)
    assert (loaded.add, loaded.mul, loaded.zero, loaded.one) == (F2.add, F2.mul, 0, 1)
    assert loaded.name == "f2"


def test_monoid_validation():
    assert validate_monoid(Z2) is None
    bad = MonoidTable(2, (0, 1, 0, 0), 0, True)
    assert validate_monoid(bad).axiom == "unit"
    noncomm = MonoidTable(3, (0, 1, 2, 1, 1, 1, 2, 2, 2), 0, True)
    assert validate_monoid(noncomm).axiom == "commutativity"


def test_monoid_json_infers_commutativity():
    m = MonoidTable.from_json({"size": 2, "op": [0, 1, 1, 0], "unit": 0})
    assert m.commutative and m.power(1, 2) == 0 and m.power(1, 3) == 1
