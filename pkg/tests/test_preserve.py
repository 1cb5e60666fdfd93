from fractions import Fraction

import pytest

from monadpreserve.algebra import FinAlgebra, projection_algebra
from monadpreserve.core import StructureError
from monadpreserve.monads import builtin_instances
from monadpreserve.preserve import (PRESERVED, UNKNOWN, VIOLATED, alphacom_check, check_preservation,
                                    residual_commutes, verify_witness)
from monadpreserve.reproduce import BINARY, WITH_ZERO, dist_counterexample
from monadpreserve.terms import Signature, parse_equation, parse_term

B = builtin_instances()
RING = Signature.parse("mul/2, add/2")


def e(src, sig=BINARY):
    return parse_equation(src, sig)


IDEM = e("m(x,x) = x")
COMM = e("m(x,y) = m(y,x)")
ABSORB = e("m(x,zero) = zero", WITH_ZERO)
PREFIX = e("m(m(x,y),z) = m(x,y)")


def test_powerset_preserves_commutativity():
    rep = check_preservation(B["powerset"], COMM, max_carrier=3)
    assert rep.verdict == PRESERVED and rep.witness is None
    assert rep.stats["algebras"] == 1 + 8 + 729


def test_powerset_violates_idempotence_with_two_element_subset():
    rep = check_preservation(B["powerset"], IDEM, max_carrier=3)
    assert rep.verdict == VIOLATED
    (u,) = rep.witness.assignment
    assert len(u) == 2 and rep.replay(B["powerset"], IDEM)


def test_powerset_violates_absorption_at_empty_set():
    rep = check_preservation(B["powerset"], ABSORB, max_carrier=2)
    assert rep.verdict == VIOLATED
    assert rep.witness.assignment == (frozenset(),)
    assert rep.witness.lhs == frozenset() and len(rep.witness.rhs) == 1


def test_dist_idempotence_witness():
    T, alg, nu = dist_counterexample()
    equal, lhs, rhs = verify_witness(T, IDEM, alg, [nu])
    assert not equal
    assert lhs[2] == Fraction(1, 4) and rhs.get(2, 0) == 0
    rep = check_preservation(T, IDEM, algebras=[alg], seed_assignments=[(nu,)], samples=0)
    assert rep.verdict == VIOLATED and rep.witness.assignment == (nu,)


def test_dist_randomized_finds_idempotence_violation():
    rep = check_preservation(B["dist"], IDEM, max_carrier=3, samples=50, seed=1)
    assert rep.verdict == VIOLATED and rep.replay(B["dist"], IDEM)


def test_dist_never_certifies():
    rep = check_preservation(B["dist"], COMM, max_carrier=2, samples=20)
    assert rep.verdict == UNKNOWN and not rep.budget_exhausted


def test_verify_witness_examples():
    P = B["powerset"]
    alg = FinAlgebra(BINARY, 2, {"m": [0, 1, 1, 0]})
    assert verify_witness(P, COMM, alg, {"x": frozenset({0}), "y": frozenset({0, 1})})[0]
    W = B["writer:z2"]
    pi = projection_algebra(2, [1, 4])
    equal, lhs, rhs = verify_witness(W, IDEM, pi, [(1, 2)])
    assert not equal and lhs == (0, 2) and rhs == (1, 2)
    with pytest.raises(StructureError):
        verify_witness(P, IDEM, alg, [frozenset()])
    with pytest.raises(StructureError):
        verify_witness(P, COMM, alg, [frozenset()])


@pytest.mark.parametrize("sel", ["powerset", "maybe", "writer:z2", "multiset:f2", "reader:2"])
def test_violations_replay(sel):
    T = B[sel]
    for eq in (IDEM, ABSORB, PREFIX, e("m(x,m(y,y)) = m(y,y)")):
        rep = check_preservation(T, eq, max_carrier=2)
        if rep.violated:
            assert rep.replay(T, eq)
            doc = rep.to_json(T)
            assert set(doc) >= {"verdict", "bounds", "witness", "stats", "seed"}
            assert doc["witness"]["algebra"]["carrier"] == rep.witness.carrier


@pytest.mark.parametrize("sel", ["powerset+", "reader:2", "writer:trivial", "multiset:trivial"])
def test_affine_monads_keep_strict_drop(sel):
    for eq in (ABSORB, PREFIX):
        assert check_preservation(B[sel], eq, max_carrier=2).verdict == PRESERVED


def test_dist_keeps_strict_drop_when_sampled():
    for eq in (ABSORB, PREFIX):
        assert check_preservation(B["dist"], eq, max_carrier=2, samples=30).verdict != VIOLATED


@pytest.mark.parametrize("sel", ["maybe", "reader:2"])
def test_relevant_monads_keep_strict_dup(sel):
    dist = parse_equation("mul(x,add(y,z)) = add(mul(x,y),mul(x,z))", RING)
    assert check_preservation(B[sel], IDEM, max_carrier=3).verdict == PRESERVED
    assert check_preservation(B[sel], dist, max_carrier=2).verdict == PRESERVED


@pytest.mark.parametrize("sel, eq", [("powerset", IDEM), ("writer:z2", IDEM), ("powerset", ABSORB),
                                     ("maybe", ABSORB)])
def test_violation_is_monotone_in_bound(sel, eq):
    first = None
    for k in (1, 2, 3):
        rep = check_preservation(B[sel], eq, max_carrier=k, budget=10**5)
        if first is None and rep.violated:
            first = k
        if first is not None:
            assert rep.violated
    assert first is not None


def test_budget_exhaustion_is_unknown():
    rep = check_preservation(B["powerset"], COMM, max_carrier=3, budget=100)
    assert rep.verdict == UNKNOWN and rep.budget_exhausted
    assert rep.stats["assignments"] <= 100


@pytest.mark.parametrize("sel, eq, kw", [
    ("powerset", IDEM, {}),
    ("powerset", COMM, {}),
    ("dist", IDEM, {"samples": 20, "seed": 5}),
    ("writer:z2", PREFIX, {}),
])
def test_parallel_matches_serial(sel, eq, kw):
    T = B[sel]
    serial = check_preservation(T, eq, max_carrier=3, **kw)
    parallel = check_preservation(T, eq, max_carrier=3, jobs=2, **kw)
    assert serial.to_json(T) == parallel.to_json(T)


def test_residual_examples():
    m = lambda s: parse_term(s, BINARY)
    for sel, T in B.items():
        assert residual_commutes(T, m("m(y,x)"), ["x", "y"], 2, samples=30)[0], sel
    ok, wit = residual_commutes(B["powerset"], m("m(x,x)"), ["x"], 2)
    assert not ok and len(wit[0]) == 2
    assert residual_commutes(B["maybe"], m("m(x,x)"), ["x"], 3)[0]


@pytest.mark.parametrize("sel, eq", [("powerset", ABSORB), ("writer:z2", e("m(x,m(y,y)) = m(y,y)")),
                                     ("maybe", ABSORB)])
def test_alphacom(sel, eq):
    res = alphacom_check(B[sel], eq)
    assert res.ok and res.dropped == "x" and res.side == "lhs"
    assert res.other_side_commutes is False     # T1 is not trivial for these three


def test_alphacom_affine_both_sides():
    res = alphacom_check(B["powerset+"], ABSORB)
    assert res.ok and res.other_side_commutes


def test_alphacom_rejects_non_one_drop():
    with pytest.raises(StructureError):
        alphacom_check(B["powerset"], IDEM)
