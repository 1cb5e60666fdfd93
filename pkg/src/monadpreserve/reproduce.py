"""The reproduction suite: thirteen numbered checks, each returning a
:class:`CriterionResult`. Shared by ``monadpreserve reproduce`` and the
acceptance tests.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import (FinAlgebra, count_algebras, derived_algebra, element_of_tuple, enumerate_algebras, evaluate,
                      prepare, projection_algebra, random_algebra, satisfies)
from .core import Z2, TRIVIAL_MONOID
from .laws import SabotagedPsi, check_laws
from .monads import Writer, builtin_instances
from .preserve import PRESERVED, VIOLATED, alphacom_check, check_preservation, residual_commutes, verify_witness
from .presentations import (NONTRIVIAL, TRIVIAL, UNDECIDED, parse_presentation, presentation_of_monoid,
                            t1_triviality)
from .props import (DISCERNING, NOT_DISCERNING, algebraic_relevance_check, generic_operation, is_affine,
                    n_relevance_check, relevance_check, two_discerning_check)
from .rewriting import derive
from .terms import Signature, parse_equation, parse_term, vars_of

BINARY = Signature.parse("m/2")
WITH_ZERO = Signature.parse("m/2, zero/0")
WITH_UNIT = Signature.parse("m/2, e/0")

# (affine, relevant) per instance, as in the affine/relevant table
FIGURE_1A = {
    "powerset": (False, False),
    "powerset+": (True, False),
    "dist": (True, False),
    "maybe": (False, True),
    "reader:2": (True, True),
    "writer:trivial": (True, True),
    "writer:z2": (False, False),
    "multiset:f2": (False, False),
    "multiset:trivial": (True, True),
}

CORPUS = [
    "m(x,y) = m(y,x)",
    "m(m(x,y),z) = m(x,m(y,z))",
    "m(x,x) = x",
    "m(x,e) = x",
    "m(x,e) = e",
    "m(x,m(y,y)) = m(y,y)",
    "m(x,x) = m(y,y)",
    "m(x,m(y,z)) = m(m(x,y),m(x,z))",
    "m(x,m(y,y)) = m(y,x)",
    "m(m(x,y),z) = m(x,y)",
    "m(y,m(x,y)) = m(y,x)",
    "m(z,m(x,x)) = m(z,x)",
]

ONE_DROP = [
    ("m(x,zero) = zero", WITH_ZERO),
    ("m(x,m(y,y)) = m(y,y)", BINARY),
    ("m(m(x,y),z) = m(x,y)", BINARY),
    ("m(x,y) = x", BINARY),
]

DISCERNING_FIVE = [
    "m(m(y,y),x) = m(y,x)",
    "m(m(y,x),y) = m(y,x)",
    "m(m(x,y),y) = m(y,x)",
    "m(y,m(y,x)) = m(y,x)",
    "m(y,m(x,y)) = m(y,x)",
]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool = True
    details: list = field(default_factory=list)
    seconds: float = 0.0
    limit: Optional[float] = None

    def require(self, cond: bool, msg: str):
        self.details.append(("ok   " if cond else "FAIL ") + msg)
        if not cond:
            self.passed = False
        return cond

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:.0f}s)" if self.limit else ""
        return f"[{status}] criterion {self.number:2d}: {self.title} [{self.seconds:.1f}s{limit}]"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "limit": self.limit, "details": self.details}


def _eq(src, sig=BINARY):
    return parse_equation(src, sig)


def _instances(sabotage_psi: bool = False) -> dict:
    inst = builtin_instances()
    if sabotage_psi:
        inst = {k: SabotagedPsi(T) for k, T in inst.items()}
    return inst


# -- the criteria ----------------------------------------------------------------------------


def criterion_1(r: CriterionResult, sabotage_psi: bool = False, **_):
    for sel, T in _instances(sabotage_psi).items():
        report = check_laws(T, samples=1000)
        bad = [f.law for f in report.failures()]
        r.require(report.ok, f"{sel}: {sum(x.checked for x in report.results.values())} law instances"
                  + (f", failing {bad}" if bad else ""))


def criterion_2(r: CriterionResult, sabotage_psi: bool = False, **_):
    for sel, T in _instances(sabotage_psi).items():
        affine, relevant = FIGURE_1A[sel]
        a = is_affine(T)
        r.require(a.yes == affine, f"{sel}: affine {a.holds} (expected {'Yes' if affine else 'No'})")
        if relevant:
            v = relevance_check(T, max_size=3)
            r.require(v.yes and v.certificate is not None, f"{sel}: relevant {v.holds} to size 3, {v.certificate}")
        else:
            v = relevance_check(T, max_size=2)
            r.require(v.no and v.witness["size"] <= 2, f"{sel}: not relevant, witness u = {v.witness and v.witness['u']}")


def dist_counterexample():
    """The idempotent algebra on {a,b,c,d} with ab = c, ba = d, and nu = a/2 + b/2."""
    a, b, c, d = range(4)
    table = [[x] * 4 for x in range(4)]
    table[a][b], table[b][a] = c, d
    alg = FinAlgebra(BINARY, 4, {"m": [v for row in table for v in row]})
    T = builtin_instances()["dist"]
    nu = T.uniform([a, b])
    return T, alg, nu


def criterion_3(r: CriterionResult, **_):
    T, alg, nu = dist_counterexample()
    eq = _eq("m(x,x) = x")
    r.require(satisfies(alg, eq)[0], "algebra is idempotent")
    equal, lhs, rhs = verify_witness(T, eq, alg, [nu])
    c = alg.apply("m", (0, 1))
    r.require(not equal, "lifted sides differ")
    r.require(lhs.get(c, 0) == Fraction(1, 4), f"(nu.nu)(a.b) = {lhs.get(c, 0)}")
    r.require(rhs.get(c, 0) == 0, f"nu(a.b) = {rhs.get(c, 0)}")


def criterion_4(r: CriterionResult, **_):
    inst = builtin_instances()
    eqs = [_eq("m(x,zero) = zero", WITH_ZERO), _eq("m(m(x,y),z) = m(x,y)")]
    for eq in eqs:
        rep = check_preservation(inst["powerset+"], eq, max_carrier=3, budget=None)
        r.require(rep.verdict == PRESERVED,
                  f"powerset+ {eq}: {rep.verdict}, {rep.stats['algebras']} algebras, "
                  f"{rep.stats['assignments']} assignments")
    for eq in eqs:
        rep = check_preservation(inst["dist"], eq, max_carrier=3, budget=None, random_algebras=25,
                                 samples=134, seed=4)
        r.require(rep.verdict != VIOLATED and rep.stats["assignments"] >= 10**4,
                  f"dist {eq}: {rep.verdict}, {rep.stats['assignments']} seeded trials, no violation")


def criterion_5(r: CriterionResult, **_):
    inst = builtin_instances()
    eq = _eq("m(x,zero) = zero", WITH_ZERO)
    for sel in ("powerset", "maybe", "writer:z2", "multiset:f2"):
        T = inst[sel]
        rep = check_preservation(T, eq, max_carrier=2)
        ok = rep.verdict == VIOLATED and rep.replay(T, eq)
        wit = rep.witness.to_json(T, eq.variables)["assignment"] if rep.witness else None
        r.require(ok, f"{sel}: {rep.verdict}, x = {wit}")


def criterion_6(r: CriterionResult, **_):
    inst = builtin_instances()
    eq = _eq("m(x,x) = x")
    for sel in ("maybe", "reader:2"):
        rep = check_preservation(inst[sel], eq, max_carrier=3, budget=None)
        r.require(rep.verdict == PRESERVED, f"{sel}: {rep.verdict} over {rep.stats['algebras']} algebras")
    for sel in ("powerset", "writer:z2"):
        T = inst[sel]
        rep = check_preservation(T, eq, max_carrier=3)
        r.require(rep.verdict == VIOLATED and rep.replay(T, eq), f"{sel}: {rep.verdict} by search")
    proj = projection_algebra(2, [1, 4])
    r.require(satisfies(proj, eq)[0], "m = pi1 x pi2 is idempotent")
    P = inst["powerset"]
    diagonal = frozenset({element_of_tuple((0, 0), 2), element_of_tuple((1, 1), 2)})
    equal, lhs, rhs = verify_witness(P, eq, proj, [diagonal])
    r.require(not equal and rhs < lhs and len(lhs) == 4,
              f"powerset, U = {{(0,0),(1,1)}}: U.U has {len(lhs)} elements")
    W = inst["writer:z2"]
    equal, lhs, rhs = verify_witness(W, eq, proj, [(1, 0)])
    r.require(not equal and lhs == (0, 0), f"writer:z2, (g,x): lifted m gives {lhs} != {rhs}")


def duplication_cases():
    """Equations of the duplication family with projection algebras satisfying them."""
    two_ops = Signature.parse("f/3, m/2")
    m3 = projection_algebra(3, [1, 5, 2])
    f_alg = derived_algebra(m3, two_ops, {"f": parse_term("m(m(x1,x2),x3)", BINARY)})
    return [
        (_eq("m(m(y,x),z) = m(m(y,m(x,x)),z)"), projection_algebra(5, [1, 7, 2, 6, 4])),
        (_eq("m(z,m(x,x)) = m(z,x)"), projection_algebra(3, [1, 5, 4])),
        (parse_equation("f(x,x,z) = m(x,z)", two_ops), f_alg),
        (_eq("m(z,m(x,x)) = m(m(z,y),x)"), projection_algebra(3, [1, 5, 4])),
    ]


def criterion_7(r: CriterionResult, **_):
    P = builtin_instances()["powerset"]
    for eq, alg in duplication_cases():
        r.require(satisfies(alg, eq)[0], f"projection algebra on {alg.size} points satisfies {eq}")
        rep = check_preservation(P, eq, algebras=[alg], samples=2000, max_support=2, seed=7)
        r.require(rep.verdict == VIOLATED and rep.replay(P, eq), f"powerset {eq}: {rep.verdict}")


def criterion_8(r: CriterionResult, **_):
    W = builtin_instances()["writer:z2"]
    ternary = Signature.parse("f/3")
    eq3 = parse_equation("f(x,x,x) = x", ternary)
    rep = check_preservation(W, eq3, max_carrier=2, budget=None)
    r.require(rep.verdict == PRESERVED, f"f(x,x,x)=x on carriers <= 2: {rep.verdict} "
              f"({rep.stats['algebras']} algebras)")
    rep = check_preservation(W, eq3, min_carrier=3, max_carrier=3, random_algebras=1000, seed=8)
    r.require(rep.verdict != VIOLATED and rep.stats["algebras"] == 1000,
              f"f(x,x,x)=x on 1000 random carrier-3 algebras: {rep.verdict}")
    rep = check_preservation(W, _eq("m(x,x) = x"), max_carrier=2)
    r.require(rep.verdict == VIOLATED, f"m(x,x)=x: {rep.verdict}")
    n2, n3 = n_relevance_check(W, 2), n_relevance_check(W, 3)
    r.require(n2.no, f"2-relevance: {n2.holds}")
    r.require(n3.yes, f"3-relevance: {n3.holds} ({n3.certificate})")


def criterion_9(r: CriterionResult, **_):
    T = builtin_instances()["multiset:f2"]
    eq = _eq("m(x,m(y,y)) = m(y,x)")
    r.require(relevance_check(T).no, "multiset:f2 is not relevant")
    for n in (2, 3):
        models = sum(1 for _ in enumerate_algebras(BINARY, n, [eq]))
        rep = check_preservation(T, eq, min_carrier=n, max_carrier=n, budget=None)
        r.require(rep.verdict == PRESERVED,
                  f"size {n}: {count_algebras(BINARY, n)} tables, {models} models, "
                  f"{rep.stats['assignments']} lifted assignments, {rep.verdict}")


def criterion_10(r: CriterionResult, **_):
    eq = _eq("m(x,m(y,y)) = m(y,x)")
    v = two_discerning_check(eq, model_bound=4, derivation_depth=4)
    r.require(v.status == NOT_DISCERNING and v.derivation.replay(),
              f"{eq}: {v.status}, {len(v.derivation.steps) if v.derivation else 0} replayed steps")
    comm = derive([eq], parse_term("m(x,y)", BINARY), parse_term("m(y,x)", BINARY), 3)
    r.require(comm is not None and comm.replay(), "commutativity derivable within depth 3: "
              + (" = ".join(str(t) for t in comm.chain()) if comm else "none"))
    for src in DISCERNING_FIVE:
        eq = _eq(src)
        v = two_discerning_check(eq, model_bound=4, derivation_depth=4)
        ok = (v.status == DISCERNING and v.countermodel.size <= 4 and satisfies(v.countermodel, eq)[0]
              and not satisfies(v.countermodel, v.companion.equation)[0])
        r.require(ok, f"{eq}: {v.status}, countermodel of size {v.countermodel.size if v.countermodel else '-'}")


def criterion_11(r: CriterionResult, **_):
    inst = builtin_instances()
    v = algebraic_relevance_check(inst["powerset"])
    r.require(v.no and v.witness["arity"] == 2 and v.witness["omega"] == [0, 1],
              f"powerset: {v.holds}, omega = {v.witness and v.witness['omega']}")
    for sel in ("reader:2", "maybe"):
        T = inst[sel]
        v = algebraic_relevance_check(T, max_arity=3)
        rel = relevance_check(T)
        r.require(v.yes and v.bound == 3 and rel.yes, f"{sel}: {v.holds} to arity 3, checked {v.details['checked']}")
    R = inst["reader:2"]
    a, b, c, d = (R.unit(s) for s in "abcd")
    ok = True
    for g in R.elements(range(2)):
        lhs = generic_operation(R, g, [generic_operation(R, g, [a, b]), generic_operation(R, g, [c, d])])
        ok &= lhs == generic_operation(R, g, [a, d])
    r.require(ok, "reader:2: g(g(a,b),g(c,d)) = g(a,d) for all 4 binary g")


def criterion_12(r: CriterionResult, **_):
    cases = [("generators: a ; relations: a =", TRIVIAL),
             ("generators: a ; relations: aa =", NONTRIVIAL),
             ("generators: a", NONTRIVIAL)]
    for text, want in cases:
        p = parse_presentation(text)
        v = t1_triviality(p)
        extra = f", countermodel {v.countermodel.op}" if v.countermodel else ""
        r.require(v.status == want and v.replay(), f"{p}: {v.status}{extra}")
        if want == NONTRIVIAL:
            r.require(v.countermodel.op == Z2.op and v.images == {"a": 1}, f"{p}: countermodel is Z2 with a -> 1")
    starved = t1_triviality(parse_presentation("generators: a ; relations: aa ="), rewrite_budget=10, model_bound=1)
    r.require(starved.status == UNDECIDED, f"starved budgets: {starved.status}")
    for m in (TRIVIAL_MONOID, Z2):
        v = t1_triviality(presentation_of_monoid(m))
        affine = is_affine(Writer(m)).yes
        r.require((v.status == TRIVIAL) == affine and v.status != UNDECIDED,
                  f"{m.name}: T1 {v.status}, writer affine {affine}")


def _corpus_algebras(rng: random.Random, samples: int = 300):
    for n in (1, 2):
        yield from enumerate_algebras(WITH_UNIT, n)
    for _ in range(samples):
        yield random_algebra(WITH_UNIT, 3, None, rng)


def criterion_13(r: CriterionResult, **_):
    rng = random.Random(13)
    eqs = [_eq(s, WITH_UNIT) for s in CORPUS]
    agree = total = 0
    for alg in _corpus_algebras(rng):
        for eq in eqs:
            V = eq.variables
            l = (evaluate(alg, eq.lhs), prepare(eq.lhs, V))
            rr = (evaluate(alg, eq.rhs), prepare(eq.rhs, V))
            composite = all(l[0](l[1](vals)) == rr[0](rr[1](vals))
                            for vals in itertools.product(range(alg.size), repeat=len(V)))
            agree += composite == satisfies(alg, eq)[0]
            total += 1
    r.require(agree == total, f"evaluate . prepare agrees with satisfaction on {agree}/{total} (algebra, equation) pairs")

    linear_terms = [parse_term(s, BINARY) for s in ("x", "m(x,y)", "m(y,x)", "m(m(x,y),z)", "m(z,m(x,y))")]
    for sel, T in builtin_instances().items():
        if not T.enumerable:
            continue
        bad = []
        for t in linear_terms:
            for V in itertools.permutations(vars_of(t)):
                for n in (1, 2, 3):
                    ok, _ = residual_commutes(T, t, list(V), n)
                    if not ok:
                        bad.append((str(t), V, n))
        r.require(not bad, f"{sel}: residual squares commute for linear terms" + (f", failing {bad[:3]}" if bad else ""))
    for sel, T in builtin_instances().items():
        results = [alphacom_check(T, _eq(src, sig)) for src, sig in ONE_DROP]
        r.require(all(x.ok for x in results), f"{sel}: alpha square commutes on {len(results)} one-drop equations")


CRITERIA = {
    1: ("monoidal-monad laws for every built-in", criterion_1, 120),
    2: ("affine/relevant table", criterion_2, None),
    3: ("distribution counterexample 1/4 != 0", criterion_3, None),
    4: ("affine monads preserve strict-drop equations", criterion_4, 300),
    5: ("non-affine monads violate x.0 = 0", criterion_5, None),
    6: ("idempotence preserved iff relevant", criterion_6, None),
    7: ("duplication family violated by powerset", criterion_7, None),
    8: ("writer(Z2): 3-relevant, not relevant", criterion_8, None),
    9: ("multiset(F2) preserves x(yy) = yx", criterion_9, 600),
    10: ("2-discerning verdicts", criterion_10, None),
    11: ("algebraic relevance", criterion_11, None),
    12: ("monoid presentations and T1 triviality", criterion_12, None),
    13: ("factorisation, residual and alpha diagrams", criterion_13, None),
}


def run_criterion(number: int, **options) -> CriterionResult:
    title, fn, limit = CRITERIA[number]
    result = CriterionResult(number, title, limit=limit)
    start = time.perf_counter()
    try:
        fn(result, **options)
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        result.require(False, f"raised {type(exc).__name__}: {exc}")
    result.seconds = time.perf_counter() - start
    if limit is not None:
        result.require(result.seconds < limit, f"ran in {result.seconds:.1f}s")
    return result


def run_all(numbers=None, progress: Optional[Callable] = None, **options) -> list:
    out = []
    for n in numbers or sorted(CRITERIA):
        res = run_criterion(n, **options)
        if progress:
            progress(res)
        out.append(res)
    return out
