"""Structural properties of monads: affineness, relevance and its variants,
and 2-discerningness of equations.

Finite checks can only refute relevance; a positive answer comes from the
analytic certificate a built-in carries, otherwise the verdict is
"unknown up to" the bound that was searched.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .algebra import FinAlgebra, enumerate_algebras, satisfies
from .core import BudgetExceeded
from .monads import Monad, chi_n, psi_n
from .rewriting import Derivation, derive
from .terms import Equation, Signature, discerning_companion, signature_of

YES = "Yes"
NO = "No"
UNKNOWN = "UnknownUpTo"


@dataclass
class PropVerdict:
    prop: str
    monad: str
    holds: str
    bound: Optional[int] = None
    witness: Optional[dict] = None
    condition: Optional[str] = None
    certificate: Optional[str] = None
    details: dict = field(default_factory=dict)

    @property
    def yes(self):
        return self.holds == YES

    @property
    def no(self):
        return self.holds == NO

    def summary(self) -> str:
        if self.holds == YES:
            return "yes" + (f" ({self.certificate})" if self.certificate else "")
        if self.holds == NO:
            return f"no ({self.condition} fails)"
        return f"unknown up to {self.bound}"

    def to_json(self) -> dict:
        doc = {"property": self.prop, "monad": self.monad, "holds": self.holds}
        for key in ("bound", "witness", "condition", "certificate"):
            val = getattr(self, key)
            if val is not None:
                doc[key] = val
        if self.details:
            doc["details"] = self.details
        return doc


# -- affineness -----------------------------------------------------------------------


def is_affine(T: Monad) -> PropVerdict:
    """``T1`` is a single point. Exact for every built-in."""
    ones = list(T.elements([0]))
    if len(ones) == 1:
        return PropVerdict("affine", T.name, YES, certificate=f"|T1| = 1: {T.to_literal(ones[0])}")
    return PropVerdict("affine", T.name, NO, witness={"T1": [T.to_literal(o) for o in ones]},
                       condition=f"|T1| = {len(ones)}")


# -- relevance ---------------------------------------------------------------------------


def _objects(T: Monad, n: int, rng: random.Random, samples: int, budget: int):
    """All of ``T{0..n-1}`` when affordable, else probes plus random samples."""
    count = T.count(n)
    if count is not None and count <= budget:
        return list(T.elements(range(n))), True
    objs = list(T.probes(range(n)))
    objs += [T.sample(range(n), rng) for _ in range(samples)]
    return objs, False


def _n_fold(T: Monad, n: int, max_size: int, samples: int, seed: int, budget: int):
    """First ``u`` with ``psi^n(u,..,u) != T(diag^n)(u)``, searching sizes 1..max_size."""
    rng = random.Random(seed)
    exhaustive = True
    for size in range(1, max_size + 1):
        objs, full = _objects(T, size, rng, samples, budget)
        exhaustive &= full
        for u in objs:
            left = psi_n(T, [u] * n)
            right = T.fmap(lambda x: (x,) * n, u)
            if left != right:
                return size, u, left, right, exhaustive
    return None, None, None, None, exhaustive


def relevance_check(T: Monad, max_size: int = 3, samples: int = 1000, seed: int = 0,
                    budget: int = 100_000) -> PropVerdict:
    """``psi . diag = T diag`` on ``TA`` for ``|A| <= max_size``."""
    size, u, left, right, exhaustive = _n_fold(T, 2, max_size, samples, seed, budget)
    if u is not None:
        return PropVerdict("relevant", T.name, NO, bound=max_size,
                           witness={"size": size, "u": T.to_literal(u), "psi(u,u)": T.to_literal(left),
                                    "T(diag)(u)": T.to_literal(right)},
                           condition="psi(u,u) = T(diag)(u)")
    cert = T.relevance_certificate()
    mode = "exhaustive" if exhaustive else f"{samples} samples"
    if cert:
        return PropVerdict("relevant", T.name, YES, bound=max_size, certificate=cert, details={"search": mode})
    return PropVerdict("relevant", T.name, UNKNOWN, bound=max_size, details={"search": mode})


def _chi_cross_check(T: Monad, n: int, size: int, samples: int, seed: int, budget: int):
    """``psi^n . chi^n = id`` on ``T(X^n)``; returns a failing element or None."""
    rng = random.Random(seed)
    tuples = list(itertools.product(range(size), repeat=n))
    count = T.count(len(tuples))
    if count is not None and count <= budget:
        objs = T.elements(tuples)
    else:
        objs = list(T.probes(tuples)) + [T.sample(tuples, rng, 4) for _ in range(samples)]
    for w in objs:
        if psi_n(T, list(chi_n(T, w, n))) != w:
            return w
    return None


def n_relevance_check(T: Monad, n: int, max_size: int = 3, samples: int = 1000, seed: int = 0,
                      budget: int = 100_000, cross_size: int = 2) -> PropVerdict:
    """``psi^n . diag^n = T diag^n``, cross-checked against ``psi^n . chi^n = id``."""
    if n < 2:
        raise ValueError("n-relevance needs n >= 2")
    prop = f"{n}-relevant"
    size, u, left, right, exhaustive = _n_fold(T, n, max_size, samples, seed, budget)
    cross = _chi_cross_check(T, n, cross_size, samples, seed, budget)
    details = {"chi form holds": cross is None}
    if cross is not None:
        details["chi witness"] = T.to_literal(cross)
    if u is not None:
        return PropVerdict(prop, T.name, NO, bound=max_size,
                           witness={"size": size, "u": T.to_literal(u), "psi^n(u..u)": T.to_literal(left),
                                    "T(diag^n)(u)": T.to_literal(right)},
                           condition=f"psi^{n} . diag^{n} = T(diag^{n})", details=details)
    if cross is not None:
        return PropVerdict(prop, T.name, NO, bound=cross_size, witness={"w": T.to_literal(cross)},
                           condition=f"psi^{n} . chi^{n} = id", details=details)
    cert = T.n_relevance_certificate(n)
    if cert:
        return PropVerdict(prop, T.name, YES, bound=max_size, certificate=cert, details=details)
    return PropVerdict(prop, T.name, UNKNOWN, bound=max_size, details=details)


def relevant_and_affine_implies_relevant_test(T: Monad, n: int, max_size: int = 3, **kw) -> bool:
    """Affine and n-relevant must not coexist with a relevance counterexample."""
    if not is_affine(T).yes:
        return True
    if n_relevance_check(T, n, max_size, **kw).no:
        return True
    return not relevance_check(T, max_size, **kw).no


# -- the algebraic characterisation ---------------------------------------------------


def generic_operation(T: Monad, omega, args):
    """``mu . T(i -> args[i])`` applied to ``omega in T{0..n-1}``."""
    return T.mult(T.fmap(lambda i: args[i], omega))


def matrix_law(T: Monad, omega, n: int) -> tuple:
    """Both sides of ``f(f(x_11..x_1n), .., f(x_n1..x_nn)) = f(x_11, .., x_nn)``.

    Variables ``x_ij`` are the pairs ``(i, j)``.
    """
    rows = [generic_operation(T, omega, [T.unit((i, j)) for j in range(n)]) for i in range(n)]
    lhs = generic_operation(T, omega, rows)
    rhs = generic_operation(T, omega, [T.unit((i, i)) for i in range(n)])
    return lhs, rhs


def algebraic_relevance_check(T: Monad, max_arity: int = 3, var_bound: int = 16, samples: int = 200,
                              seed: int = 0, budget: int = 100_000) -> PropVerdict:
    """Every operation ``omega in T(n)`` must satisfy the diagonal matrix law."""
    rng = random.Random(seed)
    checked = {}
    bound = 0
    for n in range(1, max_arity + 1):
        if n * n > var_bound:
            break
        objs, _ = _objects(T, n, rng, samples, budget)
        for omega in objs:
            lhs, rhs = matrix_law(T, omega, n)
            if lhs != rhs:
                return PropVerdict("algebraically relevant", T.name, NO, bound=n,
                                   witness={"arity": n, "omega": T.to_literal(omega),
                                            "lhs": T.to_literal(lhs), "rhs": T.to_literal(rhs)},
                                   condition="f(f(x_i1..x_in)_i) = f(x_11..x_nn)",
                                   details={"checked": checked})
        checked[n] = len(objs)
        bound = n
    cert = T.relevance_certificate()
    if cert:
        return PropVerdict("algebraically relevant", T.name, YES, bound=bound, certificate=cert,
                           details={"checked": checked})
    return PropVerdict("algebraically relevant", T.name, UNKNOWN, bound=bound, details={"checked": checked})


# -- 2-discerning equations ----------------------------------------------------------------


DISCERNING = "Discerning"
NOT_DISCERNING = "NotDiscerning"
UNDECIDED = "Unknown"


@dataclass
class DiscerningVerdict:
    status: str
    equation: Equation
    companion: object
    countermodel: Optional[FinAlgebra] = None
    counter_assignment: Optional[dict] = None
    derivation: Optional[Derivation] = None
    bounds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"status": self.status, "equation": str(self.equation),
               "companion": str(self.companion.equation), "bounds": self.bounds}
        if self.countermodel is not None:
            doc["countermodel"] = self.countermodel.to_json()
            doc["counter_assignment"] = self.counter_assignment
        if self.derivation is not None:
            doc["derivation"] = self.derivation.lines()
        return doc


def _countermodel(eq: Equation, goal: Equation, sig: Signature, size: int, node_budget: Optional[int]):
    for alg in enumerate_algebras(sig, size, [eq], budget=None, node_budget=node_budget):
        ok, counter = satisfies(alg, goal)
        if not ok:
            return alg, counter
    return None


def two_discerning_check(eq: Equation, model_bound: int = 4, derivation_depth: int = 4,
                         sig: Optional[Signature] = None, node_budget: int = 2_000_000,
                         derivation_budget: int = 200_000) -> DiscerningVerdict:
    """Is the companion ``s2 = s2'`` of ``eq`` underivable from ``eq``?

    Small models (up to size 3) are searched first, then derivations, then
    the remaining model sizes. A countermodel proves the equation is
    discerning; a derivation proves it is not.
    """
    comp = discerning_companion(eq)
    sig = sig or signature_of(eq)
    goal = comp.equation
    bounds = {"model_bound": model_bound, "derivation_depth": derivation_depth}
    sizes = list(range(1, model_bound + 1))

    def models(ns):
        for n in ns:
            try:
                found = _countermodel(eq, goal, sig, n, node_budget)
            except BudgetExceeded:
                bounds.setdefault("model_search_cut", n)
                return None
            if found:
                return found
        return None

    found = models([n for n in sizes if n <= 3])
    if found is None:
        deriv = derive([eq], goal.lhs, goal.rhs, derivation_depth, derivation_budget)
        if deriv is not None:
            return DiscerningVerdict(NOT_DISCERNING, eq, comp, derivation=deriv, bounds=bounds)
        found = models([n for n in sizes if n > 3])
    if found:
        alg, counter = found
        return DiscerningVerdict(DISCERNING, eq, comp, alg, counter, bounds=bounds)
    return DiscerningVerdict(UNDECIDED, eq, comp, bounds=bounds)
