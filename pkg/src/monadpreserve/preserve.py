"""Does a monoidal monad preserve an equation?

The checker walks algebras satisfying the equation (smallest carriers first,
lexicographic tables), lifts each through the monad and compares both sides
on T-objects. Enumerable monads are checked on every assignment; sampleable
ones on seeded random assignments, which can refute but never certify.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import FinAlgebra, LiftedAlgebra, compile_term, enumerate_algebras, prepare, random_algebra, satisfies
from .core import DEFAULT_BUDGET, BudgetExceeded, StructureError
from .monads import Monad, psi_n
from .terms import Equation, Signature, args_of, classify, signature_of

PRESERVED = "PreservedUpToBound"
VIOLATED = "Violated"
UNKNOWN = "Unknown"

DEFAULT_SAMPLES = 100


@dataclass
class Witness:
    carrier: int
    algebra: FinAlgebra
    assignment: tuple
    lhs: object
    rhs: object
    index: tuple = ()

    def to_json(self, T: Monad, V) -> dict:
        return {
            "carrier": self.carrier,
            "algebra": self.algebra.to_json(),
            "assignment": {v: T.to_literal(a) for v, a in zip(V, self.assignment)},
            "lhs": T.to_literal(self.lhs),
            "rhs": T.to_literal(self.rhs),
        }


@dataclass
class CheckReport:
    verdict: str
    monad: str
    equation: str
    bounds: dict
    seed: int
    witness: Optional[Witness] = None
    stats: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    variables: list = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    def replay(self, T: Monad, eq: Equation) -> bool:
        """True when the recorded witness still evaluates to unequal sides."""
        if self.witness is None:
            return False
        equal, _, _ = verify_witness(T, eq, self.witness.algebra, self.witness.assignment)
        return not equal

    def to_json(self, T: Optional[Monad] = None) -> dict:
        doc = {
            "verdict": self.verdict,
            "monad": self.monad,
            "equation": self.equation,
            "bounds": dict(self.bounds),
            "witness": None,
            "stats": dict(self.stats),
            "seed": self.seed,
        }
        if self.witness is not None and T is not None:
            doc["witness"] = self.witness.to_json(T, self.variables)
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def verify_witness(T: Monad, eq: Equation, alg: FinAlgebra, assignment) -> tuple:
    """Evaluate both sides of ``eq`` in the lifted algebra.

    ``assignment`` is a sequence ordered like ``eq.variables`` or a dict.
    Returns ``(equal, lhs, rhs)``.
    """
    V = eq.variables
    if isinstance(assignment, dict):
        missing = [v for v in V if v not in assignment]
        if missing:
            raise StructureError(f"assignment lacks {missing}")
        assignment = [assignment[v] for v in V]
    if len(assignment) != len(V):
        raise StructureError(f"{len(V)} variables {V} but {len(assignment)} values")
    ok, counter = satisfies(alg, eq)
    if not ok:
        raise StructureError(f"algebra does not satisfy {eq} (fails at {counter})")
    lifted = LiftedAlgebra(alg, T)
    vals = tuple(assignment)
    lhs = compile_term(eq.lhs, V, lifted.apply)(vals)
    rhs = compile_term(eq.rhs, V, lifted.apply)(vals)
    return lhs == rhs, lhs, rhs


# -- the scan ------------------------------------------------------------------------


@dataclass(frozen=True)
class _Job:
    """Everything a worker needs to scan one algebra."""

    T: Monad
    eq: Equation
    exhaustive: bool
    samples: int
    seed: int
    max_support: Optional[int]
    seed_assignments: tuple


def _assignments(job: _Job, n: int, k: int):
    T, V = job.T, job.eq.variables
    yield from job.seed_assignments
    if job.exhaustive:
        yield from itertools.product(list(T.elements(range(n))), repeat=len(V))
        return
    rng = random.Random(f"{job.seed}:{n}:{k}")
    probes = T.probes(range(n))
    emitted = 0
    if probes and len(probes) ** len(V) <= job.samples // 2:
        for vals in itertools.product(probes, repeat=len(V)):
            emitted += 1
            yield vals
    for _ in range(job.samples - emitted):
        yield tuple(T.sample(range(n), rng, job.max_support) for _ in V)


def _scan_one(job: _Job, n: int, k: int, alg: FinAlgebra, limit: Optional[int]):
    """Check one algebra; returns ``(assignments checked, witness or None, hit limit)``."""
    V = job.eq.variables
    lifted = LiftedAlgebra(alg, job.T)
    lhs = compile_term(job.eq.lhs, V, lifted.apply)
    rhs = compile_term(job.eq.rhs, V, lifted.apply)
    checked = 0
    for vals in _assignments(job, n, k):
        if limit is not None and checked >= limit:
            return checked, None, True
        checked += 1
        a, b = lhs(vals), rhs(vals)
        if a != b:
            return checked, Witness(n, alg, tuple(vals), a, b, (n, k)), False
    return checked, None, False


def _scan_chunk(args):
    job, items = args
    out = []
    for n, k, alg in items:
        checked, wit, _ = _scan_one(job, n, k, alg, None)
        out.append((checked, wit))
        if wit is not None:
            break
    return out


def _algebra_stream(sig, eq, sizes, algebras, random_algebras, algebra_budget, node_budget, rng, report):
    if algebras is not None:
        for k, alg in enumerate(algebras):
            ok, _ = satisfies(alg, eq)
            if not ok:
                report.stats["skipped"] += 1
                continue
            yield alg.size, k, alg
        return
    for n in sizes:
        if random_algebras:
            for k in range(random_algebras):
                alg = random_algebra(sig, n, [eq], rng, node_budget)
                if alg is None:
                    break
                yield n, k, alg
        else:
            for k, alg in enumerate(enumerate_algebras(sig, n, [eq], budget=algebra_budget,
                                                       node_budget=node_budget)):
                yield n, k, alg


def check_preservation(T: Monad, eq: Equation, sig: Optional[Signature] = None, max_carrier: int = 3,
                       budget: Optional[int] = 10**6, *, min_carrier: int = 1,
                       algebras: Optional[Sequence[FinAlgebra]] = None,
                       random_algebras: Optional[int] = None, samples: Optional[int] = None,
                       seed: int = 0, max_support: Optional[int] = 3,
                       seed_assignments: Sequence = (), jobs: int = 1,
                       algebra_budget: Optional[int] = DEFAULT_BUDGET,
                       node_budget: Optional[int] = None) -> CheckReport:
    """Search for an algebra ``A |= eq`` whose lifting violates ``eq``.

    ``budget`` caps the total number of assignments examined; when it runs
    out the verdict is Unknown. Assignments are exhaustive for enumerable
    monads unless ``samples`` is given. ``algebras`` replaces the algebra
    search by an explicit list (those not satisfying ``eq`` are skipped);
    ``random_algebras`` draws that many random models per carrier size.
    ``seed_assignments`` are tried first on every algebra.
    """
    sig = sig or signature_of(eq)
    V = eq.variables
    exhaustive = T.enumerable and samples is None
    if samples is None:
        samples = DEFAULT_SAMPLES
    sizes = list(range(min_carrier, max_carrier + 1))
    report = CheckReport(UNKNOWN, T.name, str(eq),
                         {"min_carrier": min_carrier, "max_carrier": max_carrier, "budget": budget,
                          "assignments": "exhaustive" if exhaustive else f"{samples} sampled",
                          "algebras": ("explicit" if algebras is not None else
                                       f"{random_algebras} random" if random_algebras else "exhaustive")},
                         seed, stats={"algebras": 0, "assignments": 0, "skipped": 0}, variables=V)
    job = _Job(T, eq, exhaustive, samples, seed, max_support, tuple(tuple(a) for a in seed_assignments))
    rng = random.Random(seed)
    stream = _algebra_stream(sig, eq, sizes, algebras, random_algebras, algebra_budget, node_budget, rng, report)
    try:
        if jobs > 1:
            result = _run_parallel(job, stream, budget, report, jobs)
        else:
            result = _run_serial(job, stream, budget, report)
    except BudgetExceeded as exc:
        report.notes.append(str(exc))
        report.budget_exhausted = True
        return report
    if result == "violated":
        report.verdict = VIOLATED
    elif result == "budget":
        report.budget_exhausted = True
        report.notes.append(f"assignment budget {budget} exhausted")
    else:
        certifying = exhaustive and algebras is None and not random_algebras
        if certifying:
            report.verdict = PRESERVED
        elif not T.enumerable:
            report.notes.append("sampling cannot certify preservation")
    return report


def _account(report, budget, checked_full, wit):
    """Fold one algebra's result into the report, mimicking a budgeted serial scan."""
    report.stats["algebras"] += 1
    used = report.stats["assignments"]
    if budget is not None and used + checked_full > budget:
        report.stats["assignments"] = budget
        return "budget"
    report.stats["assignments"] = used + checked_full
    if wit is not None:
        report.witness = wit
        return "violated"
    return None


def _run_serial(job, stream, budget, report):
    for n, k, alg in stream:
        limit = None if budget is None else budget - report.stats["assignments"]
        checked, wit, hit = _scan_one(job, n, k, alg, limit)
        report.stats["algebras"] += 1
        report.stats["assignments"] += checked
        if wit is not None:
            report.witness = wit
            return "violated"
        if hit:
            return "budget"
    return None


def _run_parallel(job, stream, budget, report, jobs, chunk=64):
    """Scan chunks of algebras in worker processes, merging in stream order.

    Workers scan whole chunks without a budget; the merge replays the serial
    budget rule algebra by algebra, so the result matches a serial run.
    """
    items = list(stream)
    chunks = [items[i:i + chunk] for i in range(0, len(items), chunk)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_scan_chunk, [(job, c) for c in chunks]):
            for checked, wit in part:
                outcome = _account(report, budget, checked, wit)
                if outcome:
                    return outcome
    return None


# -- diagrams --------------------------------------------------------------------------


def _objects(T: Monad, n: int, count: int, rng: random.Random, samples: int):
    if T.enumerable:
        objs = list(T.elements(range(n)))
        return itertools.product(objs, repeat=count)
    probes = T.probes(range(n))
    fixed = list(itertools.product(probes, repeat=count)) if probes else []
    rand = [tuple(T.sample(range(n), rng, 3) for _ in range(count)) for _ in range(samples)]
    return itertools.chain(fixed, rand)


def residual_commutes(T: Monad, t, V: Sequence[str], carrier_size: int, samples: int = 200,
                      seed: int = 0) -> tuple:
    """Check ``psi^k . prepare(t) = T(prepare(t)) . psi^|V|`` on T-objects.

    ``k`` is the number of variable occurrences of ``t``. Returns
    ``(True, None)`` or ``(False, witness tuple)``.
    """
    prep = prepare(t, V)
    rng = random.Random(seed)
    for objs in _objects(T, carrier_size, len(V), rng, samples):
        top = psi_n(T, list(prep(objs)))
        bottom = T.fmap(prep, psi_n(T, list(objs)))
        if top != bottom:
            return False, tuple(objs)
    return True, None


@dataclass
class AlphaResult:
    ok: bool
    dropped: str
    side: str
    checked: int
    witness: Optional[object] = None
    other_side_commutes: Optional[bool] = None


def alphacom_check(T: Monad, eq: Equation) -> AlphaResult:
    """The square through ``alpha = id x eta_1^n`` from ``T1 x 1^n``.

    For a one-drop equation, with the dropped variable ``x`` put first, both
    ways round from ``B = T1 x 1^n`` to ``T(1^k)`` must agree for the side
    ``t2`` containing ``x``; this holds in every monoidal monad. Whether the
    same square commutes for the other side is also recorded: it does exactly
    when ``T1`` is trivial.
    """
    from collections import Counter

    if not classify(eq).one_drop:
        raise StructureError(f"{eq} is not one-drop")
    c1, c2 = Counter(args_of(eq.lhs)), Counter(args_of(eq.rhs))
    x, side = None, None
    for v in eq.variables:
        if c1[v] == 1 and c2[v] == 0:
            x, side = v, "lhs"
            break
        if c2[v] == 1 and c1[v] == 0:
            x, side = v, "rhs"
            break
    t2, t1 = (eq.lhs, eq.rhs) if side == "lhs" else (eq.rhs, eq.lhs)
    V = [x] + [v for v in eq.variables if v != x]
    point = T.unit(0)

    def square(t):
        prep = prepare(t, V)
        for b in T.elements([0]):
            objs = [b] + [point] * (len(V) - 1)
            top = psi_n(T, list(prep(objs)))
            bottom = T.fmap(prep, psi_n(T, objs))
            if top != bottom:
                return False, b
        return True, None

    ok, wit = square(t2)
    other, _ = square(t1)
    return AlphaResult(ok, x, side, len(list(T.elements([0]))), wit, other)
