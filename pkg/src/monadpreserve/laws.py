"""Executable monad and monoidal-monad laws.

Enumerable monads are checked exhaustively on small carriers (and by
sampling on a size-3 spot check); sampleable ones on seeded random
elements. All comparisons are exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .core import FinSet, enumerate_maps
from .monads import Monad, chi, psi0, psi_n, psi_n_right


@dataclass
class LawResult:
    law: str
    checked: int = 0
    failure: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.failure is None and self.checked > 0


@dataclass
class LawReport:
    monad: str
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def failures(self):
        return [r for r in self.results.values() if not r.ok]


class _Sampler:
    """Supplies test objects for one carrier, exhaustively where affordable."""

    def __init__(self, T: Monad, n: int, rng: random.Random, samples: int, exhaustive: bool,
                 pool: int = 5):
        self.T = T
        self.xs = list(range(n))
        self.rng = rng
        self.samples = samples
        self.exhaustive = exhaustive and T.enumerable
        self.pool = pool

    def level(self, depth: int) -> list:
        """Objects of ``T^depth X``."""
        T = self.T
        if self.exhaustive:
            objs = self.xs
            for _ in range(depth):
                if T.count(len(objs)) > 70_000:
                    return self._sampled(depth)
                objs = list(T.elements(objs))
            return objs
        return self._sampled(depth)

    def _sampled(self, depth):
        T, rng = self.T, self.rng
        base = self.xs
        for _ in range(depth - 1):
            base = list({T.sample(base, rng, max_support=3) for _ in range(self.pool * 4)})[: self.pool]
        return [T.sample(base, rng, max_support=3) for _ in range(self.samples)]


def _run(result: LawResult, cases: Iterable, pred: Callable):
    for case in cases:
        result.checked += 1
        if not pred(*case):
            result.failure = case
            return


def check_laws(T: Monad, sizes=(1, 2), spot_sizes=(3,), samples: int = 1000,
               spot_samples: int = 200, seed: int = 0) -> LawReport:
    """Run every law on carriers of the given sizes; returns a :class:`LawReport`."""
    report = LawReport(T.name)
    rng = random.Random(seed)
    laws = [
        "monad associativity", "monad left unit", "monad right unit",
        "MF.1", "MF.2", "MF.3", "SYM", "MM.1", "MM.2",
        "psi naturality", "chi naturality", "diagonal", "psi^n bracketing",
    ]
    for name in laws:
        report.results[name] = LawResult(name)
    R = report.results
    regimes = [(n, True, samples) for n in sizes] + [(n, False, spot_samples) for n in spot_sizes]

    for n, exhaustive, k in regimes:
        S = _Sampler(T, n, rng, k, exhaustive)
        t1, t2, t3 = S.level(1), S.level(2), S.level(3)
        eq = lambda a, b: a == b

        _run(R["monad associativity"], ((ttt,) for ttt in t3),
             lambda ttt: T.mult(T.fmap(T.mult, ttt)) == T.mult(T.mult(ttt)))
        _run(R["monad left unit"], ((t,) for t in t1), lambda t: T.mult(T.unit(t)) == t)
        _run(R["monad right unit"], ((t,) for t in t1), lambda t: T.mult(T.fmap(T.unit, t)) == t)

        one = psi0(T)
        _run(R["MF.1"], ((t,) for t in t1), lambda t: T.fmap(lambda p: p[0], T.psi(t, one)) == t)
        _run(R["MF.2"], ((t,) for t in t1), lambda t: T.fmap(lambda p: p[1], T.psi(one, t)) == t)

        triples = _pairs_or_samples(S, t1, 3)
        _run(R["MF.3"], triples,
             lambda u, v, w: T.fmap(lambda p: (p[0][0], (p[0][1], p[1])), T.psi(T.psi(u, v), w))
             == T.psi(u, T.psi(v, w)))
        _run(R["psi^n bracketing"], triples, lambda u, v, w: psi_n(T, [u, v, w]) == psi_n_right(T, [u, v, w]))

        pairs = _pairs_or_samples(S, t1, 2)
        _run(R["SYM"], pairs, lambda u, v: T.fmap(lambda p: (p[1], p[0]), T.psi(u, v)) == T.psi(v, u))
        _run(R["MM.1"], itertools.product(S.xs, S.xs),
             lambda x, y: T.psi(T.unit(x), T.unit(y)) == T.unit((x, y)))

        pairs2 = _pairs_or_samples(S, t2, 2)
        _run(R["MM.2"], pairs2,
             lambda U, V: T.mult(T.fmap(lambda p: T.psi(*p), T.psi(U, V))) == T.psi(T.mult(U), T.mult(V)))

        maps = _finfun_pairs(n, rng, exhaustive)
        _run(R["psi naturality"],
             ((f, g, u, v) for f, g in maps for u, v in _pairs_or_samples(S, t1, 2, cap=40)),
             lambda f, g, u, v: T.fmap(lambda p: (f(p[0]), g(p[1])), T.psi(u, v))
             == T.psi(T.fmap(f, u), T.fmap(g, v)))

        prod_objs = _product_objects(T, S, n)
        _run(R["chi naturality"], ((f, g, w) for f, g in maps for w in prod_objs),
             lambda f, g, w: chi(T, T.fmap(lambda p: (f(p[0]), g(p[1])), w))
             == tuple(T.fmap(h, c) for h, c in zip((f, g), chi(T, w))))
        _run(R["diagonal"], ((t,) for t in t1), lambda t: chi(T, T.fmap(lambda x: (x, x), t)) == (t, t))
    return report


def _pairs_or_samples(S: _Sampler, objs: list, arity: int, cap: Optional[int] = None):
    if S.exhaustive and (cap is None or len(objs) ** arity <= cap ** 2) and len(objs) ** arity <= 200_000:
        return list(itertools.product(objs, repeat=arity))
    k = S.samples if cap is None else min(S.samples, cap * cap)
    return [tuple(S.rng.choice(objs) for _ in range(arity)) for _ in range(k)]


def _finfun_pairs(n: int, rng: random.Random, exhaustive: bool):
    """Pairs of maps out of an n-element set into sets of size 1..3."""
    X = FinSet(n)
    out = []
    for m in (1, 2, 3):
        fs = [f.table.__getitem__ for f in enumerate_maps(X, FinSet(m))]
        if not exhaustive or len(fs) > 8:
            fs = rng.sample(fs, min(len(fs), 4))
        out.extend(itertools.product(fs, fs[:2]))
    return out


def _product_objects(T: Monad, S: _Sampler, n: int):
    pairs = [(a, b) for a in S.xs for b in S.xs]
    if S.exhaustive and T.count(len(pairs)) <= 5_000:
        return list(T.elements(pairs))
    return [T.sample(pairs, S.rng, max_support=4) for _ in range(min(S.samples, 300))]


class SabotagedPsi(Monad):
    """Wraps a monad with a deliberately wrong monoidal map (negative control)."""

    def __init__(self, base: Monad):
        self.base = base
        self.name = f"sabotaged({base.name})"
        self.enumerable = base.enumerable

    def __getattr__(self, attr):
        return getattr(self.base, attr)

    def unit(self, x):
        return self.base.unit(x)

    def fmap(self, f, t):
        return self.base.fmap(f, t)

    def mult(self, tt):
        return self.base.mult(tt)

    def support(self, t):
        return self.base.support(t)

    def elements(self, xs):
        return self.base.elements(xs)

    def count(self, n):
        return self.base.count(n)

    def sample(self, xs, rng, max_support=None):
        return self.base.sample(xs, rng, max_support)

    def psi(self, u, v):
        supp = self.base.support(v)
        if not supp:
            return self.base.psi(u, v)
        y = min(supp, key=repr)
        return self.base.fmap(lambda x: (x, y), u)
