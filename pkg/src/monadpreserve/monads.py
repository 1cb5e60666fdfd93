"""Computable monoidal monads on finite sets.

Elements of ``TX`` are plain hashable Python values in a canonical form, so
``==`` is semantic equality:

=================  ===============================================
powerset(+)        ``frozenset`` of elements
multiset(S)        :class:`Weights` of non-zero semiring indices
dist               :class:`Weights` of positive ``Fraction`` s summing to 1
maybe              :class:`Just` or :data:`NOTHING`
writer(M)          ``(monoid index, element)``
reader(k)          ``k``-tuple of elements
=================  ===============================================

Elements of products are tuples; the terminal set is ``{()}``. All maps
act on arbitrary hashable elements, which makes ``TTX`` and ``T(X x Y)``
available without re-encoding.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence

from .core import (
    STOCK_MONOIDS,
    STOCK_SEMIRINGS,
    FinFun,
    FinSet,
    MonoidTable,
    SemiringTable,
    StructureError,
    validate_monoid,
    validate_semiring,
)

DEFAULT_DENOMINATOR_BOUND = 16


class CapabilityError(RuntimeError):
    """The monad cannot perform the request (e.g. enumerate an infinite carrier)."""


def _sort_key(v):
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, tuple):
        return (1, len(v), tuple(_sort_key(x) for x in v))
    return (2, 0, repr(v))


class Weights(Mapping):
    """An immutable finite map with value-based equality and hashing."""

    __slots__ = ("_d", "_hash")

    def __init__(self, items: Iterable = ()):
        self._d = dict(items)
        self._hash = None

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Weights):
            return self._d == other._d
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v}" for k, v in sorted(self._d.items(), key=lambda kv: _sort_key(kv[0])))
        return "{" + body + "}"


@dataclass(frozen=True)
class Just:
    value: Any

    def __repr__(self):
        return f"Just({self.value!r})"


class _Nothing:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Nothing"

    def __reduce__(self):
        return (_Nothing, ())


NOTHING = _Nothing()


def _sample_support(xs, rng, min_size, max_support):
    n = len(xs)
    hi = n if max_support is None else min(n, max_support)
    lo = min(min_size, hi)
    k = rng.randint(lo, hi)
    return rng.sample(list(xs), k)


class Monad:
    """Base class: a commutative (monoidal) monad on finite sets."""

    name = "monad"
    enumerable = True

    # structure maps ---------------------------------------------------------
    def unit(self, x):
        raise NotImplementedError

    def fmap(self, f: Callable, t):
        raise NotImplementedError

    def mult(self, tt):
        raise NotImplementedError

    def psi(self, u, v):
        raise NotImplementedError

    def support(self, t) -> set:
        """Elements of X that ``t`` refers to."""
        raise NotImplementedError

    # carriers -----------------------------------------------------------------
    def elements(self, xs: Sequence) -> Iterator:
        raise NotImplementedError

    def count(self, n: int) -> Optional[int]:
        """``|TX|`` for ``|X| = n``; None when infinite."""
        raise NotImplementedError

    def sample(self, xs: Sequence, rng: random.Random, max_support: Optional[int] = None):
        raise NotImplementedError

    def probes(self, xs: Sequence) -> list:
        """A few hand-picked elements tried before random ones (sampleable tier)."""
        return []

    # analytic facts -------------------------------------------------------------
    def relevance_certificate(self) -> Optional[str]:
        return None

    def n_relevance_certificate(self, n: int) -> Optional[str]:
        cert = self.relevance_certificate()
        if cert is not None:
            return f"relevant implies {n}-relevant ({cert})"
        return None

    # literals -----------------------------------------------------------------
    def to_literal(self, t):
        return literal(t)

    def from_literal(self, lit):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class Powerset(Monad):
    def __init__(self, nonempty: bool = False):
        self.nonempty = nonempty
        self.name = "powerset+" if nonempty else "powerset"

    def unit(self, x):
        return frozenset((x,))

    def fmap(self, f, t):
        return frozenset(f(x) for x in t)

    def mult(self, tt):
        return frozenset().union(*tt)

    def psi(self, u, v):
        return frozenset(itertools.product(u, v))

    def support(self, t):
        return set(t)

    def elements(self, xs):
        xs = list(xs)
        start = 1 if self.nonempty else 0
        for k in range(start, len(xs) + 1):
            for c in itertools.combinations(xs, k):
                yield frozenset(c)

    def count(self, n):
        return 2**n - (1 if self.nonempty else 0)

    def sample(self, xs, rng, max_support=None):
        return frozenset(_sample_support(xs, rng, 1 if self.nonempty else 0, max_support))

    def from_literal(self, lit):
        t = frozenset(_element_from_literal(x) for x in lit)
        if self.nonempty and not t:
            raise StructureError("empty set is not an element of powerset+")
        return t


class Multiset(Monad):
    """Generalised multiset monad over a finite commutative semiring."""

    def __init__(self, semiring: SemiringTable, check: bool = True):
        if check:
            bad = validate_semiring(semiring)
            if bad is not None:
                raise StructureError(f"not a semiring: {bad}")
            if any(semiring.times(a, b) != semiring.times(b, a)
                   for a in range(semiring.size) for b in range(semiring.size)):
                raise StructureError("multiset monad needs a commutative semiring to be monoidal")
        self.semiring = semiring
        self.name = f"multiset:{semiring.name}"

    def _make(self, pairs):
        s = self.semiring
        acc = {}
        for x, w in pairs:
            acc[x] = s.plus(acc[x], w) if x in acc else w
        return Weights((x, w) for x, w in acc.items() if w != s.zero)

    def unit(self, x):
        s = self.semiring
        return Weights({x: s.one}) if s.one != s.zero else Weights()

    def fmap(self, f, t):
        return self._make((f(x), w) for x, w in t.items())

    def mult(self, tt):
        s = self.semiring
        return self._make((x, s.times(v, w)) for inner, v in tt.items() for x, w in inner.items())

    def psi(self, u, v):
        s = self.semiring
        return self._make(((x, y), s.times(a, b)) for x, a in u.items() for y, b in v.items())

    def support(self, t):
        return set(t)

    def elements(self, xs):
        xs = list(xs)
        s = self.semiring
        for coeffs in itertools.product(range(s.size), repeat=len(xs)):
            yield Weights((x, c) for x, c in zip(xs, coeffs) if c != s.zero)

    def count(self, n):
        return self.semiring.size**n

    def sample(self, xs, rng, max_support=None):
        s = self.semiring
        nonzero = [c for c in range(s.size) if c != s.zero]
        if not nonzero:
            return Weights()
        chosen = _sample_support(xs, rng, 0, max_support)
        return Weights((x, rng.choice(nonzero)) for x in chosen)

    def relevance_certificate(self):
        if self.semiring.size == 1:
            return "trivial semiring: every M_S X is a single point"
        return None

    def to_literal(self, t):
        return [[literal(x), w] for x, w in sorted(t.items(), key=lambda kv: _sort_key(kv[0]))]

    def from_literal(self, lit):
        return self._make((_element_from_literal(x), int(w)) for x, w in lit)


class Distribution(Monad):
    """Finitely supported probability distributions with exact weights."""

    name = "dist"
    enumerable = False

    def __init__(self, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND):
        self.denominator_bound = denominator_bound

    @staticmethod
    def _make(pairs):
        acc = {}
        for x, w in pairs:
            acc[x] = acc.get(x, 0) + w
        return Weights((x, Fraction(w)) for x, w in acc.items() if w != 0)

    def unit(self, x):
        return Weights({x: Fraction(1)})

    def fmap(self, f, t):
        return self._make((f(x), w) for x, w in t.items())

    def mult(self, tt):
        return self._make((x, v * w) for inner, v in tt.items() for x, w in inner.items())

    def psi(self, u, v):
        return self._make(((x, y), a * b) for x, a in u.items() for y, b in v.items())

    def support(self, t):
        return set(t)

    def elements(self, xs):
        xs = list(xs)
        if len(xs) > 1:
            raise CapabilityError("dist over a set with more than one element is infinite; sample instead")
        return iter([self.unit(x) for x in xs])

    def count(self, n):
        return n if n <= 1 else None

    def sample(self, xs, rng, max_support=None):
        chosen = _sample_support(xs, rng, 1, max_support)
        nums = [rng.randint(1, self.denominator_bound) for _ in chosen]
        total = sum(nums)
        return Weights((x, Fraction(k, total)) for x, k in zip(chosen, nums))

    def uniform(self, xs):
        xs = list(xs)
        return Weights((x, Fraction(1, len(xs))) for x in xs)

    def probes(self, xs):
        xs = list(xs)
        out = [self.unit(x) for x in xs]
        out += [self.uniform(p) for p in itertools.combinations(xs, 2)]
        return out

    def to_literal(self, t):
        return [[literal(x), str(w)] for x, w in sorted(t.items(), key=lambda kv: _sort_key(kv[0]))]

    def from_literal(self, lit):
        t = self._make((_element_from_literal(x), Fraction(w)) for x, w in lit)
        if sum(t.values()) != 1 or any(w < 0 for w in t.values()):
            raise StructureError("distribution weights must be non-negative and sum to 1")
        return t


class Maybe(Monad):
    name = "maybe"

    def unit(self, x):
        return Just(x)

    def fmap(self, f, t):
        return NOTHING if t is NOTHING else Just(f(t.value))

    def mult(self, tt):
        return NOTHING if tt is NOTHING else tt.value

    def psi(self, u, v):
        if u is NOTHING or v is NOTHING:
            return NOTHING
        return Just((u.value, v.value))

    def support(self, t):
        return set() if t is NOTHING else {t.value}

    def elements(self, xs):
        yield NOTHING
        for x in xs:
            yield Just(x)

    def count(self, n):
        return n + 1

    def sample(self, xs, rng, max_support=None):
        i = rng.randrange(len(xs) + 1)
        return NOTHING if i == len(xs) else Just(xs[i])

    def relevance_certificate(self):
        return "X+1: psi(u,u) and T(diag)(u) are both Nothing when u is Nothing, else Just((x,x))"

    def from_literal(self, lit):
        return NOTHING if lit is None else Just(_element_from_literal(lit["just"]))


class Writer(Monad):
    """``M x X`` for a finite commutative monoid ``M``."""

    def __init__(self, monoid: MonoidTable, check: bool = True):
        if check:
            bad = validate_monoid(monoid)
            if bad is not None:
                raise StructureError(f"not a monoid: {bad}")
            if any(monoid.mul(a, b) != monoid.mul(b, a)
                   for a in range(monoid.size) for b in range(monoid.size)):
                raise StructureError("writer monad needs a commutative monoid to be monoidal")
        self.monoid = monoid
        self.name = f"writer:{monoid.name}"

    def unit(self, x):
        return (self.monoid.unit, x)

    def fmap(self, f, t):
        return (t[0], f(t[1]))

    def mult(self, tt):
        v, (w, x) = tt
        return (self.monoid.mul(v, w), x)

    def psi(self, u, v):
        return (self.monoid.mul(u[0], v[0]), (u[1], v[1]))

    def support(self, t):
        return {t[1]}

    def elements(self, xs):
        for m in range(self.monoid.size):
            for x in xs:
                yield (m, x)

    def count(self, n):
        return self.monoid.size * n

    def sample(self, xs, rng, max_support=None):
        return (rng.randrange(self.monoid.size), rng.choice(list(xs)))

    def _powers_fixed(self, n):
        m = self.monoid
        return all(m.power(w, n) == w for w in range(m.size))

    def relevance_certificate(self):
        if self._powers_fixed(2):
            return f"{self.monoid.name} is idempotent: psi((v,x),(v,x)) = (vv,(x,x)) = (v,(x,x))"
        return None

    def n_relevance_certificate(self, n):
        if self._powers_fixed(n):
            return f"w^{n} = w for every w in {self.monoid.name}: psi^{n} o diag^{n} (v,x) = (v^{n}, x..x) = (v, x..x)"
        return None

    def from_literal(self, lit):
        m, x = lit
        return (int(m), _element_from_literal(x))


class Reader(Monad):
    """``X^A`` for ``A = {0..k-1}``; elements are ``k``-tuples."""

    def __init__(self, k: int):
        if k < 0:
            raise StructureError("reader exponent must be non-negative")
        self.k = k
        self.name = f"reader:{k}"

    def unit(self, x):
        return (x,) * self.k

    def fmap(self, f, t):
        return tuple(f(x) for x in t)

    def mult(self, tt):
        return tuple(tt[a][a] for a in range(self.k))

    def psi(self, u, v):
        return tuple(zip(u, v))

    def support(self, t):
        return set(t)

    def elements(self, xs):
        return itertools.product(list(xs), repeat=self.k)

    def count(self, n):
        return n**self.k

    def sample(self, xs, rng, max_support=None):
        xs = list(xs)
        return tuple(rng.choice(xs) for _ in range(self.k))

    def relevance_certificate(self):
        return "X^A: psi(f,f)(a) = (f(a),f(a)) = (T diag)(f)(a) pointwise"

    def from_literal(self, lit):
        t = tuple(_element_from_literal(x) for x in lit)
        if len(t) != self.k:
            raise StructureError(f"reader:{self.k} literal must have {self.k} entries")
        return t


# -- literals -----------------------------------------------------------------


def literal(v):
    """A JSON-friendly rendering of an element or T-object."""
    if v is NOTHING:
        return None
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return [literal(x) for x in v]
    if isinstance(v, frozenset):
        return [literal(x) for x in sorted(v, key=_sort_key)]
    if isinstance(v, Weights):
        return [[literal(k), literal(w)] for k, w in sorted(v.items(), key=lambda kv: _sort_key(kv[0]))]
    if isinstance(v, Just):
        return {"just": literal(v.value)}
    return repr(v)


def _element_from_literal(lit):
    if isinstance(lit, list):
        return tuple(_element_from_literal(x) for x in lit)
    return int(lit)


# -- derived structure maps ---------------------------------------------------------


def carrier(T: Monad, X) -> Iterator:
    """Every element of ``TX`` exactly once (Enumerable monads only)."""
    xs = range(X.size) if isinstance(X, FinSet) else X
    if not T.enumerable and len(xs) > 1:
        raise CapabilityError(f"{T.name} has an infinite carrier; use sample()")
    return T.elements(xs)


def fmap(T: Monad, f: FinFun, t):
    """Functorial action of a :class:`FinFun`, checking ``t`` lives over its domain."""
    for x in T.support(t):
        if not (isinstance(x, int) and 0 <= x < f.domain.size):
            raise StructureError(f"{t!r} is not over a set of size {f.domain.size}")
    return T.fmap(f.table.__getitem__, t)


def unit_map(T: Monad, X: FinSet) -> tuple:
    return tuple(T.unit(x) for x in range(X.size))


def psi0(T: Monad):
    return T.unit(())


def _flatten_left(n):
    def flat(p):
        out = []
        for _ in range(n - 1):
            p, last = p
            out.append(last)
        out.append(p)
        return tuple(reversed(out))
    return flat


def psi_n(T: Monad, objs: Sequence):
    """n-ary monoidal map onto the flat product ``X1 x ... x Xn``.

    Left-nests the binary map, then re-indexes nested pairs to flat tuples.
    ``n = 0`` gives ``eta(())``; ``n = 1`` tags elements as 1-tuples.
    """
    n = len(objs)
    if n == 0:
        return psi0(T)
    if n == 1:
        return T.fmap(lambda x: (x,), objs[0])
    nested = objs[0]
    for o in objs[1:]:
        nested = T.psi(nested, o)
    return T.fmap(_flatten_left(n), nested)


def psi_n_right(T: Monad, objs: Sequence):
    """Right-nested variant of :func:`psi_n`; equal to it by associativity."""
    n = len(objs)
    if n <= 1:
        return psi_n(T, objs)
    nested = objs[-1]
    for o in reversed(objs[:-1]):
        nested = T.psi(o, nested)

    def flat(p):
        out = []
        for _ in range(n - 1):
            head, p = p
            out.append(head)
        out.append(p)
        return tuple(out)

    return T.fmap(flat, nested)


def chi(T: Monad, t):
    return (T.fmap(lambda p: p[0], t), T.fmap(lambda p: p[1], t))


def chi_n(T: Monad, t, n: int) -> tuple:
    return tuple(T.fmap(lambda p, i=i: p[i], t) for i in range(n))


def delta(x):
    return (x, x)


def delta_n(x, n: int) -> tuple:
    return (x,) * n


# -- selectors -----------------------------------------------------------------------


def builtin_instances() -> dict:
    """The instances of the affine/relevant table, keyed by selector string."""
    from .core import F2, TRIVIAL_MONOID, TRIVIAL_SEMIRING, Z2

    return {
        "powerset": Powerset(),
        "powerset+": Powerset(nonempty=True),
        "dist": Distribution(),
        "maybe": Maybe(),
        "reader:2": Reader(2),
        "writer:trivial": Writer(TRIVIAL_MONOID),
        "writer:z2": Writer(Z2),
        "multiset:f2": Multiset(F2),
        "multiset:trivial": Multiset(TRIVIAL_SEMIRING),
    }


def _table(arg: str, stock: dict, cls):
    """A JSON file if it exists, else a stock table named by the file stem."""
    path = Path(arg)
    if path.exists():
        return cls.from_json(path)
    if path.stem in stock:
        return stock[path.stem]
    raise ValueError(f"no file {arg!r} and no stock table {path.stem!r} (have {sorted(stock)})")


def parse_selector(sel: str) -> Monad:
    """Build a monad from ``powerset | powerset+ | maybe | dist | reader:<k> |
    writer:<monoid.json> | multiset:<semiring.json>``.

    Writer and multiset also accept the stock table names (``z2``, ``trivial``,
    ``semilattice2``; ``f2``, ``bool``, ``trivial``).
    """
    head, _, arg = sel.partition(":")
    if head == "powerset" and not arg:
        return Powerset()
    if head == "powerset+" and not arg:
        return Powerset(nonempty=True)
    if head == "maybe" and not arg:
        return Maybe()
    if head == "dist" and not arg:
        return Distribution()
    if head == "reader":
        try:
            return Reader(int(arg))
        except ValueError:
            raise ValueError(f"reader needs an integer exponent, got {arg!r}") from None
    if head == "writer" and arg:
        return Writer(_table(arg, STOCK_MONOIDS, MonoidTable))
    if head == "multiset" and arg:
        return Multiset(_table(arg, STOCK_SEMIRINGS, SemiringTable))
    raise ValueError(f"unknown monad selector {sel!r}")
