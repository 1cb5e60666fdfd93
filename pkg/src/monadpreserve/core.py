"""Finite sets, finite functions, products and validated operation tables.

Everything above this module computes over elements ``0..n-1`` of a
:class:`FinSet`; products are indexed row-major with the leftmost factor
most significant.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Iterator, Optional, Sequence

DEFAULT_BUDGET = 10**7


class StructureError(ValueError):
    """Raised when maps or tables do not fit together."""


class BudgetExceeded(RuntimeError):
    """A search was refused because its size exceeds the budget."""

    def __init__(self, count: int, budget: int, what: str = "search"):
        super().__init__(f"{what} of size {count} exceeds budget {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise StructureError(f"negative set size {self.size}")
        if self.labels is not None and len(self.labels) != self.size:
            raise StructureError("label count does not match size")

    def __iter__(self):
        return iter(range(self.size))

    def __len__(self):
        return self.size

    def label(self, i: int) -> str:
        return str(self.labels[i]) if self.labels else str(i)


TERMINAL = FinSet(1)


@dataclass(frozen=True)
class FinFun:
    domain: FinSet
    codomain: FinSet
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.domain.size:
            raise StructureError(
                f"table has {len(self.table)} entries for a domain of size {self.domain.size}"
            )
        for v in self.table:
            if not 0 <= v < self.codomain.size:
                raise StructureError(f"table entry {v} outside codomain of size {self.codomain.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def identity(cls, x: FinSet) -> "FinFun":
        return cls(x, x, tuple(range(x.size)))


def compose(f: FinFun, g: FinFun) -> FinFun:
    """Return ``g . f`` (apply ``f`` first)."""
    if f.codomain != g.domain:
        raise StructureError(f"cannot compose: codomain {f.codomain.size} != domain {g.domain.size}")
    return FinFun(f.domain, g.codomain, tuple(g.table[v] for v in f.table))


@dataclass(frozen=True)
class Product:
    """A finite product with its tupling/untupling bijections."""

    factors: tuple
    carrier: FinSet

    def index(self, tup: Sequence[int]) -> int:
        if len(tup) != len(self.factors):
            raise StructureError("tuple length does not match number of factors")
        i = 0
        for v, f in zip(tup, self.factors):
            if not 0 <= v < f.size:
                raise StructureError(f"component {v} outside factor of size {f.size}")
            i = i * f.size + v
        return i

    def tuple(self, index: int) -> tuple:
        if not 0 <= index < self.carrier.size:
            raise StructureError(f"index {index} outside product of size {self.carrier.size}")
        out = []
        for f in reversed(self.factors):
            index, r = divmod(index, f.size)
            out.append(r)
        return tuple(reversed(out))

    def projection(self, j: int) -> FinFun:
        """The j-th projection (0-based)."""
        return FinFun(self.carrier, self.factors[j],
                      tuple(self.tuple(i)[j] for i in range(self.carrier.size)))


def product(xs: Sequence) -> Product:
    factors = tuple(x if isinstance(x, FinSet) else FinSet(x) for x in xs)
    return Product(factors, FinSet(prod(f.size for f in factors)))


def row_major_index(tup: Sequence[int], base: int) -> int:
    i = 0
    for v in tup:
        i = i * base + v
    return i


def row_major_tuple(index: int, base: int, length: int) -> tuple:
    out = [0] * length
    for k in range(length - 1, -1, -1):
        index, out[k] = divmod(index, base)
    return tuple(out)


def count_maps(dom: FinSet, cod: FinSet) -> int:
    return cod.size ** dom.size


def enumerate_maps(dom: FinSet, cod: FinSet, budget: Optional[int] = DEFAULT_BUDGET) -> Iterator[FinFun]:
    """All functions ``dom -> cod``, lexicographic over their tables.

    The count is checked against ``budget`` before the first map is produced.
    """
    count = count_maps(dom, cod)
    if budget is not None and count > budget:
        raise BudgetExceeded(count, budget, "map enumeration")

    def gen():
        for table in itertools.product(range(cod.size), repeat=dom.size):
            yield FinFun(dom, cod, table)

    return gen()


# -- operation tables ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom} fails at {self.witness}"


def _check_table(name, table, size):
    if len(table) != size * size:
        raise StructureError(f"{name} table must have {size * size} entries, got {len(table)}")
    for v in table:
        if not 0 <= v < size:
            raise StructureError(f"{name} table entry {v} outside 0..{size - 1}")


@dataclass(frozen=True)
class SemiringTable:
    size: int
    add: tuple
    mul: tuple
    zero: int
    one: int
    name: str = field(default="semiring", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add", tuple(self.add))
        object.__setattr__(self, "mul", tuple(self.mul))
        _check_table("add", self.add, self.size)
        _check_table("mul", self.mul, self.size)
        if not (0 <= self.zero < self.size and 0 <= self.one < self.size):
            raise StructureError("zero/one index outside carrier")

    def plus(self, a: int, b: int) -> int:
        return self.add[a * self.size + b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a * self.size + b]

    @classmethod
    def from_json(cls, doc, name: str = "semiring") -> "SemiringTable":
        if isinstance(doc, (str, Path)):
            name = Path(doc).stem
            doc = json.loads(Path(doc).read_text())
        return cls(doc["size"], doc["add"], doc["mul"], doc["zero"], doc["one"], name=doc.get("name", name))

    def to_json(self) -> dict:
        return {"size": self.size, "add": list(self.add), "mul": list(self.mul),
                "zero": self.zero, "one": self.one}


def validate_semiring(t: SemiringTable) -> Optional[Violation]:
    """Check every semiring axiom exhaustively; return the first violation or None."""
    r = range(t.size)
    add, mul, z, o = t.plus, t.times, t.zero, t.one
    for a, b in itertools.product(r, r):
        if add(a, b) != add(b, a):
            return Violation("add commutativity", (a, b))
    for a in r:
        if add(a, z) != a:
            return Violation("add unit", (a,))
        if mul(a, o) != a or mul(o, a) != a:
            return Violation("mul unit", (a,))
        if mul(a, z) != z or mul(z, a) != z:
            return Violation("zero annihilation", (a,))
    for a, b, c in itertools.product(r, r, r):
        if add(add(a, b), c) != add(a, add(b, c)):
            return Violation("add associativity", (a, b, c))
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            return Violation("mul associativity", (a, b, c))
        if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
            return Violation("left distributivity", (a, b, c))
        if mul(add(a, b), c) != add(mul(a, c), mul(b, c)):
            return Violation("right distributivity", (a, b, c))
    return None


@dataclass(frozen=True)
class MonoidTable:
    size: int
    op: tuple
    unit: int
    commutative: bool = False
    name: str = field(default="monoid", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "op", tuple(self.op))
        _check_table("op", self.op, self.size)
        if not 0 <= self.unit < self.size:
            raise StructureError("unit index outside carrier")

    def mul(self, a: int, b: int) -> int:
        return self.op[a * self.size + b]

    def power(self, a: int, n: int) -> int:
        out = self.unit
        for _ in range(n):
            out = self.mul(out, a)
        return out

    @classmethod
    def from_json(cls, doc, name: str = "monoid") -> "MonoidTable":
        if isinstance(doc, (str, Path)):
            name = Path(doc).stem
            doc = json.loads(Path(doc).read_text())
        op = doc["op"]
        size = doc["size"]
        commutative = doc.get("commutative")
        if commutative is None:
            commutative = all(op[a * size + b] == op[b * size + a] for a in range(size) for b in range(size))
        return cls(size, op, doc["unit"], bool(commutative), name=doc.get("name", name))

    def to_json(self) -> dict:
        return {"size": self.size, "op": list(self.op), "unit": self.unit,
                "commutative": self.commutative}


def validate_monoid(t: MonoidTable) -> Optional[Violation]:
    r = range(t.size)
    for a in r:
        if t.mul(a, t.unit) != a or t.mul(t.unit, a) != a:
            return Violation("unit", (a,))
    for a, b, c in itertools.product(r, r, r):
        if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)):
            return Violation("associativity", (a, b, c))
    if t.commutative:
        for a, b in itertools.product(r, r):
            if t.mul(a, b) != t.mul(b, a):
                return Violation("commutativity", (a, b))
    return None


# -- stock tables -------------------------------------------------------------

F2 = SemiringTable(2, (0, 1, 1, 0), (0, 0, 0, 1), 0, 1, name="f2")
BOOLEAN = SemiringTable(2, (0, 1, 1, 1), (0, 0, 0, 1), 0, 1, name="bool")
TRIVIAL_SEMIRING = SemiringTable(1, (0,), (0,), 0, 0, name="trivial")

Z2 = MonoidTable(2, (0, 1, 1, 0), 0, True, name="z2")
TRIVIAL_MONOID = MonoidTable(1, (0,), 0, True, name="trivial")
# ({0, 1}, max) with unit 0: commutative and idempotent.
SEMILATTICE2 = MonoidTable(2, (0, 1, 1, 1), 0, True, name="semilattice2")

STOCK_SEMIRINGS = {t.name: t for t in (F2, BOOLEAN, TRIVIAL_SEMIRING)}
STOCK_MONOIDS = {t.name: t for t in (Z2, TRIVIAL_MONOID, SEMILATTICE2)}
