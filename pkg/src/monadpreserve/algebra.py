"""Finite Sigma-algebras and their liftings through a monoidal monad."""

from __future__ import annotations

import itertools
import json
import random
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence

from .core import DEFAULT_BUDGET, BudgetExceeded, StructureError, row_major_index, row_major_tuple
from .monads import Monad, psi_n
from .terms import Equation, Signature, Term, Var, args_of


class FinAlgebra:
    """A Sigma-algebra on ``{0..size-1}`` given by row-major operation tables."""

    def __init__(self, sig: Signature, size: int, tables: dict):
        self.sig = sig
        self.size = size
        self.tables = {}
        for op, ar in sig.items():
            if op not in tables:
                raise StructureError(f"missing table for {op}")
            table = tuple(tables[op])
            if len(table) != size**ar:
                raise StructureError(f"{op}/{ar} on {size} elements needs {size**ar} entries, got {len(table)}")
            if any(not 0 <= v < size for v in table):
                raise StructureError(f"{op} table has entries outside the carrier")
            self.tables[op] = table
        extra = set(tables) - set(sig)
        if extra:
            raise StructureError(f"tables for undeclared symbols {sorted(extra)}")

    def __eq__(self, other):
        return (isinstance(other, FinAlgebra) and self.sig == other.sig
                and self.size == other.size and self.tables == other.tables)

    def __hash__(self):
        return hash((self.size, tuple(self.tables.items())))

    def __repr__(self):
        return f"FinAlgebra(size={self.size}, {self.tables})"

    def apply(self, op: str, args: Sequence[int]) -> int:
        return self.tables[op][row_major_index(args, self.size)]

    def elements(self):
        return range(self.size)

    def interpret(self, t: Term, env: dict) -> int:
        return interpret(self, t, env)

    def satisfies(self, eq: Equation):
        return satisfies(self, eq)

    def to_json(self) -> dict:
        return {"carrier": self.size,
                "ops": {op: list(tab) for op, tab in self.tables.items()},
                "arities": {op: ar for op, ar in self.sig.items()}}

    @classmethod
    def from_json(cls, doc, sig: Optional[Signature] = None) -> "FinAlgebra":
        if isinstance(doc, (str, Path)):
            doc = json.loads(Path(doc).read_text())
        n = doc["carrier"]
        if sig is None:
            ops = []
            for op, table in doc["ops"].items():
                if "arities" in doc and op in doc["arities"]:
                    ar = doc["arities"][op]
                else:
                    ar = _infer_arity(len(table), n, op)
                ops.append((op, ar))
            sig = Signature(ops)
        return cls(sig, n, doc["ops"])


def _infer_arity(length: int, n: int, op: str) -> int:
    if n == 1:
        raise StructureError(f"arity of {op} is ambiguous on a 1-element carrier; give 'arities'")
    if n == 0:
        raise StructureError("cannot infer arities on an empty carrier")
    ar, size = 0, 1
    while size < length:
        size *= n
        ar += 1
    if size != length:
        raise StructureError(f"table length {length} of {op} is not a power of {n}")
    return ar


def interpret(alg, t: Term, env: dict):
    """Evaluate ``t`` in ``alg`` under ``env`` (any object with ``apply``)."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise KeyError(f"unbound variable {t.name}") from None
    return alg.apply(t.op, tuple(interpret(alg, a, env) for a in t.args))


def satisfies(alg, eq: Equation, assignments=None):
    """Check ``alg |= eq`` over every assignment (or the given ones).

    Returns ``(True, None)`` or ``(False, failing assignment)``.
    """
    V = eq.variables
    if assignments is None:
        assignments = itertools.product(list(alg.elements()), repeat=len(V))
    lhs = compile_term(eq.lhs, V, alg.apply)
    rhs = compile_term(eq.rhs, V, alg.apply)
    for vals in assignments:
        if lhs(vals) != rhs(vals):
            return False, dict(zip(V, vals))
    return True, None


def compile_term(t: Term, V: Sequence[str], apply: Callable) -> Callable:
    """A function from value tuples (ordered by ``V``) to the value of ``t``."""
    pos = {v: i for i, v in enumerate(V)}

    def build(s):
        if isinstance(s, Var):
            try:
                i = pos[s.name]
            except KeyError:
                raise KeyError(f"variable {s.name} not in {list(V)}") from None
            return lambda vals: vals[i]
        subs = [build(a) for a in s.args]
        op = s.op
        return lambda vals: apply(op, tuple(f(vals) for f in subs))

    return build(t)


def prepare_indices(t: Term, V: Sequence[str]) -> tuple:
    """0-based positions ``i_1..i_k`` with ``prepare(t) = <pi_i1, ..., pi_ik>``."""
    pos = {v: i for i, v in enumerate(V)}
    missing = [v for v in args_of(t) if v not in pos]
    if missing:
        raise KeyError(f"variables {missing} not in {list(V)}")
    return tuple(pos[v] for v in args_of(t))


def prepare(t: Term, V: Sequence[str]) -> Callable:
    """Rearrange a ``|V|``-tuple to the argument layout of ``t``."""
    idx = prepare_indices(t, V)
    return lambda vals: tuple(vals[i] for i in idx)


def evaluate(alg, t: Term) -> Callable:
    """A map ``carrier^|Arg(t)| -> carrier`` consuming arguments left to right."""

    def build(s):
        if isinstance(s, Var):
            return 1, lambda vals: vals[0]
        parts = [build(a) for a in s.args]
        widths = [w for w, _ in parts]
        fns = [f for _, f in parts]
        op = s.op

        def run(vals):
            out, k = [], 0
            for w, f in zip(widths, fns):
                out.append(f(vals[k:k + w]))
                k += w
            return alg.apply(op, tuple(out))

        return sum(widths), run

    width, fn = build(t)

    def checked(vals):
        if len(vals) != width:
            raise StructureError(f"evaluate expects {width} arguments, got {len(vals)}")
        return fn(tuple(vals))

    return checked


# -- lifting --------------------------------------------------------------------


class LiftedAlgebra:
    """``T^A``: operations ``T(sigma) . psi^ar`` on ``TA``.

    Enumerable monads memoise operation results; up to ``tabulate_budget``
    total entries the tables can also be filled eagerly with :meth:`tabulate`.
    """

    def __init__(self, base: FinAlgebra, monad: Monad, memo: bool = True):
        self.base = base
        self.monad = monad
        self.sig = base.sig
        self._memo = {} if (memo and monad.enumerable) else None

    def apply(self, op: str, args: Sequence):
        key = None
        if self._memo is not None:
            key = (op, tuple(args))
            hit = self._memo.get(key)
            if hit is not None:
                return hit
        table, n = self.base.tables[op], self.base.size
        out = self.monad.fmap(lambda tup: table[row_major_index(tup, n)], psi_n(self.monad, list(args)))
        if key is not None:
            self._memo[key] = out
        return out

    def elements(self):
        return self.monad.elements(range(self.base.size))

    def tabulate(self, budget: int = DEFAULT_BUDGET) -> bool:
        """Fill every operation table eagerly; False if over budget."""
        n = self.monad.count(self.base.size)
        if n is None or self._memo is None:
            return False
        total = sum(n**ar for _, ar in self.sig.items())
        if total > budget:
            return False
        elems = list(self.elements())
        for op, ar in self.sig.items():
            for args in itertools.product(elems, repeat=ar):
                self.apply(op, args)
        return True

    def interpret(self, t: Term, env: dict):
        return interpret(self, t, env)


def lift(T: Monad, alg: FinAlgebra) -> LiftedAlgebra:
    return LiftedAlgebra(alg, T)


# -- enumeration -----------------------------------------------------------------


def count_algebras(sig: Signature, size: int) -> int:
    return size ** sum(size**ar for _, ar in sig.items())


def _compile_partial(t: Term, V, opidx):
    if isinstance(t, Var):
        return ("v", V.index(t.name))
    return (opidx[t.op], tuple(_compile_partial(a, V, opidx) for a in t.args))


def _peval(node, vals, tables, n):
    tag, rest = node
    if tag == "v":
        return vals[rest]
    i = 0
    for child in rest:
        v = _peval(child, vals, tables, n)
        if v < 0:
            return -1
        i = i * n + v
    return tables[tag][i]


def enumerate_algebras(sig: Signature, size: int, equations: Optional[Sequence[Equation]] = None,
                       budget: Optional[int] = DEFAULT_BUDGET, node_budget: Optional[int] = None,
                       rng: Optional[random.Random] = None) -> Iterator[FinAlgebra]:
    """Every algebra on ``size`` elements, optionally only those satisfying ``equations``.

    Output is lexicographic over the concatenated tables (first symbol most
    significant). With equations the search backtracks, pruning partial tables
    on which some instance already fails. ``budget`` caps the raw table count
    before starting; ``node_budget`` caps search nodes. With ``rng`` the values
    are tried in shuffled order (used for random model sampling).
    """
    count = count_algebras(sig, size)
    if budget is not None and count > budget:
        raise BudgetExceeded(count, budget, "algebra enumeration")
    ops = list(sig.items())
    if not equations:
        if rng is None:
            return _enumerate_plain(sig, size, ops)
        equations = []
    return _backtrack(sig, size, ops, list(equations), node_budget, rng)


def _enumerate_plain(sig, size, ops):
    spaces = [itertools.product(range(size), repeat=size**ar) for _, ar in ops]
    for combo in itertools.product(*[list(s) for s in spaces]) if ops else [()]:
        yield FinAlgebra(sig, size, {op: tab for (op, _), tab in zip(ops, combo)})


def _backtrack(sig, size, ops, equations, node_budget, rng):
    opidx = {op: i for i, (op, _) in enumerate(ops)}
    tables = [[-1] * (size**ar) for _, ar in ops]
    cells = [(i, c) for i, (_, ar) in enumerate(ops) for c in range(size**ar)]
    constraints = []
    for eq in equations:
        V = eq.variables
        l = _compile_partial(eq.lhs, V, opidx)
        r = _compile_partial(eq.rhs, V, opidx)
        for vals in itertools.product(range(size), repeat=len(V)):
            constraints.append((l, r, vals))
    nodes = [0]

    def prune(pending):
        keep = []
        for c in pending:
            a = _peval(c[0], c[2], tables, size)
            if a < 0:
                keep.append(c)
                continue
            b = _peval(c[1], c[2], tables, size)
            if b < 0:
                keep.append(c)
            elif a != b:
                return None
        return keep

    def go(k, pending):
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise BudgetExceeded(nodes[0], node_budget, "algebra search")
        if k == len(cells):
            yield FinAlgebra(sig, size, {op: tuple(t) for (op, _), t in zip(ops, tables)})
            return
        i, c = cells[k]
        values = list(range(size))
        if rng is not None:
            rng.shuffle(values)
        for v in values:
            tables[i][c] = v
            rest = prune(pending)
            if rest is not None:
                yield from go(k + 1, rest)
        tables[i][c] = -1

    start = prune(constraints)
    if start is None:
        return
    yield from go(0, start)


def random_algebra(sig: Signature, size: int, equations: Optional[Sequence[Equation]],
                   rng: random.Random, node_budget: Optional[int] = 10**6) -> Optional[FinAlgebra]:
    """One model found by randomised backtracking, or None if there is none."""
    it = enumerate_algebras(sig, size, equations or [], budget=None, node_budget=node_budget, rng=rng)
    return next(it, None)


# -- projection algebras -----------------------------------------------------------


def projection_algebra(width: int, wires: Sequence[int], base_size: int = 2, op: str = "m") -> FinAlgebra:
    """A binary operation on ``X^width`` that copies coordinates.

    Output coordinate ``j`` is input coordinate ``wires[j]`` of the pair
    ``(a, b)`` read as one ``2*width`` tuple: 1..width index ``a``,
    width+1..2*width index ``b``.
    """
    if len(wires) != width:
        raise StructureError(f"need {width} wires, got {len(wires)}")
    for w in wires:
        if not 1 <= w <= 2 * width:
            raise StructureError(f"wire {w} outside 1..{2 * width}")
    n = base_size**width
    table = []
    for ai in range(n):
        a = row_major_tuple(ai, base_size, width)
        for bi in range(n):
            ab = a + row_major_tuple(bi, base_size, width)
            table.append(row_major_index(tuple(ab[w - 1] for w in wires), base_size))
    return FinAlgebra(Signature([(op, 2)]), n, {op: table})


def derived_algebra(alg: FinAlgebra, sig: Signature, definitions: dict) -> FinAlgebra:
    """Extend ``alg`` to ``sig``, defining new symbols by terms in ``x1..xk``."""
    tables = {}
    for op, ar in sig.items():
        if op in definitions:
            names = [f"x{i + 1}" for i in range(ar)]
            f = compile_term(definitions[op], names, alg.apply)
            tables[op] = tuple(f(args) for args in itertools.product(range(alg.size), repeat=ar))
        else:
            tables[op] = alg.tables[op]
    return FinAlgebra(sig, alg.size, tables)


def tuple_element(index: int, base_size: int, width: int) -> tuple:
    return row_major_tuple(index, base_size, width)


def element_of_tuple(tup: Sequence[int], base_size: int) -> int:
    return row_major_index(tup, base_size)
