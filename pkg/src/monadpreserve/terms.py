"""Signatures, prefix-notation terms and equations, and equation classification.

Grammar::

    term  := ident | ident "(" term ("," term)* ")"
    eq    := term "=" term

Identifiers declared in the signature are operation symbols (constants may
omit ``()``); every other identifier is a variable. Identifiers may end in
primes, so ``y'`` is a variable name.

Theory files::

    theory <name>
    ops: <sym>/<arity>, ...
    eq: <term> = <term>
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int = 0, line: int = 1, src: str = ""):
        self.msg = msg
        self.pos = pos
        self.line = line
        self.column = pos + 1
        super().__init__(f"line {line}, column {self.column}: {msg}")


class Signature:
    """Ordered mapping of operation symbols to arities."""

    def __init__(self, ops=()):
        self._ops = {}
        items = ops.items() if isinstance(ops, dict) else ops
        for name, arity in items:
            if name in self._ops:
                raise ValueError(f"duplicate operation symbol {name!r}")
            if arity < 0:
                raise ValueError(f"negative arity for {name!r}")
            self._ops[name] = arity

    def __contains__(self, name):
        return name in self._ops

    def __iter__(self):
        return iter(self._ops)

    def __len__(self):
        return len(self._ops)

    def __eq__(self, other):
        return isinstance(other, Signature) and list(self._ops.items()) == list(other._ops.items())

    def __hash__(self):
        return hash(tuple(self._ops.items()))

    def arity(self, name: str) -> int:
        return self._ops[name]

    def items(self):
        return self._ops.items()

    def __repr__(self):
        return "Signature(" + ", ".join(f"{k}/{v}" for k, v in self._ops.items()) + ")"

    @classmethod
    def parse(cls, text: str) -> "Signature":
        ops = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", part)
            if not m:
                raise ParseError(f"bad operation declaration {part!r}; expected name/arity")
            ops.append((m.group(1), int(m.group(2))))
        return cls(ops)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


Term = Var | App


def vars_of(t: Term) -> list:
    """Variables of ``t``, deduplicated in first-occurrence order."""
    return list(dict.fromkeys(v.name for v in _leaves(t)))


def args_of(t: Term) -> list:
    """Variable occurrences of ``t`` left to right, with multiplicity."""
    return [v.name for v in _leaves(t)]


def _leaves(t):
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from _leaves(a)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def substitute(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.op, tuple(substitute(a, mapping) for a in t.args))


def rename(t: Term, mapping: dict) -> Term:
    return substitute(t, {k: Var(v) for k, v in mapping.items()})


def replace_occurrence(t: Term, var: str, k: int, new: str) -> Term:
    """Rename only the ``k``-th (0-based) occurrence of ``var`` in reading order."""
    counter = [0]

    def go(s):
        if isinstance(s, Var):
            if s.name == var:
                counter[0] += 1
                if counter[0] - 1 == k:
                    return Var(new)
            return s
        return App(s.op, tuple(go(a) for a in s.args))

    return go(t)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @property
    def variables(self) -> list:
        """``Var(lhs) u Var(rhs)`` in first-occurrence order, lhs first."""
        return list(dict.fromkeys(vars_of(self.lhs) + vars_of(self.rhs)))

    def mirrored(self) -> "Equation":
        return Equation(self.rhs, self.lhs)

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


def signature_of(*terms) -> Signature:
    """The symbols used in ``terms`` (equations allowed), in first-use order."""
    seen = {}

    def walk(t):
        if isinstance(t, Equation):
            walk(t.lhs)
            walk(t.rhs)
        elif isinstance(t, App):
            if seen.setdefault(t.op, len(t.args)) != len(t.args):
                raise ParseError(f"{t.op} used with arities {seen[t.op]} and {len(t.args)}")
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return Signature(list(seen.items()))


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*'*)|(\()|(\))|(,)|(=))")


class _Parser:
    def __init__(self, src: str, sig: Signature, line: int = 1, offset: int = 0):
        self.src = src
        self.sig = sig
        self.line = line
        self.offset = offset
        self.tokens = []
        pos = 0
        while True:
            while pos < len(src) and src[pos].isspace():
                pos += 1
            if pos >= len(src):
                break
            m = _TOKEN.match(src, pos)
            if not m:
                self.error(f"unexpected character {src[pos]!r}", pos)
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.src)
        raise ParseError(msg, pos + self.offset, self.line)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input" + (f"; expected {expected!r}" if expected else ""))
        if expected is not None and tok != expected:
            self.error(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def term(self) -> Term:
        pos = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.src)
        name = self.take()
        if name in "(),=":
            self.error(f"expected a term, found {name!r}", pos)
        if name in self.sig:
            arity = self.sig.arity(name)
            args = []
            if self.peek() == "(":
                self.take("(")
                if self.peek() == ")":
                    self.take(")")
                else:
                    args.append(self.term())
                    while self.peek() == ",":
                        self.take(",")
                        args.append(self.term())
                    self.take(")")
            if len(args) != arity:
                self.error(f"{name} expects {arity} argument(s), got {len(args)}", pos)
            return App(name, tuple(args))
        if "'" not in name and self.peek() == "(":
            self.error(f"unknown operation symbol {name!r}", pos)
        if self.peek() == "(":
            self.error(f"variable {name!r} cannot take arguments", pos)
        return Var(name)

    def done(self):
        if self.i != len(self.tokens):
            self.error(f"unexpected trailing {self.peek()!r}")


def parse_term(src: str, sig: Signature) -> Term:
    p = _Parser(src, sig)
    t = p.term()
    p.done()
    return t


def parse_equation(src: str, sig: Signature, line: int = 1, offset: int = 0) -> Equation:
    p = _Parser(src, sig, line, offset)
    lhs = p.term()
    p.take("=")
    rhs = p.term()
    p.done()
    return Equation(lhs, rhs)


@dataclass
class Theory:
    name: str
    sig: Signature
    equations: list = field(default_factory=list)


def parse_theory(text: str) -> Theory:
    name = "unnamed"
    sig = None
    eqs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        key, sep, rest = stripped.partition(" ") if stripped.startswith("theory") else stripped.partition(":")
        if stripped.startswith("theory ") or stripped == "theory":
            name = stripped[len("theory"):].strip() or name
        elif sep and key.strip() == "ops":
            try:
                sig = Signature.parse(rest)
            except ParseError as e:
                raise ParseError(e.msg, indent, lineno) from None
            except ValueError as e:
                raise ParseError(str(e), indent, lineno) from None
        elif sep and key.strip() == "eq":
            if sig is None:
                raise ParseError("equation before ops declaration", indent, lineno)
            offset = indent + stripped.index(":") + 1
            eqs.append(parse_equation(rest, sig, lineno, offset))
        else:
            raise ParseError(f"unrecognised line {stripped!r}", indent, lineno)
    if sig is None:
        raise ParseError("theory has no ops declaration", 0, 1)
    return Theory(name, sig, eqs)


# -- classification -----------------------------------------------------------------


@dataclass(frozen=True)
class EquationClass:
    linear: bool
    drop: bool
    one_drop: bool
    strict_drop: bool
    dup: bool
    two_dup: bool
    strict_dup: bool

    FLAGS = ("linear", "drop", "one_drop", "strict_drop", "dup", "two_dup", "strict_dup")

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.FLAGS}

    def names(self) -> list:
        return [f.replace("_", "-") for f in self.FLAGS if getattr(self, f)]


def classify(eq: Equation) -> EquationClass:
    c1, c2 = Counter(args_of(eq.lhs)), Counter(args_of(eq.rhs))
    V = eq.variables
    linear = set(c1) == set(c2) and all(c1[v] == 1 and c2[v] == 1 for v in V)
    drop = set(c1) != set(c2)
    one_drop = any((c1[v] == 1 and c2[v] == 0) or (c2[v] == 1 and c1[v] == 0) for v in V)
    no_dups = all(c1[v] <= 1 and c2[v] <= 1 for v in V)
    strict_drop = not linear and no_dups
    dup = not no_dups
    two_dup = dup and all(c1[v] <= 2 and c2[v] <= 2 for v in V)
    strict_dup = not linear and all(c1[v] >= 1 and c2[v] >= 1 for v in V)
    return EquationClass(linear, drop, one_drop, strict_drop, dup, two_dup, strict_dup)


class NotDiscerningCandidate(ValueError):
    pass


@dataclass(frozen=True)
class Companion:
    """The linear companion ``s2 = s2'`` of a 2-dup candidate."""

    equation: Equation
    variable: str
    fresh: str
    side: str
    oriented: Equation

    @property
    def s2(self):
        return self.equation.lhs

    @property
    def s2_swapped(self):
        return self.equation.rhs


def fresh_name(base: str, taken) -> str:
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def discerning_companion(eq: Equation) -> Companion:
    """Split the duplicated variable of a 2-dup candidate into ``x`` and ``x'``.

    The side carrying the duplicate becomes ``t2`` (the equation is mirrored
    when that is the left side). ``s2`` renames its second occurrence of the
    variable; ``s2'`` swaps the two names.
    """
    cls = classify(eq)
    if not cls.two_dup:
        raise NotDiscerningCandidate("not a 2-discerning candidate: equation is not 2-dup")
    if cls.drop:
        raise NotDiscerningCandidate("not a 2-discerning candidate: equation drops a variable")
    c1, c2 = Counter(args_of(eq.lhs)), Counter(args_of(eq.rhs))
    dup_vars = [v for v in eq.variables if c1[v] > 1 or c2[v] > 1]
    if len(dup_vars) != 1:
        raise NotDiscerningCandidate(
            f"not a 2-discerning candidate: {len(dup_vars)} duplicated variables, need exactly one")
    x = dup_vars[0]
    if c1[x] > 1 and c2[x] > 1:
        raise NotDiscerningCandidate(
            f"not a 2-discerning candidate: {x} is duplicated on both sides")
    if max(c1[x], c2[x]) != 2:
        raise NotDiscerningCandidate(f"not a 2-discerning candidate: {x} must occur exactly twice")
    if c1[x] > 1:
        side, oriented = "lhs", eq.mirrored()
    else:
        side, oriented = "rhs", eq
    t2 = oriented.rhs
    xp = fresh_name(x, set(eq.variables))
    s2 = replace_occurrence(t2, x, 1, xp)
    s2_swapped = rename(s2, {x: xp, xp: x})
    return Companion(Equation(s2, s2_swapped), x, xp, side, oriented)


# -- enumeration ------------------------------------------------------------------


def enumerate_terms(sig: Signature, variables: Sequence[str], max_depth: int) -> Iterator[Term]:
    """All terms of depth at most ``max_depth`` (finite for finite signatures)."""
    levels = [[Var(v) for v in variables] + [App(op, ()) for op, a in sig.items() if a == 0]]
    seen = list(levels[0])
    for _ in range(max_depth):
        new = []
        for op, a in sig.items():
            if a == 0:
                continue
            for args in itertools.product(seen, repeat=a):
                if max(depth(x) for x in args) == len(levels) - 1:
                    new.append(App(op, tuple(args)))
        levels.append(new)
        seen = seen + new
    return iter(seen)
