"""Monoid presentations as unary theories, and a bounded test for ``T1 = 1``.

The theory with one unary symbol per generator and one equation per
relation presents a monad whose ``T1`` is the presented monoid, so the
monad is affine exactly when the monoid is trivial. Triviality is
undecidable in general; the search below combines word rewriting (which can
prove triviality) with a finite-monoid model search (which can refute it).
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .core import MonoidTable, validate_monoid
from .props import NO, UNKNOWN, YES, PropVerdict
from .terms import App, Equation, ParseError, Signature, Var

EPSILON = "ε"
DEFAULT_MAX_WORD = 16

TRIVIAL = "Trivial"
NONTRIVIAL = "NonTrivial"
UNDECIDED = "Unknown"


@dataclass(frozen=True)
class MonoidPresentation:
    generators: tuple
    relations: tuple = ()
    name: str = "presentation"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple((tuple(l), tuple(r)) for l, r in self.relations))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator")
        known = set(self.generators)
        for l, r in self.relations:
            bad = [g for g in l + r if g not in known]
            if bad:
                raise ValueError(f"relation uses undeclared generators {bad}")

    def __str__(self):
        rels = "; ".join(f"{_word(l)} = {_word(r)}" for l, r in self.relations)
        return f"<{', '.join(self.generators)} | {rels}>"

    def to_json(self) -> dict:
        return {"name": self.name, "generators": list(self.generators),
                "relations": [[list(l), list(r)] for l, r in self.relations]}

    @classmethod
    def from_json(cls, doc) -> "MonoidPresentation":
        if isinstance(doc, (str, Path)):
            doc = json.loads(Path(doc).read_text())
        return cls(doc["generators"], [(l, r) for l, r in doc.get("relations", [])],
                   doc.get("name", "presentation"))


def _word(w) -> str:
    return "".join(w) if w else EPSILON


def parse_word(text: str, generators: Sequence[str]) -> tuple:
    """Split ``text`` into generators, longest name first; blank or ε is the empty word."""
    text = "".join(text.split())
    if text in ("", EPSILON):
        return ()
    names = sorted(generators, key=len, reverse=True)
    out, i = [], 0
    while i < len(text):
        for g in names:
            if text.startswith(g, i):
                out.append(g)
                i += len(g)
                break
        else:
            raise ParseError(f"cannot read a generator at {text[i:]!r}", i)
    return tuple(out)


def parse_presentation(text: str, name: str = "presentation") -> MonoidPresentation:
    """Read ``generators: a,b ; relations: aa = ; ab = ba``.

    Items may be separated by ``;`` or newlines; ``#`` starts a comment.
    """
    items = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        items += [p.strip() for p in line.split(";")]
    generators, relations = None, []
    in_relations = False
    for item in items:
        if not item:
            continue
        key, sep, rest = item.partition(":")
        key = key.strip().lower()
        if sep and key in ("generators", "gens"):
            generators = [g.strip() for g in rest.split(",") if g.strip()]
            in_relations = False
            continue
        if sep and key in ("relations", "rels"):
            in_relations = True
            item = rest.strip()
            if not item:
                continue
        elif sep and key == "name":
            name = rest.strip()
            continue
        if not in_relations:
            raise ParseError(f"unexpected {item!r}; expected 'generators:' or 'relations:'")
        if generators is None:
            raise ParseError("relations given before generators")
        if item.count("=") != 1:
            raise ParseError(f"relation {item!r} needs exactly one '='")
        l, r = item.split("=")
        relations.append((parse_word(l, generators), parse_word(r, generators)))
    if generators is None:
        raise ParseError("missing 'generators:'")
    return MonoidPresentation(generators, relations, name)


def load_presentation(path) -> MonoidPresentation:
    path = Path(path)
    if path.suffix == ".json":
        return MonoidPresentation.from_json(path)
    return parse_presentation(path.read_text(), path.stem)


# -- the encoding -----------------------------------------------------------------------


def symbol(g: str) -> str:
    return f"f_{g}"


def word_term(word, var: str = "x"):
    t = Var(var)
    for g in reversed(word):
        t = App(symbol(g), (t,))
    return t


def encode_as_theory(p: MonoidPresentation) -> tuple:
    """One unary symbol ``f_g`` per generator; ``g1..gn`` becomes ``f_g1(..f_gn(x)..)``."""
    sig = Signature([(symbol(g), 1) for g in p.generators])
    eqs = [Equation(word_term(l), word_term(r)) for l, r in p.relations]
    return sig, eqs


# -- rewriting ---------------------------------------------------------------------------


def _neighbours(word: tuple, rules):
    for l, r in rules:
        k = len(l)
        if k == 0:
            for i in range(len(word) + 1):
                yield word[:i] + r + word[i:]
            continue
        for i in range(len(word) - k + 1):
            if word[i:i + k] == l:
                yield word[:i] + r + word[i + k:]


def _rules(p: MonoidPresentation):
    return [(l, r) for l, r in p.relations] + [(r, l) for l, r in p.relations]


def one_step(p: MonoidPresentation, u: tuple, v: tuple) -> bool:
    return v in set(_neighbours(u, _rules(p)))


def _bfs(p: MonoidPresentation, start: tuple, budget: int, max_length: Optional[int] = None):
    """Path of words from ``start`` to the empty word, or None within ``budget`` visits."""
    rules = _rules(p)
    parent = {start: None}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == ():
            path = []
            while w is not None:
                path.append(w)
                w = parent[w]
            return path[::-1], len(parent)
        for nxt in _neighbours(w, rules):
            if nxt in parent or (max_length is not None and len(nxt) > max_length):
                continue
            if len(parent) >= budget:
                return None, len(parent)
            parent[nxt] = w
            queue.append(nxt)
    return None, len(parent)


def replay_trace(p: MonoidPresentation, trace: dict) -> bool:
    """Every generator's chain starts at the generator, ends at ε, and moves by single relation steps."""
    for g in p.generators:
        chain = [tuple(w) for w in trace.get(g, [])]
        if not chain or chain[0] != (g,) or chain[-1] != ():
            return False
        if not all(one_step(p, u, v) for u, v in zip(chain, chain[1:])):
            return False
    return True


# -- finite monoids ----------------------------------------------------------------------


def monoids(size: int):
    """Monoid tables on ``{0..size-1}`` with identity 0, by backtracking on associativity.

    Values are tried in increasing order, so the cyclic group comes first
    among the size-2 tables.
    """
    if size == 1:
        yield MonoidTable(1, (0,), 0, True, name="trivial")
        return
    table = [[-1] * size for _ in range(size)]
    for a in range(size):
        table[0][a] = a
        table[a][0] = a
    cells = [(a, b) for a in range(1, size) for b in range(1, size)]

    def assoc_ok():
        for a in range(1, size):
            for b in range(1, size):
                ab = table[a][b]
                if ab < 0:
                    continue
                for c in range(1, size):
                    bc = table[b][c]
                    if bc < 0:
                        continue
                    l, r = table[ab][c], table[a][bc]
                    if l >= 0 and r >= 0 and l != r:
                        return False
        return True

    def go(k):
        if k == len(cells):
            flat = tuple(v for row in table for v in row)
            comm = all(table[a][b] == table[b][a] for a in range(size) for b in range(size))
            yield MonoidTable(size, flat, 0, comm, name=f"monoid{size}")
            return
        a, b = cells[k]
        for v in range(size):
            table[a][b] = v
            if assoc_ok():
                yield from go(k + 1)
        table[a][b] = -1

    yield from go(0)


def _evaluate(m: MonoidTable, word, images: dict) -> int:
    out = m.unit
    for g in word:
        out = m.mul(out, images[g])
    return out


def find_countermodel(p: MonoidPresentation, model_bound: int):
    """A finite monoid satisfying the relations in which some generator is not the unit."""
    for size in range(2, model_bound + 1):
        for m in monoids(size):
            for values in itertools.product(range(size), repeat=len(p.generators)):
                if all(v == m.unit for v in values):
                    continue
                images = dict(zip(p.generators, values))
                if all(_evaluate(m, l, images) == _evaluate(m, r, images) for l, r in p.relations):
                    return m, images
    return None


def check_countermodel(p: MonoidPresentation, m: MonoidTable, images: dict) -> bool:
    if validate_monoid(m) is not None:
        return False
    if not all(_evaluate(m, l, images) == _evaluate(m, r, images) for l, r in p.relations):
        return False
    return any(images[g] != m.unit for g in p.generators)


# -- verdicts -------------------------------------------------------------------------------


@dataclass
class TrivialityVerdict:
    status: str
    presentation: MonoidPresentation
    trace: Optional[dict] = None
    countermodel: Optional[MonoidTable] = None
    images: Optional[dict] = None
    bounds: dict = field(default_factory=dict)
    visited: int = 0

    def replay(self) -> bool:
        if self.status == TRIVIAL:
            return replay_trace(self.presentation, self.trace)
        if self.status == NONTRIVIAL:
            return check_countermodel(self.presentation, self.countermodel, self.images)
        return False

    def to_json(self) -> dict:
        doc = {"status": self.status, "presentation": self.presentation.to_json(),
               "bounds": self.bounds, "visited": self.visited}
        if self.trace is not None:
            doc["trace"] = {g: [_word(w) for w in chain] for g, chain in self.trace.items()}
        if self.countermodel is not None:
            doc["countermodel"] = self.countermodel.to_json()
            doc["images"] = self.images
        return doc


def t1_triviality(p: MonoidPresentation, rewrite_budget: int = 10**5, model_bound: int = 4,
                  max_word_length: int = DEFAULT_MAX_WORD) -> TrivialityVerdict:
    """Is the presented monoid (equivalently ``T1``) trivial?

    A short rewriting pass runs first, then the model search, then the rest
    of the rewriting budget. Rewriting never visits words longer than
    ``max_word_length``.
    """
    bounds = {"rewrite_budget": rewrite_budget, "model_bound": model_bound, "max_word_length": max_word_length}
    verdict = TrivialityVerdict(UNDECIDED, p, bounds=bounds)
    quick = max(1, min(rewrite_budget, 1000))

    def rewrite(budget):
        trace = {}
        for g in p.generators:
            path, seen = _bfs(p, (g,), budget, max_word_length)
            verdict.visited += seen
            if path is None:
                return None
            trace[g] = path
        return trace

    trace = rewrite(quick)
    if trace is None:
        found = find_countermodel(p, model_bound)
        if found:
            verdict.status = NONTRIVIAL
            verdict.countermodel, verdict.images = found
            return verdict
        if rewrite_budget > quick:
            trace = rewrite(rewrite_budget)
    if trace is not None:
        verdict.status = TRIVIAL
        verdict.trace = trace
    return verdict


UNDECIDABILITY_NOTE = ("whether a finitely presented monoid is trivial is undecidable, "
                       "so an unknown answer cannot be ruled out in general")


def affineness_of_presented(p: MonoidPresentation, rewrite_budget: int = 10**5,
                            model_bound: int = 4, max_word_length: int = DEFAULT_MAX_WORD) -> PropVerdict:
    """Affineness of the monad presented by :func:`encode_as_theory`."""
    v = t1_triviality(p, rewrite_budget, model_bound, max_word_length)
    name = f"presented{p}"
    details = {"note": UNDECIDABILITY_NOTE, "triviality": v.status}
    if v.status == TRIVIAL:
        return PropVerdict("affine", name, YES, certificate="T1 is the trivial monoid: every generator rewrites to ε",
                           details=details)
    if v.status == NONTRIVIAL:
        return PropVerdict("affine", name, NO, witness={"monoid": v.countermodel.to_json(), "images": v.images},
                           condition="T1 has a non-trivial finite quotient", details=details)
    return PropVerdict("affine", name, UNKNOWN, bound=model_bound, details=dict(details, **v.bounds))


def presentation_of_monoid(m: MonoidTable) -> MonoidPresentation:
    """The multiplication-table presentation: a generator per non-unit element."""
    names = {a: f"g{a}" for a in range(m.size) if a != m.unit}

    def word(a):
        return () if a == m.unit else (names[a],)

    rels = [((names[a], names[b]), word(m.mul(a, b))) for a in names for b in names]
    return MonoidPresentation(list(names.values()), rels, f"table({m.name})")
