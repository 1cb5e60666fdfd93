"""Bounded equational reasoning: breadth-first search for derivations.

A derivation is a chain of terms in which each step replaces one subterm
by the other side of an axiom instance (either orientation). Terms deeper
than the depth bound are never visited, so the search is finite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .terms import App, Equation, Term, Var, depth, substitute, vars_of


def match(pattern: Term, term: Term, subst: Optional[dict] = None) -> Optional[dict]:
    subst = {} if subst is None else subst
    if isinstance(pattern, Var):
        bound = subst.get(pattern.name)
        if bound is None:
            subst[pattern.name] = term
            return subst
        return subst if bound == term else None
    if not isinstance(term, App) or term.op != pattern.op or len(term.args) != len(pattern.args):
        return None
    for p, t in zip(pattern.args, term.args):
        if match(p, t, subst) is None:
            return None
    return subst


def positions(t: Term, path=()) -> Iterator[tuple]:
    yield path, t
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            yield from positions(a, path + (i,))


def subterm_at(t: Term, path) -> Term:
    for i in path:
        t = t.args[i]
    return t


def replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    i = path[0]
    args = list(t.args)
    args[i] = replace_at(args[i], path[1:], new)
    return App(t.op, tuple(args))


@dataclass(frozen=True)
class Step:
    before: Term
    after: Term
    path: tuple
    axiom: int
    forward: bool
    subst: tuple

    def describe(self, axioms) -> str:
        ax = axioms[self.axiom]
        arrow = f"{ax.lhs} -> {ax.rhs}" if self.forward else f"{ax.rhs} -> {ax.lhs}"
        return f"{self.before} = {self.after}    [{arrow} at {list(self.path)}]"


@dataclass
class Derivation:
    axioms: list
    start: Term
    goal: Term
    steps: list = field(default_factory=list)

    def chain(self) -> list:
        return [self.start] + [s.after for s in self.steps]

    def replay(self) -> bool:
        """Re-check every step against its axiom instance."""
        cur = self.start
        for s in self.steps:
            if s.before != cur:
                return False
            ax = self.axioms[s.axiom]
            src, dst = (ax.lhs, ax.rhs) if s.forward else (ax.rhs, ax.lhs)
            sub = dict(s.subst)
            if subterm_at(cur, s.path) != substitute(src, sub):
                return False
            cur = replace_at(cur, s.path, substitute(dst, sub))
            if cur != s.after:
                return False
        return cur == self.goal

    def lines(self) -> list:
        return [s.describe(self.axioms) for s in self.steps]


def _rewrites(t: Term, axioms: Sequence[Equation], fill: Sequence[Term]):
    for path, sub in positions(t):
        for k, ax in enumerate(axioms):
            for forward in (True, False):
                src, dst = (ax.lhs, ax.rhs) if forward else (ax.rhs, ax.lhs)
                s = match(src, sub)
                if s is None:
                    continue
                extra = [v for v in vars_of(dst) if v not in s]
                instances = [s]
                for v in extra:
                    instances = [dict(i, **{v: f}) for i in instances for f in fill]
                for inst in instances:
                    new = substitute(dst, inst)
                    if new != sub:
                        yield replace_at(t, path, new), path, k, forward, tuple(sorted(
                            ((n, x) for n, x in inst.items()), key=lambda kv: kv[0]))


def search(axioms: Sequence[Equation], start: Term, goal: Term, max_depth: int,
           node_budget: int = 200_000) -> tuple:
    """Breadth-first search from ``start`` to ``goal``.

    Returns ``(derivation or None, exhausted)``; ``exhausted`` is True when
    every term within the depth bound was visited without reaching the goal.
    """
    if start == goal:
        return Derivation(list(axioms), start, goal), False
    fill = [Var(v) for v in dict.fromkeys(vars_of(start) + vars_of(goal))]
    parent = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for new, path, k, fwd, sub in _rewrites(t, axioms, fill):
            if new in parent or depth(new) > max_depth:
                continue
            parent[new] = Step(t, new, path, k, fwd, sub)
            if new == goal:
                steps = []
                cur = new
                while parent[cur] is not None:
                    steps.append(parent[cur])
                    cur = parent[cur].before
                return Derivation(list(axioms), start, goal, steps[::-1]), False
            if len(parent) > node_budget:
                return None, False
            queue.append(new)
    return None, True


def derive(axioms: Sequence[Equation], lhs: Term, rhs: Term, max_depth: int = 4,
           node_budget: int = 200_000) -> Optional[Derivation]:
    """Find a derivation of ``lhs = rhs``, first by congruence, then by search.

    When both sides share a head symbol, each differing argument pair is
    derived separately (inside its context); otherwise, or if that fails,
    the whole equation is searched directly.
    """
    axioms = list(axioms)
    if lhs == rhs:
        return Derivation(axioms, lhs, rhs)
    if (isinstance(lhs, App) and isinstance(rhs, App) and lhs.op == rhs.op
            and len(lhs.args) == len(rhs.args) and max_depth > 0):
        steps = []
        cur = lhs
        ok = True
        for i, (a, b) in enumerate(zip(lhs.args, rhs.args)):
            if a == b:
                continue
            sub = derive(axioms, a, b, max_depth - 1, node_budget)
            if sub is None:
                ok = False
                break
            for s in sub.steps:
                before = cur
                cur = replace_at(cur, (i,), s.after)
                steps.append(Step(before, cur, (i,) + s.path, s.axiom, s.forward, s.subst))
        if ok:
            return Derivation(axioms, lhs, rhs, steps)
    found, _ = search(axioms, lhs, rhs, max_depth, node_budget)
    return found
