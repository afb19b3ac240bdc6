"""Relational solving over types with metavariables.

Equations are solved eagerly by first-order unification.  Subtype and meet
constraints are delayed until their arguments are ground; whatever is still
pending at the end is decided by enumerating the remaining metavariables over
a finite universe.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from ..kernel import Atom, Con, Polarity, TEntry, Type, is_top, meet, sort_of, subtype
from .universe import TypeUniverse, enumerate_types


@dataclass(frozen=True)
class Meta:
    id: int
    sort: tuple[str, Polarity]

    def __repr__(self) -> str:
        return f"?{self.id}"


Subst = dict  # meta id -> term


class Unsatisfiable(Exception):
    pass


class SearchBudgetExceeded(Exception):
    """Raised when a bounded search gives up; the answer is then unknown."""


def term_sort(t) -> tuple[str, Polarity]:
    return t.sort if isinstance(t, Meta) else sort_of(t)


def walk(t, s: Subst):
    while isinstance(t, Meta) and t.id in s:
        t = s[t.id]
    return t


def resolve(t, s: Subst):
    t = walk(t, s)
    if isinstance(t, Con) and t.args:
        return Con(t.op, tuple(resolve(a, s) for a in t.args))
    return t


def metas_of(t, s: Subst, out: list | None = None) -> list[Meta]:
    out = [] if out is None else out
    t = walk(t, s)
    if isinstance(t, Meta):
        if t not in out:
            out.append(t)
    elif isinstance(t, Con):
        for a in t.args:
            metas_of(a, s, out)
    return out


def is_ground(t, s: Subst) -> bool:
    return not metas_of(t, s)


def _occurs(m: Meta, t, s: Subst) -> bool:
    t = walk(t, s)
    if isinstance(t, Meta):
        return t == m
    return isinstance(t, Con) and any(_occurs(m, a, s) for a in t.args)


def unify(a, b, s: Subst) -> bool:
    """Extend ``s`` in place so that ``a`` and ``b`` coincide; False if impossible."""
    a, b = walk(a, s), walk(b, s)
    if a == b:
        return True
    if isinstance(b, Meta) and not isinstance(a, Meta):
        a, b = b, a
    if isinstance(a, Meta):
        if a.sort != term_sort(b) or _occurs(a, b, s):
            return False
        s[a.id] = b
        return True
    if isinstance(a, Atom) or isinstance(b, Atom):
        return False
    if a.op != b.op or len(a.args) != len(b.args):
        return False
    return all(unify(x, y, s) for x, y in zip(a.args, b.args))


# delayed goals: ("sub", a, b) and ("meet", a, b, c)


def _step(goal, s: Subst):
    """True if discharged, False if refuted, None if still waiting for information."""
    if goal[0] == "sub":
        a, b = resolve(goal[1], s), resolve(goal[2], s)
        if a == b or is_top(b):
            return True
        if is_ground(a, s) and is_ground(b, s):
            return subtype(a, b)
        return None
    a, b, c = resolve(goal[1], s), resolve(goal[2], s), goal[3]
    if is_top(a):
        return unify(c, b, s)
    if is_top(b) or a == b:
        return unify(c, a, s)
    if is_ground(a, s) and is_ground(b, s):
        m = meet(a, b)
        return m is not None and unify(c, m, s)
    return None


def solve(s: Subst, goals: Sequence, universe: TypeUniverse, budget: list[int] | None = None) -> Iterator[Subst]:
    """All extensions of ``s`` satisfying ``goals``, enumerating stuck metas over ``universe``.

    ``budget`` (a one-element list, shared across the recursion) caps the
    number of enumeration branches; exhausting it raises SearchBudgetExceeded.
    """
    if budget is not None:
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchBudgetExceeded
    pending = list(goals)
    changed = True
    while changed and pending:
        changed = False
        rest = []
        for g in pending:
            r = _step(g, s)
            if r is False:
                return
            if r is True:
                changed = True
            else:
                rest.append(g)
        pending = rest
    if not pending:
        yield s
        return
    goal = pending[0]
    if goal[0] == "sub":
        # the reflexive witness first; the enumeration below still covers every other choice
        a, b = walk(goal[1], s), walk(goal[2], s)
        for m, other in ((a, b), (b, a)):
            if isinstance(m, Meta):
                s2 = dict(s)
                if unify(m, other, s2):
                    yield from solve(s2, pending[1:], universe, budget)
                break
    meta = (metas_of(goal[1], s) or metas_of(goal[2], s))[0]
    for ty in enumerate_types(universe, meta.sort[1], with_top=True):
        s2 = dict(s)
        if unify(meta, ty, s2):
            yield from solve(s2, pending, universe, budget)


class JudgementSet:
    """Every derivable judgement for one query, kept symbolic until asked.

    A judgement is a pair ``(type, context)``: the type is ``None`` for
    queries that do not synthesise one, and the context is the synthesised
    typed context (``None`` when the calculus has none).  Metavariables left
    free by the rules range over the universe.
    """

    def __init__(self, subst: Subst | None, goals, ty, ctx, universe: TypeUniverse, annotations=(),
                 inputs=None):
        self.subst = subst  # None: the rules already failed
        self.inputs = inputs  # (typed context, type) the rules were run with
        self.goals = tuple(goals)
        self.ty = ty
        self.ctx = ctx
        self.universe = universe
        self.annotations = tuple(annotations)  # (meta, written type, node kind)

    def _solutions(self, s: Subst | None = None, budget: int | None = None) -> Iterator[Subst]:
        if self.subst is None:
            return iter(())
        return solve(dict(self.subst if s is None else s), self.goals, self.universe,
                     None if budget is None else [budget])

    def is_empty(self) -> bool:
        return next(self._solutions(), None) is None

    def __bool__(self) -> bool:
        return not self.is_empty()

    def contains(self, ty: Type | None, ctx: Sequence[TEntry] | None) -> bool:
        if self.subst is None:
            return False
        s = dict(self.subst)
        if (ty is None) != (self.ty is None):
            return False
        if ty is not None and not unify(self.ty, ty, s):
            return False
        if ctx is not None and self.ctx is not None:
            if [(e.name, e.pol) for e in ctx] != [(n, p) for n, p, _ in self.ctx]:
                return False
            if not all(unify(t, e.ty, s) for (_, _, t), e in zip(self.ctx, ctx)):
                return False
        return next(self._solutions(s), None) is not None

    def __contains__(self, judgement) -> bool:
        return self.contains(*judgement)

    def respecting_annotations(self) -> "JudgementSet":
        """The subset whose annotation choices equal the written annotations."""
        if self.subst is None:
            return self
        s = dict(self.subst)
        ok = all(unify(m, written, s) for m, written, _ in self.annotations)
        return JudgementSet(s if ok else None, self.goals, self.ty, self.ctx, self.universe, self.annotations,
                            self.inputs)

    def _ground(self, s: Subst):
        ty = None if self.ty is None else resolve(self.ty, s)
        ctx = None if self.ctx is None else tuple(TEntry(n, p, resolve(t, s)) for n, p, t in self.ctx)
        return ty, ctx

    def pattern_metas(self, s: Subst) -> list[Meta]:
        out: list[Meta] = []
        if self.ty is not None:
            metas_of(self.ty, s, out)
        for _, _, t in self.ctx or ():
            metas_of(t, s, out)
        for m, _, _ in self.annotations:
            metas_of(m, s, out)
        return out

    def solutions(self, budget: int | None = None) -> Iterator[Subst]:
        return self._solutions(budget=budget)

    def members(self, with_top: bool = False) -> Iterator[tuple]:
        """Ground judgements, free metavariables expanded over the universe."""
        seen = set()
        for s in self._solutions():
            free = self.pattern_metas(s)
            pools = [enumerate_types(self.universe, m.sort[1], with_top=with_top) for m in free]
            for choice in product(*pools):
                s2 = dict(s)
                for m, t in zip(free, choice):
                    s2[m.id] = t
                j = self._ground(s2)
                if j not in seen:
                    seen.add(j)
                    yield j

    def annotation_values(self, s: Subst) -> list:
        return [resolve(m, s) for m, _, _ in self.annotations]


def instantiate(t, s: Subst, pick) -> Type:
    """Ground ``t`` by choosing a type (via ``pick(sort)``) for each free metavariable."""
    for m in metas_of(t, s):
        if m.id not in s:
            s[m.id] = pick(m.sort)
    return resolve(t, s)
