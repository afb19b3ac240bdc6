"""Deterministic generation of well-scoped queries.

Terms are grown top-down by judgement class, so every generated term is
mode-correct by construction; scope elaboration under the requested preset
then filters out the ones that misuse variables.  Half of the queries get
their types from the oracle (solved with the inputs left open, then
instantiated at random), the other half get random types, so the corpus
contains both well-typed and ill-typed queries.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Iterable

from ..errors import ScopeError
from ..kernel import NEG, PLAIN, POS, Atom, Polarity, StructConfig, Type, contains_top
from ..scope import (
    CLASS_POLARITY, CLASS_VAR_SIDE, COEXPR, COMMAND, COPATTERN, EXPR, LAMBDA_STANDARD,
    NEGATIVE_FRAGMENT, PATTERN, POSITIVE_FRAGMENT, elaborate,
)
from ..surface import CtxEntry, Query, Term, show_directive
from .rules import derive_all
from .solver import SearchBudgetExceeded, instantiate
from .universe import TypeUniverse, enumerate_types, universe_for

X_ROOTS = ("k", "j")
SIGMA_ROOTS = ("a", "b")
BINDERS = ("x", "y", "z", "w")

# constructor: (minimum size, child classes, binder side or None, binder polarity, bound names)
_L_GRAMMAR: dict[str, dict[str, tuple]] = {
    EXPR: {
        "unit": (1, ()), "tuple": (3, (EXPR, EXPR)), "inl": (2, (EXPR,)), "inr": (2, (EXPR,)),
        "sim": (2, (COEXPR,)), "down": (2, (COPATTERN,)),
        "mu+": (4, (COMMAND,), "x", POS, 1), "match-Down": (4, (COMMAND,), "sigma", NEG, 1),
    },
    PATTERN: {
        "match-zero": (1, ()), "Down": (2, (COEXPR,)),
        "mut+": (4, (COMMAND,), "sigma", POS, 1), "match-unit": (4, (COMMAND,), None, None, 0),
        "match-pair": (4, (COMMAND,), "sigma", POS, 2), "match-sum": (7, (COMMAND, COMMAND), "sigma", POS, 1),
        "match-sim": (4, (COMMAND,), "sigma", NEG, 1), "match-down": (4, (COMMAND,), "x", NEG, 1),
    },
    COPATTERN: {
        "comatch-one": (1, ()), "Up": (2, (EXPR,)),
        "mu-": (4, (COMMAND,), "sigma", NEG, 1), "comatch-bot": (4, (COMMAND,), None, None, 0),
        "comatch-par": (4, (COMMAND,), "sigma", NEG, 2), "comatch-with": (7, (COMMAND, COMMAND), "sigma", NEG, 1),
        "comatch-not": (4, (COMMAND,), "sigma", POS, 1), "comatch-up": (4, (COMMAND,), "x", POS, 1),
    },
    COEXPR: {
        "counit": (1, ()), "cotuple": (3, (COEXPR, COEXPR)), "pi1": (2, (COEXPR,)), "pi2": (2, (COEXPR,)),
        "not": (2, (EXPR,)), "up": (2, (PATTERN,)),
        "mut-": (4, (COMMAND,), "x", NEG, 1), "comatch-Up": (4, (COMMAND,), "sigma", POS, 1),
    },
}
_LNL_ONLY = frozenset({"Up", "Down", "comatch-Up", "match-Down"})
_ANNOTATED = {"match-down": NEG, "comatch-up": POS, "Up": POS, "Down": NEG}

# lambda constructors: (minimum size, child modes, number of bound names)
_STD_GRAMMAR = {
    "chk": {"lam": (2, ("chk",), 1), "pair": (3, ("chk", "chk"), 0), "unit": (1, (), 0),
            "inl": (2, ("chk",), 0), "inr": (2, ("chk",), 0), "absurd": (2, ("chk",), 0),
            "case": (4, ("syn", "chk", "chk"), 2)},
    "syn": {"var": (1, (), 0), "app": (3, ("syn", "chk"), 0), "pi1": (2, ("syn",), 0),
            "pi2": (2, ("syn",), 0), "annot": (2, ("chk",), 0)},
}
_COC_GRAMMAR = {
    "chk": {"var": (1, (), 0), "app": (3, ("chk", "syn"), 0)},
    "syn": {"lam": (2, ("syn",), 1), "pair": (3, ("syn", "syn"), 0), "unit": (1, (), 0),
            "letunit": (3, ("chk", "syn"), 0), "letpair": (3, ("chk", "syn"), 2), "annot": (2, ("chk",), 0)},
}


def l_constructors(cls: str, calculus: str) -> dict[str, tuple]:
    table = dict(_L_GRAMMAR[cls])
    if calculus == "pos":
        table = {k: v for k, v in table.items() if k in POSITIVE_FRAGMENT}
    elif calculus == "neg":
        table = {k: v for k, v in table.items() if k in NEGATIVE_FRAGMENT}
    elif calculus != "lnl":
        table = {k: v for k, v in table.items() if k not in _LNL_ONLY}
    return table


class _TermGen:
    def __init__(self, rng: random.Random, calculus: str):
        self.rng = rng
        self.calculus = calculus
        self.roots: dict[str, Polarity | None] = {}
        self.annotations = 0

    def placeholder(self, pol: Polarity) -> Atom:
        self.annotations += 1
        return Atom(f"?{self.annotations}", pol)

    def split_budget(self, budget: int, mins: list[int]) -> list[int]:
        spare = budget - sum(mins)
        out = list(mins)
        for _ in range(spare):
            if self.rng.random() < 0.7:
                out[self.rng.randrange(len(out))] += 1
        return out

    def pick(self, table: dict, budget: int, leaf: str | None) -> str:
        """Prefer compound constructors while there is room, so sizes spread out."""
        compound = [k for k, v in table.items() if 1 < v[0] <= budget]
        leaves = [k for k, v in table.items() if v[0] <= 1 and k != leaf]
        if compound and self.rng.random() < 0.8:
            return self.rng.choice(compound)
        if leaf is not None and (not leaves or self.rng.random() < 0.7):
            return leaf
        return self.rng.choice(leaves or compound)

    def names(self, n: int) -> tuple[str, ...]:
        return tuple(self.rng.sample(BINDERS, n))

    # System L

    def var(self, cls: str, env: list) -> Term | None:
        side, pol = CLASS_VAR_SIDE[cls], CLASS_POLARITY[cls]
        visible = {}
        for name, s, p in reversed(env):
            visible.setdefault((name, s), p)
        bound = [n for (n, s), p in visible.items() if s == side and p is pol]
        pool = X_ROOTS if side == "x" else SIGMA_ROOTS
        roots = [r for r in pool if self.roots.get(r, pol) is pol and (r, side) not in visible]
        if bound and (not roots or self.rng.random() < 0.75):
            return Term("var", names=(self.rng.choice(bound),))
        if not roots:
            return None
        r = self.rng.choice(roots)
        self.roots[r] = pol
        return Term("var", names=(r,))

    def l_term(self, cls: str, budget: int, env: list) -> Term | None:
        if cls == COMMAND:
            return self.command(budget, env)
        table = l_constructors(cls, self.calculus)
        for _ in range(4):
            kind = self.pick(table, budget, leaf="var")
            if kind == "var":
                t = self.var(cls, env)
                if t is not None:
                    return t
                continue
            return self.l_cons(kind, table[kind], budget, env)
        return None

    def l_cons(self, kind: str, spec: tuple, budget: int, env: list) -> Term | None:
        minimum, child_classes = spec[0], spec[1]
        ty = self.placeholder(_ANNOTATED[kind]) if kind in _ANNOTATED else None
        if not child_classes:
            return Term(kind, ty=ty)
        mins = [3 if c == COMMAND else 1 for c in child_classes]
        budgets = self.split_budget(budget - 1, mins)
        side = spec[2] if len(spec) > 2 else None
        n = spec[4] if len(spec) > 2 else 0
        names: tuple[str, ...] = ()
        children = []
        if kind in ("match-sum", "comatch-with"):
            names = (self.rng.choice(BINDERS), self.rng.choice(BINDERS))
            for name, b in zip(names, budgets):
                c = self.command(b, env + [(name, side, spec[3])])
                if c is None:
                    return None
                children.append(c)
            return Term(kind, tuple(children), names, ty)
        if n:
            names = self.names(n)
        inner = env + [(nm, side, spec[3]) for nm in names]
        for c, b in zip(child_classes, budgets):
            t = self.l_term(c, b, inner if c == COMMAND else env)
            if t is None:
                return None
            children.append(t)
        return Term(kind, tuple(children), names, ty)

    def command(self, budget: int, env: list) -> Term | None:
        if budget < 3:
            return None
        pols = {"pos": [POS], "neg": [NEG]}.get(self.calculus, [POS, NEG])
        pol = self.rng.choice(pols)
        lb, rb = self.split_budget(budget - 1, [1, 1])
        left_cls, right_cls = (EXPR, PATTERN) if pol is POS else (COEXPR, COPATTERN)
        left = self.l_term(left_cls, lb, env)
        right = self.l_term(right_cls, rb, env)
        if left is None or right is None:
            return None
        return Term("cut", (left, right))

    # lambda calculi

    def lam_term(self, mode: str, budget: int, env: list) -> Term | None:
        grammar = _STD_GRAMMAR if self.calculus == LAMBDA_STANDARD else _COC_GRAMMAR
        table = dict(grammar[mode])
        if mode == "chk":
            # a synthesising term embeds into checking position
            table.update(grammar["syn"])
        if not any(v[0] <= budget for v in table.values()):
            return None
        kind = self.pick(table, budget, leaf="var" if "var" in table else None)
        minimum, modes, n = table[kind]
        if kind == "var":
            visible = list(dict.fromkeys(name for name in reversed(env)))
            roots = [r for r in SIGMA_ROOTS if r not in visible]
            if visible and (not roots or self.rng.random() < 0.75):
                return Term("var", names=(self.rng.choice(visible),))
            r = self.rng.choice(roots)
            self.roots[r] = PLAIN
            return Term("var", names=(r,))
        if not modes:
            return Term(kind)
        budgets = self.split_budget(budget - 1, [1] * len(modes))
        names = self.names(n) if n else ()
        children = []
        for i, (m, b) in enumerate(zip(modes, budgets)):
            inner = env
            if kind == "lam" or (kind == "letpair" and i == 1):
                inner = env + list(names)
            elif kind == "case" and i > 0:
                inner = env + [names[i - 1]]
            t = self.lam_term(m, b, inner)
            if t is None:
                return None
            children.append(t)
        ty = self.placeholder(PLAIN) if kind == "annot" else None
        return Term(kind, tuple(children), names, ty)


def _random_type(rng: random.Random, universe: TypeUniverse, pol: Polarity) -> Type:
    return rng.choice(enumerate_types(universe, pol))


def _fill(t: Term, annotations: dict[str, Type]) -> Term:
    ty = t.ty
    if isinstance(ty, Atom) and ty.name in annotations:
        ty = annotations[ty.name]
    return Term(t.kind, tuple(_fill(c, annotations) for c in t.children), t.names, ty)


def _placeholders(t: Term, out: list) -> list:
    if isinstance(t.ty, Atom) and t.ty.name.startswith("?"):
        out.append(t.ty)
    for c in t.children:
        _placeholders(c, out)
    return out


def _query_kinds(cls: str) -> tuple[str, ...]:
    if cls == "lambda":
        return ("lambda-check", "lambda-synth")
    return (cls,)


def _raw_query(gen: _TermGen, kind: str, size: int) -> Query | None:
    gen.roots = {}
    gen.annotations = 0
    if kind.startswith("lambda"):
        term = gen.lam_term("chk" if kind == "lambda-check" else "syn", size, [])
    elif size == 0:
        term = gen.var(kind, []) if kind != COMMAND else None
    else:
        term = gen.l_term(kind, size, [])
    if term is None:
        return None
    ctx = []
    for name, pol in gen.roots.items():
        if kind.startswith("lambda"):
            ctx.append(CtxEntry(name))
        elif name in X_ROOTS:
            ctx.append(CtxEntry(name, Atom("?x", pol), pol))
        else:
            ctx.append(CtxEntry(name, None, pol if gen.rng.random() < 0.5 else None))
    ctx.sort(key=lambda e: e.name)
    return Query(kind, tuple(ctx), term, None, gen.calculus)


def _assign_types(q: Query, el, rng: random.Random, universe: TypeUniverse, cfg: StructConfig,
                  derive: bool) -> Query:
    placeholders = _placeholders(q.term, [])
    standard = q.kind.startswith("lambda") and el.calculus == LAMBDA_STANDARD
    typed_names = [e.name for e in q.ctx if e.ty is not None or standard]
    needs_ty = q.kind in ("expr", "coexpr", "lambda-check")
    ty_pol = {"expr": POS, "coexpr": NEG}.get(q.kind, PLAIN)

    chosen = None
    if derive:
        js = derive_all(el, universe, cfg, free_inputs=True, blind=True, respect_annotations=False)
        typed_in, ty_in = js.inputs
        try:
            for n, s in enumerate(js.solutions(budget=2000)):
                if n >= 3:
                    break
                s = dict(s)
                pick = lambda sort: _random_type(rng, universe, sort[1])  # noqa: E731
                xs = {e.name: instantiate(e.ty, s, pick) for e in typed_in}
                ty = instantiate(ty_in, s, pick) if needs_ty else None
                anns = {w.name: instantiate(m, s, pick) for m, w, _ in js.annotations}
                values = list(xs.values()) + list(anns.values()) + ([ty] if ty is not None else [])
                if not any(contains_top(v) for v in values):
                    chosen = xs, ty, anns
                    break
        except SearchBudgetExceeded:
            chosen = None
    if chosen is None:
        xs = {}
        for e in q.ctx:
            if e.name in typed_names:
                xs[e.name] = _random_type(rng, universe, PLAIN if standard else e.pol)
        ty = _random_type(rng, universe, ty_pol) if needs_ty else None
        anns = {a.name: _random_type(rng, universe, a.polarity) for a in placeholders}
        chosen = xs, ty, anns
    xs, ty, anns = chosen
    ctx = tuple(
        CtxEntry(e.name, xs[e.name], e.pol, e.pos) if e.name in xs else e for e in q.ctx
    )
    return Query(q.kind, ctx, _fill(q.term, anns), ty, q.calculus, q.preset)


def generate_queries(
    seed: int,
    size_bound: int,
    cls: str,
    cfg: StructConfig,
    calculus: str = "pol",
    count: int = 100,
    universe: TypeUniverse | None = None,
    derived_share: float = 0.5,
) -> list[Query]:
    """``count`` well-scoped queries of class ``cls`` with terms of size at most ``size_bound``.

    ``cls`` is a System L judgement class or ``"lambda"``.  Size 0 yields
    bare variables.  Identical arguments give identical output.
    """
    rng = random.Random(seed)
    gen = _TermGen(rng, calculus)
    universe = universe or universe_for(calculus, depth=1)
    kinds = _query_kinds(cls)
    out: list[Query] = []
    attempts = 0
    while len(out) < count and attempts < count * 200:
        attempts += 1
        kind = rng.choice(kinds)
        size = rng.randint(min(1, size_bound), max(size_bound, 1)) if size_bound else 0
        raw = _raw_query(gen, kind, size)
        if raw is None:
            continue
        # standard lambda contexts are typed; give scope elaboration a placeholder
        if calculus == LAMBDA_STANDARD:
            raw = Query(raw.kind, tuple(CtxEntry(e.name, Atom("?g", PLAIN)) for e in raw.ctx),
                        raw.term, raw.ty, raw.calculus)
        probe = raw
        if raw.kind in ("expr", "coexpr", "lambda-check"):
            pol = {"expr": POS, "coexpr": NEG}.get(raw.kind, PLAIN)
            probe = Query(raw.kind, raw.ctx, raw.term, Atom("?t", pol), raw.calculus)
        try:
            el = elaborate(probe, cfg, calculus)
        except ScopeError:
            continue
        out.append(_assign_types(probe, el, rng, universe, cfg, rng.random() < derived_share))
    return out


def generate_corpus(seed: int, size_bound: int, cls: str, cfg: StructConfig, calculus: str = "pol",
                    count: int = 100) -> list[Query]:
    return generate_queries(seed, size_bound, cls, cfg, calculus, count)


def corpus_filename(seed: int, size_bound: int, cls: str, cfg: StructConfig) -> str:
    return f"gen_seed{seed}_size{size_bound}_{cls}_{cfg.name}.pl0"


def write_corpus(path: Path, queries: Iterable[Query]) -> None:
    Path(path).write_text("".join(show_directive(q) + "\n" for q in queries), encoding="utf-8")


__all__ = ["generate_queries", "generate_corpus", "corpus_filename", "write_corpus", "l_constructors"]
