"""Scope elaboration: raw terms to co-de Bruijn scoped syntax.

Every elaborated node records the variables it actually uses, split into the
synthesisable side (``ctx``) and, for System L, the checkable side
(``xctx``).  Binary nodes carry covers saying how their children's contexts
interleave; binders carry thinnings saying whether each bound variable is
used.  Unused variables are therefore discarded at the nearest binder, and
leaves always use their whole context.

Bidirectional modes are assigned here as well.  For the lambda calculi a
synthesising term in checking position is wrapped in an ``emb`` node; the
reverse needs an annotation and is reported as a mode error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ScopeError
from .kernel import (
    NEG, PLAIN, POS, Entry, Polarity, ScopedCtx, StructConfig, TEntry, TypedCtx, Type,
    illegal_cover_entry, illegal_thinning_entry, polarity_of, show_type, CONNECTIVES,
)
from .surface import Query, Term

CHK, SYN = "chk", "syn"
EXPR, PATTERN, COPATTERN, COEXPR, COMMAND = "expr", "pattern", "copattern", "coexpr", "command"

CLASS_POLARITY = {EXPR: POS, PATTERN: POS, COPATTERN: NEG, COEXPR: NEG}
# Checkable classes take their variables from the synthesisable side and vice versa.
CLASS_VAR_SIDE = {EXPR: "sigma", COEXPR: "sigma", PATTERN: "x", COPATTERN: "x"}

L_MODE_TABLE: dict[str, str] = {
    "mu+": EXPR, "unit": EXPR, "tuple": EXPR, "inl": EXPR, "inr": EXPR,
    "sim": EXPR, "down": EXPR, "match-Down": EXPR,
    "mut+": PATTERN, "match-unit": PATTERN, "match-pair": PATTERN, "match-zero": PATTERN,
    "match-sum": PATTERN, "match-sim": PATTERN, "match-down": PATTERN, "Down": PATTERN,
    "mu-": COPATTERN, "comatch-bot": COPATTERN, "comatch-par": COPATTERN,
    "comatch-one": COPATTERN, "comatch-with": COPATTERN, "comatch-not": COPATTERN,
    "comatch-up": COPATTERN, "Up": COPATTERN,
    "mut-": COEXPR, "counit": COEXPR, "cotuple": COEXPR, "pi1": COEXPR, "pi2": COEXPR,
    "not": COEXPR, "up": COEXPR, "comatch-Up": COEXPR,
    "cut": COMMAND,
}

# Classes of the immediate subterms of each non-binding constructor.
_L_CHILDREN = {
    "tuple": (EXPR, EXPR), "inl": (EXPR,), "inr": (EXPR,), "sim": (COEXPR,), "down": (COPATTERN,),
    "Down": (COEXPR,), "cotuple": (COEXPR, COEXPR), "pi1": (COEXPR,), "pi2": (COEXPR,),
    "not": (EXPR,), "up": (PATTERN,), "Up": (EXPR,),
}

# Binders: side and polarity of the variables they bind, and number of bodies.
_L_BINDERS = {
    "mu+": ("x", POS), "mut+": ("sigma", POS), "mu-": ("sigma", NEG), "mut-": ("x", NEG),
    "match-unit": ("sigma", None), "match-pair": ("sigma", POS), "match-sum": ("sigma", POS),
    "match-sim": ("sigma", NEG), "match-down": ("x", NEG), "match-Down": ("sigma", NEG),
    "comatch-bot": ("sigma", None), "comatch-par": ("sigma", NEG), "comatch-with": ("sigma", NEG),
    "comatch-not": ("sigma", POS), "comatch-up": ("x", POS), "comatch-Up": ("sigma", POS),
}
_BRANCHING = frozenset({"match-sum", "comatch-with"})
_NULLARY_MATCH = frozenset({"match-zero", "comatch-one"})

POSITIVE_FRAGMENT = frozenset({
    "var", "cut", "mu+", "mut+", "unit", "tuple", "inl", "inr",
    "match-unit", "match-pair", "match-zero", "match-sum",
})
NEGATIVE_FRAGMENT = frozenset({
    "var", "cut", "mu-", "mut-", "counit", "cotuple", "pi1", "pi2",
    "comatch-bot", "comatch-par", "comatch-one", "comatch-with",
})
_POSITIVE_TYPE_OPS = frozenset({"I", "tensor", "zero", "plus"})
_NEGATIVE_TYPE_OPS = frozenset({"bot", "par", "one", "with"})

LAMBDA_STANDARD = "stlc"
LAMBDA_CALCULI = ("stlc", "lin", "cdb")
L_CALCULI = ("pos", "neg", "pol", "lnl")

_STD_MODES = {"var": SYN, "annot": SYN, "app": SYN, "pi1": SYN, "pi2": SYN,
              "lam": CHK, "pair": CHK, "unit": CHK, "inl": CHK, "inr": CHK, "case": CHK, "absurd": CHK}
_COC_MODES = {"var": CHK, "app": CHK, "annot": SYN, "lam": SYN, "pair": SYN, "unit": SYN,
              "letunit": SYN, "letpair": SYN}


@dataclass(frozen=True)
class Node:
    """One node of scoped syntax.

    ``cover``/``xcover`` split ``ctx``/``xctx`` between the two children of a
    binary node.  ``thin`` holds, per body, a thinning over the variables that
    body binds on the synthesisable side; ``xthin`` does the same for a
    variable bound on the checkable side.  Two-branch matches send the whole
    synthesisable context to both branches; ``share`` records which of its
    entries each branch uses.
    """

    kind: str
    mode: str
    ctx: ScopedCtx = ()
    xctx: ScopedCtx = ()
    children: tuple["Node", ...] = ()
    names: tuple[str, ...] = ()
    cover: str | None = None
    xcover: str | None = None
    thin: tuple[str, ...] | None = None
    xthin: str | None = None
    share: tuple[str, ...] | None = None
    ty: Type | None = None
    polarity: Polarity | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Elaborated:
    """A query after scope elaboration.

    ``sigma`` is the query's synthesisable context with resolved polarities
    and ``typed`` its typed (checkable) entries; ``thin``/``xthin`` embed the
    root's contexts into them.
    """

    query: Query
    calculus: str
    cfg: StructConfig
    root: Node
    sigma: ScopedCtx
    typed: TypedCtx
    thin: str
    xthin: str

    @property
    def family(self) -> str:
        return "lam" if self.calculus in LAMBDA_CALCULI else "L"


def mode_of(node: Node) -> str:
    return node.mode


def default_calculus(query: Query) -> str:
    if query.calculus is not None:
        return query.calculus
    return LAMBDA_STANDARD if query.family == "lam" else "pol"


# ---------------------------------------------------------------------------
# Elaboration internals


class _Binding:
    __slots__ = ("name", "side", "pol", "order", "pos")

    def __init__(self, name: str, side: str, pol: Polarity | None, order: int, pos=None):
        self.name = name
        self.side = side
        self.pol = pol
        self.order = order
        self.pos = pos


class _Pre:
    """Mutable pre-node; frozen into :class:`Node` once polarities are known."""

    __slots__ = ("kind", "mode", "children", "names", "ty", "polarity", "pos", "fv", "xfv", "bound", "xbound")

    def __init__(self, kind, mode, children=(), names=(), ty=None, polarity=None, pos=None):
        self.kind = kind
        self.mode = mode
        self.children = list(children)
        self.names = tuple(names)
        self.ty = ty
        self.polarity = polarity
        self.pos = pos
        self.fv: list[_Binding] = []
        self.xfv: list[_Binding] = []
        self.bound: list[list[_Binding]] = []  # per body, synthesisable side
        self.xbound: list[_Binding] = []


def _union(*lists: Sequence[_Binding]) -> list[_Binding]:
    seen = {}
    for lst in lists:
        for b in lst:
            seen[id(b)] = b
    return sorted(seen.values(), key=lambda b: b.order)


def _minus(lst: Sequence[_Binding], remove: Sequence[_Binding]) -> list[_Binding]:
    ids = {id(b) for b in remove}
    return [b for b in lst if id(b) not in ids]


def _cover(parent: Sequence[_Binding], left: Sequence[_Binding], right: Sequence[_Binding]) -> str:
    lids, rids = {id(b) for b in left}, {id(b) for b in right}
    return "".join("B" if id(b) in lids and id(b) in rids else "L" if id(b) in lids else "R" for b in parent)


def _thin(parent: Sequence[_Binding], used: Sequence[_Binding]) -> str:
    ids = {id(b) for b in used}
    return "".join("K" if id(b) in ids else "D" for b in parent)


class _Elaborator:
    def __init__(self, query: Query, cfg: StructConfig, calculus: str):
        self.query = query
        self.cfg = cfg
        self.calculus = calculus
        self.counter = 0
        self.scope: list[_Binding] = []
        self.implicit: list[_Binding] | None = None  # undeclared synthesised names, when allowed

    def bind(self, name: str, side: str, pol: Polarity | None, pos=None) -> _Binding:
        self.counter += 1
        return _Binding(name, side, pol, self.counter, pos)

    def lookup(self, name: str, side: str, pos) -> _Binding:
        for b in reversed(self.scope):
            if b.name == name and b.side == side:
                return b
        if any(b.name == name for b in self.scope):
            where = "checkable" if side == "sigma" else "synthesisable"
            raise ScopeError(
                f"variable {name} lives in the {where} context and cannot be used here",
                pos, code="wrong-context",
            )
        if side == "sigma" and self.implicit is not None:
            # ordered after the declared entries but before every binder inside the term
            b = _Binding(name, side, None if self.query.family == "L" else PLAIN,
                         self.root_top + (len(self.implicit) + 1) * 1e-6, pos)
            self.implicit.append(b)
            self.scope.insert(0, b)
            return b
        raise ScopeError(f"unbound variable {name}", pos, code="unbound")

    def under(self, bindings: Sequence[_Binding], fn, *args):
        self.scope.extend(bindings)
        try:
            return fn(*args)
        finally:
            del self.scope[len(self.scope) - len(bindings):]

    # lambda calculi

    def lam(self, t: Term, mode: str) -> _Pre:
        table = _STD_MODES if self.calculus == LAMBDA_STANDARD else _COC_MODES
        natural = table.get(t.kind)
        if natural is None:
            which = "standard" if self.calculus == LAMBDA_STANDARD else "cocontextual"
            raise ScopeError(f"{t.kind} is not part of the {which} lambda calculus", t.pos, code="mode")
        if natural != mode:
            if natural == SYN and mode == CHK:
                inner = self.lam(t, SYN)
                pre = _Pre("emb", CHK, [inner], pos=t.pos)
                pre.fv = list(inner.fv)
                return pre
            raise ScopeError(
                f"checkable {t.kind} in synthesising position requires an annotation", t.pos, code="mode"
            )
        std = self.calculus == LAMBDA_STANDARD
        pre = _Pre(t.kind, mode, names=t.names, ty=t.ty, pos=t.pos)
        match t.kind:
            case "var":
                b = self.lookup(t.names[0], "sigma", t.pos)
                pre.fv = [b]
            case "unit":
                pass
            case "annot":
                pre.children = [self.lam(t.children[0], CHK)]
            case "pi1" | "pi2":
                pre.children = [self.lam(t.children[0], SYN)]
            case "inl" | "inr" | "absurd":
                pre.children = [self.lam(t.children[0], CHK)]
            case "app":
                pre.children = [self.lam(t.children[0], SYN if std else CHK),
                                self.lam(t.children[1], CHK if std else SYN)]
            case "pair":
                sub = CHK if std else SYN
                pre.children = [self.lam(t.children[0], sub), self.lam(t.children[1], sub)]
            case "letunit":
                pre.children = [self.lam(t.children[0], CHK), self.lam(t.children[1], SYN)]
            case "lam":
                x = self.bind(t.names[0], "sigma", PLAIN, t.pos)
                pre.children = [self.under([x], self.lam, t.children[0], CHK if std else SYN)]
                pre.bound = [[x]]
            case "letpair":
                x = self.bind(t.names[0], "sigma", PLAIN, t.pos)
                y = self.bind(t.names[1], "sigma", PLAIN, t.pos)
                scrut = self.lam(t.children[0], CHK)
                body = self.under([x, y], self.lam, t.children[1], SYN)
                pre.children = [scrut, body]
                pre.bound = [[], [x, y]]
            case "case":
                scrut = self.lam(t.children[0], SYN)
                x = self.bind(t.names[0], "sigma", PLAIN, t.pos)
                y = self.bind(t.names[1], "sigma", PLAIN, t.pos)
                left = self.under([x], self.lam, t.children[1], CHK)
                right = self.under([y], self.lam, t.children[2], CHK)
                pre.children = [scrut, left, right]
                pre.bound = [[], [x], [y]]
        self._free(pre)
        return pre

    # System L

    def l(self, t: Term, cls: str) -> _Pre:
        if self.calculus == "pos" and t.kind not in POSITIVE_FRAGMENT:
            raise ScopeError(f"{t.kind} is not part of the positive fragment", t.pos, code="fragment")
        if self.calculus == "neg" and t.kind not in NEGATIVE_FRAGMENT:
            raise ScopeError(f"{t.kind} is not part of the negative fragment", t.pos, code="fragment")
        if t.ty is not None:
            self.check_fragment_type(t.ty, t.pos)
        if t.kind == "var":
            return self.l_var(t, cls)
        natural = L_MODE_TABLE.get(t.kind)
        if natural is None:
            raise ScopeError(f"{t.kind} is not a System L construct", t.pos, code="mode")
        if natural != cls:
            raise ScopeError(f"{_article(natural)} form ({t.kind}) cannot be used as {_article(cls)}",
                             t.pos, code="mode")
        pre = _Pre(t.kind, cls, names=t.names, ty=t.ty, pos=t.pos, polarity=CLASS_POLARITY.get(cls))
        if t.kind == "cut":
            pol = self.cut_polarity(t)
            pre.polarity = pol
            if self.calculus == "pos" and pol is not POS or self.calculus == "neg" and pol is not NEG:
                raise ScopeError("cut of the wrong polarity for this fragment", t.pos, code="fragment")
            left_cls, right_cls = (EXPR, PATTERN) if pol is POS else (COEXPR, COPATTERN)
            pre.children = [self.l(t.children[0], left_cls), self.l(t.children[1], right_cls)]
        elif t.kind in _L_CHILDREN:
            pre.children = [self.l(c, k) for c, k in zip(t.children, _L_CHILDREN[t.kind])]
        elif t.kind in _L_BINDERS:
            side, pol = _L_BINDERS[t.kind]
            if t.kind in _BRANCHING:
                for name, body in zip(t.names, t.children):
                    b = self.bind(name, side, pol, t.pos)
                    pre.children.append(self.under([b], self.l, body, COMMAND))
                    pre.bound.append([b])
            elif t.children:
                bs = [self.bind(n, side, pol, t.pos) for n in t.names]
                pre.children = [self.under(bs, self.l, t.children[0], COMMAND)]
                if side == "x":
                    pre.xbound = bs
                    pre.bound = [[]]
                else:
                    pre.bound = [bs]
        self._free(pre)
        return pre

    def l_var(self, t: Term, cls: str) -> _Pre:
        side = CLASS_VAR_SIDE.get(cls)
        if side is None:
            raise ScopeError("a variable is not a command", t.pos, code="mode")
        want = CLASS_POLARITY[cls]
        b = self.lookup(t.names[0], side, t.pos)
        if b.pol is None:
            b.pol = want
        elif b.pol is not want:
            raise ScopeError(
                f"variable {b.name} is {_pol_word(b.pol)} but is used as {_article(cls)}",
                t.pos, code="polarity",
            )
        pre = _Pre("var", cls, names=t.names, pos=t.pos, polarity=want)
        if side == "sigma":
            pre.fv = [b]
        else:
            pre.xfv = [b]
        return pre

    _LEFT_POS = frozenset({"mu+", "unit", "tuple", "inl", "inr", "sim", "down", "match-Down"})
    _LEFT_NEG = frozenset({"mut-", "counit", "cotuple", "pi1", "pi2", "not", "up", "comatch-Up"})

    def cut_polarity(self, t: Term) -> Polarity:
        left, right = t.children
        rk = L_MODE_TABLE.get(right.kind)
        if rk == PATTERN:
            return POS
        if rk == COPATTERN:
            return NEG
        if left.kind in self._LEFT_POS:
            return POS
        if left.kind in self._LEFT_NEG:
            return NEG
        if right.kind == "var":
            b = self.lookup(right.names[0], "x", right.pos)
            if b.pol is not None:
                return b.pol
        if left.kind == "var":
            b = self.lookup(left.names[0], "sigma", left.pos)
            if b.pol is not None:
                return b.pol
        if right.kind != "var":
            raise ScopeError(f"{right.kind} cannot appear on the right of a cut", right.pos, code="mode")
        raise ScopeError("cannot determine the polarity of this cut", t.pos, code="polarity")

    def check_fragment_type(self, ty: Type, pos) -> None:
        if self.calculus not in ("pos", "neg"):
            return
        allowed = _POSITIVE_TYPE_OPS if self.calculus == "pos" else _NEGATIVE_TYPE_OPS
        want = POS if self.calculus == "pos" else NEG
        stack = [ty]
        while stack:
            t = stack.pop()
            if hasattr(t, "op"):
                if t.op not in allowed:
                    raise ScopeError(f"type {show_type(ty)} is outside the {_pol_word(want)} fragment",
                                     pos, code="fragment")
                stack.extend(t.args)
            elif t.polarity is not want:
                raise ScopeError(f"type {show_type(ty)} is outside the {_pol_word(want)} fragment",
                                 pos, code="fragment")

    # shared

    def _free(self, pre: _Pre) -> None:
        """Compute the free variables of ``pre`` from its children."""
        if pre.kind == "var":
            return
        sig_parts, x_parts = [], []
        for i, child in enumerate(pre.children):
            bound = pre.bound[i] if i < len(pre.bound) else []
            sig_parts.append(_minus(child.fv, bound))
            x_parts.append(_minus(child.xfv, pre.xbound))
        pre.fv = _union(*sig_parts)
        pre.xfv = _union(*x_parts)


def _article(cls: str) -> str:
    return {EXPR: "an expression", PATTERN: "a pattern", COPATTERN: "a copattern",
            COEXPR: "a coexpression", COMMAND: "a command"}.get(cls, cls)


def _pol_word(p: Polarity) -> str:
    return {POS: "positive", NEG: "negative", PLAIN: "unpolarised"}[p]


# ---------------------------------------------------------------------------
# Freezing and legality


class _Freezer:
    def __init__(self, cfg: StructConfig, family: str, validate: bool):
        self.cfg = cfg
        self.family = family
        self.validate = validate

    def entries(self, bs: Sequence[_Binding]) -> ScopedCtx:
        return tuple(Entry(b.name, b.pol if b.pol is not None else POS) for b in bs)

    def check_cover(self, cover: str, bs: Sequence[_Binding], side: str, pos) -> None:
        if not self.validate:
            return
        bad = illegal_cover_entry(cover, self.entries(bs), self.cfg, side)
        if bad is not None:
            raise ScopeError(
                f"variable {bad.name} is used more than once, which the {self.cfg.name} preset forbids",
                pos, code="duplicated",
            )

    def check_thin(self, thin: str, bs: Sequence[_Binding], side: str, pos) -> None:
        if not self.validate:
            return
        bad = illegal_thinning_entry(thin, self.entries(bs), self.cfg, side)
        if bad is not None:
            raise ScopeError(
                f"variable {bad.name} is never used, which the {self.cfg.name} preset forbids",
                pos, code="unused",
            )

    def freeze(self, pre: _Pre) -> Node:
        children = tuple(self.freeze(c) for c in pre.children)
        cover = xcover = xthin = None
        thin = share = None
        if pre.kind == "case":
            # scrutinee against both branches; branches share what they are given
            branch_fv = _union(*[_minus(c.fv, b) for c, b in zip(pre.children[1:], pre.bound[1:])])
            cover = _cover(pre.fv, pre.children[0].fv, branch_fv)
            self.check_cover(cover, pre.fv, "sigma", pre.pos)
            share = tuple(_thin(branch_fv, _minus(c.fv, b)) for c, b in zip(pre.children[1:], pre.bound[1:]))
            for s in share:
                self.check_thin(s, branch_fv, "sigma", pre.pos)
            thin = tuple(_thin(b, c.fv) for c, b in zip(pre.children, pre.bound))
        elif pre.kind in _BRANCHING:
            share = tuple(_thin(pre.fv, _minus(c.fv, b)) for c, b in zip(pre.children, pre.bound))
            for s in share:
                self.check_thin(s, pre.fv, "sigma", pre.pos)
            xcover = _cover(pre.xfv, pre.children[0].xfv, pre.children[1].xfv)
            self.check_cover(xcover, pre.xfv, "x", pre.pos)
            thin = tuple(_thin(b, c.fv) for c, b in zip(pre.children, pre.bound))
        elif len(pre.children) == 2:
            left = _minus(pre.children[0].fv, pre.bound[0] if pre.bound else [])
            right = _minus(pre.children[1].fv, pre.bound[1] if pre.bound else [])
            cover = _cover(pre.fv, left, right)
            self.check_cover(cover, pre.fv, "sigma", pre.pos)
            if self.family == "L":
                xcover = _cover(pre.xfv, pre.children[0].xfv, pre.children[1].xfv)
                self.check_cover(xcover, pre.xfv, "x", pre.pos)
            if pre.kind == "letpair":
                thin = ("", _thin(pre.bound[1], pre.children[1].fv))
        if pre.kind in ("lam",) or pre.kind in _L_BINDERS and pre.kind not in _BRANCHING:
            body = pre.children[0] if pre.children else None
            if body is not None:
                thin = (_thin(pre.bound[0], body.fv),)
                if pre.xbound:
                    xthin = _thin(pre.xbound, body.xfv)
            elif pre.kind in _L_BINDERS:
                thin = ("",)
        if thin is not None:
            for t, b in zip(thin, pre.bound or [[]]):
                self.check_thin(t, b, "sigma", pre.pos)
        if xthin is not None:
            self.check_thin(xthin, pre.xbound, "x", pre.pos)
        return Node(
            kind=pre.kind, mode=pre.mode, ctx=self.entries(pre.fv), xctx=self.entries(pre.xfv),
            children=children, names=pre.names, cover=cover, xcover=xcover, thin=thin,
            xthin=xthin, share=share, ty=pre.ty, polarity=pre.polarity, pos=pre.pos,
        )


# ---------------------------------------------------------------------------
# Entry point


def elaborate(query: Query, cfg: StructConfig, calculus: str | None = None) -> Elaborated:
    """Scope-check ``query`` under ``cfg`` and return its co-de Bruijn elaboration.

    Raises :class:`ScopeError` for unbound, unused or duplicated variables
    (the latter two only when ``cfg`` forbids them), mode errors, polarity
    mismatches and constructs outside the selected calculus.
    """
    calculus = calculus or default_calculus(query)
    family = "lam" if calculus in LAMBDA_CALCULI else "L"
    if family != query.family:
        raise ScopeError(f"{query.kind} queries are not available in the {calculus} calculus",
                         query.pos, code="calculus")
    el = _Elaborator(query, cfg, calculus)

    roots: list[_Binding] = []
    typed: list[TEntry] = []
    seen: set[tuple[str, str]] = set()
    for e in query.ctx:
        if family == "lam":
            standard = calculus == LAMBDA_STANDARD
            if standard and e.ty is None:
                raise ScopeError(f"context entry {e.name} needs a type in the standard calculus",
                                 e.pos, code="context")
            if not standard and e.ty is not None:
                raise ScopeError(f"context entry {e.name} is synthesised and takes no type",
                                 e.pos, code="context")
            side, pol = "sigma", PLAIN
            if e.ty is not None:
                typed.append(TEntry(e.name, PLAIN, e.ty))
        else:
            side = "x" if e.ty is not None else "sigma"
            pol = polarity_of(e.ty) if e.ty is not None else e.pol
            if e.ty is not None:
                el.check_fragment_type(e.ty, e.pos)
                typed.append(TEntry(e.name, pol, e.ty))
        if (e.name, side) in seen:
            raise ScopeError(f"context entry {e.name} is listed twice", e.pos, code="context")
        seen.add((e.name, side))
        roots.append(el.bind(e.name, side, pol, e.pos))

    el.scope.extend(roots)
    if family == "L" or calculus != LAMBDA_STANDARD:
        el.implicit, el.root_top = [], el.counter
    if family == "lam":
        root_pre = el.lam(query.term, CHK if query.kind == "lambda-check" else SYN)
    else:
        if calculus == "pos" and query.kind in ("copattern", "coexpr") or \
                calculus == "neg" and query.kind in ("expr", "pattern"):
            raise ScopeError(f"{query.kind} queries are outside the {calculus} fragment",
                             query.pos, code="fragment")
        if query.ty is not None:
            el.check_fragment_type(query.ty, query.pos)
        root_pre = el.l(query.term, query.kind)

    roots += el.implicit or []
    sig_roots = [b for b in roots if b.side == "sigma"]
    x_roots = [b for b in roots if b.side == "x"]
    absorbing = root_pre.kind in _NULLARY_MATCH
    for b in sig_roots:
        if b.pol is None:
            # unused with no declared polarity: pick one the preset lets us discard
            if cfg.delta_neg and not cfg.gamma_pos:
                b.pol = NEG
            else:
                b.pol = POS
    validate = family == "L" or calculus != LAMBDA_STANDARD
    fr = _Freezer(cfg, family, validate)
    root = fr.freeze(root_pre)
    thin = _thin(sig_roots, root_pre.fv)
    xthin = _thin(x_roots, root_pre.xfv)
    if not absorbing:
        fr.check_thin(thin, sig_roots, "sigma", query.pos)
        fr.check_thin(xthin, x_roots, "x", query.pos)
    typed_ctx = tuple(typed) if family == "L" or calculus == LAMBDA_STANDARD else ()
    return Elaborated(query, calculus, cfg, root, fr.entries(sig_roots), typed_ctx, thin, xthin)


# ---------------------------------------------------------------------------
# Printing


def show_tree(node: Node, indent: int = 0) -> str:
    """One line per node: kind followed by its covers and thinnings."""
    parts = [node.kind]
    if node.cover is not None:
        parts.append(f"[cover: {node.cover}]")
    if node.xcover is not None:
        parts.append(f"[xcover: {node.xcover}]")
    if node.thin is not None:
        parts.append(f"[thin: {','.join(node.thin)}]")
    if node.xthin is not None:
        parts.append(f"[xthin: {node.xthin}]")
    if node.share is not None:
        parts.append(f"[share: {','.join(node.share)}]")
    lines = ["  " * indent + " ".join(parts)]
    for c in node.children:
        lines.append(show_tree(c, indent + 1))
    return "\n".join(lines)


def show_elaborated(el: Elaborated) -> str:
    head = f"{el.query.kind} [thin: {el.thin}]"
    if el.family == "L":
        head += f" [xthin: {el.xthin}]"
    return head + "\n" + show_tree(el.root, 1)


def iter_nodes(node: Node):
    yield node
    for c in node.children:
        yield from iter_nodes(c)
