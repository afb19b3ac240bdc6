"""Bicontextual checker for polarised System L and System LNL, and the dualizer.

Judgements take the typed checkable context ``X`` as input and synthesise the
typed synthesisable context ``Σ``.  Expressions and coexpressions are checked
against a type; patterns and copatterns synthesise one; commands only thread
contexts.  Every function below receives ``X`` restricted to exactly the
variables the node uses (the covers and thinnings from scope elaboration make
this possible) and returns ``Σ`` over exactly ``node.ctx``.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import CheckError
from .kernel import (
    BOT, I, NEG, ONE, POS, ZEROP, Atom, Con, DDown, DownShift, Entry, NotNeg, Par, Plus, Polarity,
    SimNeg, StructConfig, TEntry, Tensor, Type, TypedCtx, UUp, UpShift, With, dual_type,
    extend_typed, merge_typed, note, polarity_of, restrict, show_type, split, subtype,
)
from .scope import Elaborated, Node
from .surface import AtomDecl, CtxEntry, Query, Term


def _mismatch(what: str, ty: Type, node: Node) -> CheckError:
    return CheckError(f"{node.kind} needs {what} but the expected type is {show_type(ty)}", node.pos,
                      code="mismatch")


def _shape(ty: Type, op: str, what: str, node: Node) -> Con:
    if isinstance(ty, Con) and ty.op == op:
        return ty
    raise _mismatch(what, ty, node)


def _sub(a: Type, b: Type, node: Node) -> None:
    if not subtype(a, b):
        raise CheckError(f"{show_type(a)} is not a subtype of {show_type(b)}", node.pos, code="subtype")


def _lookup(x: TypedCtx, name: str, node: Node) -> Type:
    for e in x:
        if e.name == name:
            return e.ty
    raise CheckError(f"unbound variable {name}", node.pos, code="unbound")


def _unbind(body: TypedCtx, thin: str, names, pol: Polarity) -> tuple[TypedCtx, list[Type]]:
    """Split trailing bound entries off a body's Σ, giving dropped ones the top type."""
    kept = thin.count("K")
    rest, bound = body[:len(body) - kept], body[len(body) - kept:]
    full = extend_typed(thin, bound, [Entry(n, pol) for n in names])
    return rest, [e.ty for e in full]


class LChecker:
    """One rule engine for every System L fragment, parameterised by presets."""

    def __init__(self, cfg: StructConfig):
        self.cfg = cfg

    def _gate(self, node: Node) -> None:
        need = "uup" if node.kind in ("Up", "comatch-Up") else "ddown"
        if not getattr(self.cfg, need):
            raise CheckError(
                f"{node.kind} is not available under the {self.cfg.name} preset", node.pos,
                code="preset-violation",
            )

    def _annotation(self, node: Node) -> Type:
        note("annotation")
        note(f"annotation:{node.kind}")
        return node.ty

    def _body_x(self, x: TypedCtx, node: Node, name: str, pol: Polarity, ty: Type) -> TypedCtx:
        return x + (TEntry(name, pol, ty),) if node.xthin == "K" else x

    def _pair(self, node: Node, x: TypedCtx, check, tys) -> TypedCtx:
        x1, x2 = split(node.xcover, x)
        s1 = check(x1, tys[0], node.children[0])
        s2 = check(x2, tys[1], node.children[1])
        return merge_typed(node.cover, s1, s2, node.pos)

    def _branches(self, node: Node, x: TypedCtx, pol: Polarity) -> tuple[list[Type], TypedCtx]:
        """Two-branch (co)match: independent branches, Σ combined by pointwise meet."""
        xs = split(node.xcover, x)
        target = node.ctx
        found, sigmas = [], []
        for i, body in enumerate(node.children):
            s = self.check_command(xs[i], body)
            rest, (ty,) = _unbind(s, node.thin[i], node.names[i:i + 1], pol)
            found.append(ty)
            sigmas.append(extend_typed(node.share[i], rest, target))
        return found, merge_typed("B" * len(target), sigmas[0], sigmas[1], node.pos)

    def _absorb(self, node: Node) -> TypedCtx:
        return extend_typed("D" * len(node.ctx), (), node.ctx)

    # positive terms

    def check_expr(self, x: TypedCtx, ty: Type, node: Node) -> TypedCtx:
        if polarity_of(ty) is not POS:
            raise CheckError(f"expression checked against negative type {show_type(ty)}", node.pos,
                             code="polarity")
        k = node.kind
        if k == "var":
            return (TEntry(node.names[0], POS, ty),)
        if k == "mu+":
            return self.check_command(self._body_x(x, node, node.names[0], POS, ty), node.children[0])
        if k == "unit":
            if ty != I:
                raise _mismatch("type I", ty, node)
            return ()
        if k == "tuple":
            t = _shape(ty, "tensor", "a type of the form A * B", node)
            return self._pair(node, x, self.check_expr, t.args)
        if k in ("inl", "inr"):
            t = _shape(ty, "plus", "a type of the form A + B", node)
            return self.check_expr(x, t.args[0 if k == "inl" else 1], node.children[0])
        if k == "sim":
            t = _shape(ty, "sim", "a type of the form ~A", node)
            return self.check_coexpr(x, t.args[0], node.children[0])
        if k == "down":
            t = _shape(ty, "down", "a type of the form down A", node)
            found, s = self.synth_copattern(x, node.children[0])
            _sub(t.args[0], found, node)
            return s
        if k == "match-Down":
            self._gate(node)
            t = _shape(ty, "ddown", "a type of the form Down A", node)
            s = self.check_command(x, node.children[0])
            rest, (found,) = _unbind(s, node.thin[0], node.names, NEG)
            _sub(t.args[0], found, node)
            return rest
        raise CheckError(f"{k} is not an expression", node.pos, code="mode")

    def synth_pattern(self, x: TypedCtx, node: Node) -> tuple[Type, TypedCtx]:
        k = node.kind
        if k == "var":
            return _lookup(x, node.names[0], node), ()
        if k == "mut+":
            rest, (a,) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, POS)
            return a, rest
        if k == "match-unit":
            return I, self.check_command(x, node.children[0])
        if k == "match-pair":
            rest, (a, b) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, POS)
            return Tensor(a, b), rest
        if k == "match-zero":
            return ZEROP, self._absorb(node)
        if k == "match-sum":
            (a, b), s = self._branches(node, x, POS)
            return Plus(a, b), s
        if k == "match-sim":
            rest, (a,) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, NEG)
            return SimNeg(a), rest
        if k == "match-down":
            a = self._annotation(node)
            return DownShift(a), self.check_command(self._body_x(x, node, node.names[0], NEG, a),
                                                    node.children[0])
        if k == "Down":
            self._gate(node)
            a = self._annotation(node)
            return DDown(a), self.check_coexpr(x, a, node.children[0])
        raise CheckError(f"{k} is not a pattern", node.pos, code="mode")

    # negative terms

    def synth_copattern(self, x: TypedCtx, node: Node) -> tuple[Type, TypedCtx]:
        k = node.kind
        if k == "var":
            return _lookup(x, node.names[0], node), ()
        if k == "mu-":
            rest, (a,) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, NEG)
            return a, rest
        if k == "comatch-bot":
            return BOT, self.check_command(x, node.children[0])
        if k == "comatch-par":
            rest, (a, b) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, NEG)
            return Par(a, b), rest
        if k == "comatch-one":
            return ONE, self._absorb(node)
        if k == "comatch-with":
            (a, b), s = self._branches(node, x, NEG)
            return With(a, b), s
        if k == "comatch-not":
            rest, (a,) = _unbind(self.check_command(x, node.children[0]), node.thin[0], node.names, POS)
            return NotNeg(a), rest
        if k == "comatch-up":
            a = self._annotation(node)
            return UpShift(a), self.check_command(self._body_x(x, node, node.names[0], POS, a),
                                                  node.children[0])
        if k == "Up":
            self._gate(node)
            a = self._annotation(node)
            return UUp(a), self.check_expr(x, a, node.children[0])
        raise CheckError(f"{k} is not a copattern", node.pos, code="mode")

    def check_coexpr(self, x: TypedCtx, ty: Type, node: Node) -> TypedCtx:
        if polarity_of(ty) is not NEG:
            raise CheckError(f"coexpression checked against positive type {show_type(ty)}", node.pos,
                             code="polarity")
        k = node.kind
        if k == "var":
            return (TEntry(node.names[0], NEG, ty),)
        if k == "mut-":
            return self.check_command(self._body_x(x, node, node.names[0], NEG, ty), node.children[0])
        if k == "counit":
            if ty != BOT:
                raise _mismatch("type bot", ty, node)
            return ()
        if k == "cotuple":
            t = _shape(ty, "par", "a type of the form A par B", node)
            return self._pair(node, x, self.check_coexpr, t.args)
        if k in ("pi1", "pi2"):
            t = _shape(ty, "with", "a type of the form A & B", node)
            return self.check_coexpr(x, t.args[0 if k == "pi1" else 1], node.children[0])
        if k == "not":
            t = _shape(ty, "not", "a type of the form not A", node)
            return self.check_expr(x, t.args[0], node.children[0])
        if k == "up":
            t = _shape(ty, "up", "a type of the form up A", node)
            found, s = self.synth_pattern(x, node.children[0])
            _sub(found, t.args[0], node)
            return s
        if k == "comatch-Up":
            self._gate(node)
            t = _shape(ty, "uup", "a type of the form Up A", node)
            s = self.check_command(x, node.children[0])
            rest, (found,) = _unbind(s, node.thin[0], node.names, POS)
            _sub(found, t.args[0], node)
            return rest
        raise CheckError(f"{k} is not a coexpression", node.pos, code="mode")

    # commands

    def check_command(self, x: TypedCtx, node: Node) -> TypedCtx:
        if node.kind != "cut":
            raise CheckError(f"{node.kind} is not a command", node.pos, code="mode")
        left, right = node.children
        x1, x2 = split(node.xcover, x)
        if node.polarity is POS:
            ty, s2 = self.synth_pattern(x2, right)
            s1 = self.check_expr(x1, ty, left)
        else:
            ty, s2 = self.synth_copattern(x2, right)
            s1 = self.check_coexpr(x1, ty, left)
        return merge_typed(node.cover, s1, s2, node.pos)


# ---------------------------------------------------------------------------
# Functional entry points


def check_expr(x_ctx: TypedCtx, ty: Type, node: Node, cfg: StructConfig) -> TypedCtx:
    return LChecker(cfg).check_expr(tuple(x_ctx), ty, node)


def synth_pattern(x_ctx: TypedCtx, node: Node, cfg: StructConfig) -> tuple[Type, TypedCtx]:
    return LChecker(cfg).synth_pattern(tuple(x_ctx), node)


def synth_copattern(x_ctx: TypedCtx, node: Node, cfg: StructConfig) -> tuple[Type, TypedCtx]:
    return LChecker(cfg).synth_copattern(tuple(x_ctx), node)


def check_coexpr(x_ctx: TypedCtx, ty: Type, node: Node, cfg: StructConfig) -> TypedCtx:
    return LChecker(cfg).check_coexpr(tuple(x_ctx), ty, node)


def check_command(x_ctx: TypedCtx, node: Node, cfg: StructConfig) -> TypedCtx:
    return LChecker(cfg).check_command(tuple(x_ctx), node)


def run_l(el: Elaborated) -> tuple[Type | None, TypedCtx]:
    """Typecheck a System L query.

    Returns the synthesised type (patterns and copatterns only) and Σ over
    the query's whole synthesisable context, unused entries at the top type.
    """
    q = el.query
    checker = LChecker(el.cfg)
    x = restrict(el.xthin, el.typed)
    ty = None
    if q.kind == "expr":
        s = checker.check_expr(x, q.ty, el.root)
    elif q.kind == "coexpr":
        s = checker.check_coexpr(x, q.ty, el.root)
    elif q.kind == "pattern":
        ty, s = checker.synth_pattern(x, el.root)
    elif q.kind == "copattern":
        ty, s = checker.synth_copattern(x, el.root)
    else:
        s = checker.check_command(x, el.root)
    return ty, extend_typed(el.thin, s, el.sigma)


# ---------------------------------------------------------------------------
# Duality

TERM_DUALS = {
    "tuple": "cotuple", "unit": "counit", "inl": "pi1", "inr": "pi2", "sim": "not",
    "down": "up", "Up": "Down", "mu+": "mut-", "mut+": "mu-",
    "match-unit": "comatch-bot", "match-pair": "comatch-par", "match-zero": "comatch-one",
    "match-sum": "comatch-with", "match-sim": "comatch-not", "match-down": "comatch-up",
    "match-Down": "comatch-Up", "var": "var", "cut": "cut",
}
TERM_DUALS.update({v: k for k, v in list(TERM_DUALS.items())})
KIND_DUALS = {"expr": "coexpr", "coexpr": "expr", "pattern": "copattern", "copattern": "pattern",
              "command": "command"}


def dualize(s):
    """Swap every System L construct with its dual; an involution.

    Accepts a type, a raw term, a query, an atom declaration, or a list of
    directives.
    """
    if isinstance(s, (Atom, Con)):
        return dual_type(s)
    if isinstance(s, Term):
        if s.kind not in TERM_DUALS:
            raise ValueError(f"{s.kind} has no System L dual")
        return Term(TERM_DUALS[s.kind], tuple(dualize(c) for c in s.children), s.names,
                    None if s.ty is None else dual_type(s.ty), s.pos)
    if isinstance(s, AtomDecl):
        return replace(s, polarity=s.polarity.flip())
    if isinstance(s, Query):
        if s.family != "L":
            raise ValueError("lambda-calculus queries have no dual")
        ctx = tuple(
            CtxEntry(e.name, None if e.ty is None else dual_type(e.ty),
                     None if e.pol is None else e.pol.flip(), e.pos)
            for e in s.ctx
        )
        return replace(s, kind=KIND_DUALS[s.kind], ctx=ctx, term=dualize(s.term),
                       ty=None if s.ty is None else dual_type(s.ty))
    if isinstance(s, (list, tuple)):
        return [dualize(d) for d in s]
    raise TypeError(f"cannot dualize {type(s).__name__}")


def dual_ctx(ctx: TypedCtx) -> TypedCtx:
    return tuple(TEntry(e.name, e.pol.flip(), dual_type(e.ty)) for e in ctx)


__all__ = [
    "LChecker", "check_expr", "synth_pattern", "synth_copattern", "check_coexpr", "check_command",
    "run_l", "dualize", "dual_ctx",
]
