"""Declarative typing rules, read relationally.

Each rule contributes equations and delayed constraints instead of computing
types in a fixed direction: a cut, for instance, asks for some type ``A``
that the left side has and the right side has, without deciding who goes
first.  Annotations are not trusted while deriving: each one becomes a fresh
metavariable, recorded next to the written type so callers can filter
afterwards.
"""

from __future__ import annotations

from ..kernel import (
    BOT, CONNECTIVES, I, LUNIT, NEG, ONE, PLAIN, POS, UNIT1, ZERO0, ZEROP, Con, Polarity,
    StructConfig, TEntry, TypedCtx, Type, restrict, split, top_of,
)
from ..scope import LAMBDA_STANDARD, Elaborated, Node
from .solver import JudgementSet, Meta, Unsatisfiable, unify
from .universe import TypeUniverse, universe_for

_ANNOTATED = ("annot", "match-down", "comatch-up", "Up", "Down")


class _Rules:
    def __init__(self, cfg: StructConfig, family: str, cocontextual: bool, blind: bool):
        self.cfg = cfg
        self.family = family
        self.cocontextual = cocontextual
        self.blind = blind
        self.subst: dict = {}
        self.goals: list = []
        self.annotations: list = []
        self.counter = 0

    # plumbing

    def fresh(self, pol: Polarity = PLAIN) -> Meta:
        self.counter += 1
        return Meta(self.counter, ("lam" if pol is PLAIN else "L", pol))

    def eq(self, a, b) -> None:
        if not unify(a, b, self.subst):
            raise Unsatisfiable

    def con(self, op: str, *args):
        return Con(op, tuple(args))

    def shape(self, ty, op: str) -> list:
        """Require ``ty`` to be built by ``op``; return its (fresh) arguments."""
        conn = CONNECTIVES[op]
        args = [self.fresh(p) for p in conn.args]
        self.eq(ty, Con(op, tuple(args)))
        return args

    def sub(self, a, b) -> None:
        self.goals.append(("sub", a, b))

    def annotation(self, node: Node, pol: Polarity):
        if not self.blind:
            return node.ty
        m = self.fresh(pol)
        self.annotations.append((m, node.ty, node.kind))
        return m

    def merge(self, cover: str, g1: list, g2: list) -> list:
        out, i, j = [], 0, 0
        for step in cover:
            if step == "L":
                out.append(g1[i]); i += 1
            elif step == "R":
                out.append(g2[j]); j += 1
            else:
                (n, p, a), (_, _, b) = g1[i], g2[j]
                i += 1; j += 1
                c = self.fresh(p)
                self.goals.append(("meet", a, b, c))
                out.append((n, p, c))
        return out

    def unbind(self, body: list, thin: str, names, pol: Polarity) -> tuple[list, list]:
        kept = thin.count("K")
        rest, bound = body[:len(body) - kept], iter(body[len(body) - kept:])
        tys = [next(bound)[2] if step == "K" else top_of(pol) for step in thin]
        return rest, tys

    def extend(self, thin: str, ctx: list, target) -> list:
        it = iter(ctx)
        return [next(it) if step == "K" else (e.name, e.pol, top_of(e.pol)) for step, e in zip(thin, target)]

    def fun(self, a, b):
        return self.con("arrow" if self.cfg.gamma_pos else "lolli", a, b)

    # standard lambda calculus: Γ is an input

    def std_chk(self, node: Node, env: dict, ty) -> None:
        k = node.kind
        if k == "emb":
            self.sub(ty, self.std_syn(node.children[0], env))
        elif k == "lam":
            a, b = self.shape(ty, "arrow")
            self.std_chk(node.children[0], {**env, node.names[0]: a}, b)
        elif k == "unit":
            self.eq(ty, UNIT1)
        elif k == "pair":
            a, b = self.shape(ty, "prod")
            self.std_chk(node.children[0], env, a)
            self.std_chk(node.children[1], env, b)
        elif k in ("inl", "inr"):
            a, b = self.shape(ty, "sum")
            self.std_chk(node.children[0], env, a if k == "inl" else b)
        elif k == "absurd":
            self.std_chk(node.children[0], env, ZERO0)
        elif k == "case":
            a, b = self.shape(self.std_syn(node.children[0], env), "sum")
            self.std_chk(node.children[1], {**env, node.names[0]: a}, ty)
            self.std_chk(node.children[2], {**env, node.names[1]: b}, ty)
        else:
            raise Unsatisfiable

    def std_syn(self, node: Node, env: dict):
        k = node.kind
        if k == "var":
            if node.names[0] not in env:
                raise Unsatisfiable
            return env[node.names[0]]
        if k == "annot":
            a = self.annotation(node, PLAIN)
            self.std_chk(node.children[0], env, a)
            return a
        if k == "app":
            a, b = self.shape(self.std_syn(node.children[0], env), "arrow")
            self.std_chk(node.children[1], env, a)
            return b
        if k in ("pi1", "pi2"):
            a, b = self.shape(self.std_syn(node.children[0], env), "prod")
            return a if k == "pi1" else b
        raise Unsatisfiable

    # cocontextual lambda calculus: Γ is an output

    def co_chk(self, node: Node, ty) -> list:
        k = node.kind
        if k == "var":
            return [(node.names[0], PLAIN, ty)]
        if k == "emb":
            found, g = self.co_syn(node.children[0])
            self.sub(ty, found)
            return g
        if k == "app":
            a, g2 = self.co_syn(node.children[1])
            g1 = self.co_chk(node.children[0], self.fun(a, ty))
            return self.merge(node.cover, g1, g2)
        raise Unsatisfiable

    def co_syn(self, node: Node):
        k = node.kind
        if k == "annot":
            a = self.annotation(node, PLAIN)
            return a, self.co_chk(node.children[0], a)
        if k == "unit":
            return LUNIT, []
        if k == "lam":
            b, body = self.co_syn(node.children[0])
            rest, (a,) = self.unbind(body, node.thin[0], node.names, PLAIN)
            return self.fun(a, b), rest
        if k == "pair":
            a, g1 = self.co_syn(node.children[0])
            b, g2 = self.co_syn(node.children[1])
            return self.con("ltensor", a, b), self.merge(node.cover, g1, g2)
        if k == "letunit":
            g1 = self.co_chk(node.children[0], LUNIT)
            a, g2 = self.co_syn(node.children[1])
            return a, self.merge(node.cover, g1, g2)
        if k == "letpair":
            c, body = self.co_syn(node.children[1])
            g2, (a, b) = self.unbind(body, node.thin[1], node.names, PLAIN)
            g1 = self.co_chk(node.children[0], self.con("ltensor", a, b))
            return c, self.merge(node.cover, g1, g2)
        raise Unsatisfiable

    # System L: X is an input, Σ an output

    def lookup(self, x: list, name: str):
        for n, _, t in x:
            if n == name:
                return t
        raise Unsatisfiable

    def bind_x(self, x: list, node: Node, pol: Polarity, ty) -> list:
        return x + [(node.names[0], pol, ty)] if node.xthin == "K" else x

    def gate(self, flag: str) -> None:
        if not getattr(self.cfg, flag):
            raise Unsatisfiable

    def branches(self, node: Node, x: list, pol: Polarity) -> tuple[list, list]:
        xs = split(node.xcover, x)
        found, sigmas = [], []
        for i, body in enumerate(node.children):
            rest, (t,) = self.unbind(self.cmd(body, list(xs[i])), node.thin[i], node.names[i:i + 1], pol)
            found.append(t)
            sigmas.append(self.extend(node.share[i], rest, node.ctx))
        return found, self.merge("B" * len(node.ctx), sigmas[0], sigmas[1])

    def expr(self, node: Node, x: list, ty) -> list:
        k = node.kind
        if k == "var":
            return [(node.names[0], POS, ty)]
        if k == "mu+":
            return self.cmd(node.children[0], self.bind_x(x, node, POS, ty))
        if k == "unit":
            self.eq(ty, I)
            return []
        if k == "tuple":
            a, b = self.shape(ty, "tensor")
            x1, x2 = split(node.xcover, x)
            return self.merge(node.cover, self.expr(node.children[0], list(x1), a),
                              self.expr(node.children[1], list(x2), b))
        if k in ("inl", "inr"):
            a, b = self.shape(ty, "plus")
            return self.expr(node.children[0], x, a if k == "inl" else b)
        if k == "sim":
            (a,) = self.shape(ty, "sim")
            return self.coexpr(node.children[0], x, a)
        if k == "down":
            (a,) = self.shape(ty, "down")
            b, s = self.copattern(node.children[0], x)
            self.sub(a, b)
            return s
        if k == "match-Down":
            self.gate("ddown")
            (a,) = self.shape(ty, "ddown")
            rest, (b,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, NEG)
            self.sub(a, b)
            return rest
        raise Unsatisfiable

    def pattern(self, node: Node, x: list):
        k = node.kind
        if k == "var":
            return self.lookup(x, node.names[0]), []
        if k == "mut+":
            rest, (a,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, POS)
            return a, rest
        if k == "match-unit":
            return I, self.cmd(node.children[0], x)
        if k == "match-pair":
            rest, (a, b) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, POS)
            return self.con("tensor", a, b), rest
        if k == "match-zero":
            return ZEROP, [(e.name, e.pol, top_of(e.pol)) for e in node.ctx]
        if k == "match-sum":
            (a, b), s = self.branches(node, x, POS)
            return self.con("plus", a, b), s
        if k == "match-sim":
            rest, (a,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, NEG)
            return self.con("sim", a), rest
        if k == "match-down":
            a = self.annotation(node, NEG)
            return self.con("down", a), self.cmd(node.children[0], self.bind_x(x, node, NEG, a))
        if k == "Down":
            self.gate("ddown")
            a = self.annotation(node, NEG)
            return self.con("ddown", a), self.coexpr(node.children[0], x, a)
        raise Unsatisfiable

    def copattern(self, node: Node, x: list):
        k = node.kind
        if k == "var":
            return self.lookup(x, node.names[0]), []
        if k == "mu-":
            rest, (a,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, NEG)
            return a, rest
        if k == "comatch-bot":
            return BOT, self.cmd(node.children[0], x)
        if k == "comatch-par":
            rest, (a, b) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, NEG)
            return self.con("par", a, b), rest
        if k == "comatch-one":
            return ONE, [(e.name, e.pol, top_of(e.pol)) for e in node.ctx]
        if k == "comatch-with":
            (a, b), s = self.branches(node, x, NEG)
            return self.con("with", a, b), s
        if k == "comatch-not":
            rest, (a,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, POS)
            return self.con("not", a), rest
        if k == "comatch-up":
            a = self.annotation(node, POS)
            return self.con("up", a), self.cmd(node.children[0], self.bind_x(x, node, POS, a))
        if k == "Up":
            self.gate("uup")
            a = self.annotation(node, POS)
            return self.con("uup", a), self.expr(node.children[0], x, a)
        raise Unsatisfiable

    def coexpr(self, node: Node, x: list, ty) -> list:
        k = node.kind
        if k == "var":
            return [(node.names[0], NEG, ty)]
        if k == "mut-":
            return self.cmd(node.children[0], self.bind_x(x, node, NEG, ty))
        if k == "counit":
            self.eq(ty, BOT)
            return []
        if k == "cotuple":
            a, b = self.shape(ty, "par")
            x1, x2 = split(node.xcover, x)
            return self.merge(node.cover, self.coexpr(node.children[0], list(x1), a),
                              self.coexpr(node.children[1], list(x2), b))
        if k in ("pi1", "pi2"):
            a, b = self.shape(ty, "with")
            return self.coexpr(node.children[0], x, a if k == "pi1" else b)
        if k == "not":
            (a,) = self.shape(ty, "not")
            return self.expr(node.children[0], x, a)
        if k == "up":
            (a,) = self.shape(ty, "up")
            b, s = self.pattern(node.children[0], x)
            self.sub(b, a)
            return s
        if k == "comatch-Up":
            self.gate("uup")
            (a,) = self.shape(ty, "uup")
            rest, (b,) = self.unbind(self.cmd(node.children[0], x), node.thin[0], node.names, POS)
            self.sub(b, a)
            return rest
        raise Unsatisfiable

    def cmd(self, node: Node, x: list) -> list:
        if node.kind != "cut":
            raise Unsatisfiable
        x1, x2 = split(node.xcover, x)
        a = self.fresh(node.polarity)
        left, right = node.children
        # the left premise first, as the rule is written
        if node.polarity is POS:
            s1 = self.expr(left, list(x1), a)
            b, s2 = self.pattern(right, list(x2))
        else:
            s1 = self.coexpr(left, list(x1), a)
            b, s2 = self.copattern(right, list(x2))
        self.eq(a, b)
        return self.merge(node.cover, s1, s2)


def derive_all(
    el: Elaborated,
    universe: TypeUniverse | None = None,
    cfg: StructConfig | None = None,
    x: TypedCtx | None = None,
    ty: Type | None = None,
    blind: bool = True,
    respect_annotations: bool = True,
    free_inputs: bool = False,
) -> JudgementSet:
    """The judgements derivable for the elaborated query ``el``.

    Inputs default to the query's own: its typed context and, for checked
    queries, its type.  ``x``/``ty`` override them; ``free_inputs`` leaves
    them as metavariables instead (used to invent types for generated
    queries).  With ``blind`` set annotations are solved for rather than
    read, then filtered against the written ones unless
    ``respect_annotations`` is false.
    """
    cfg = cfg or el.cfg
    universe = universe or universe_for(el.calculus)
    q = el.query
    family = el.family
    cocontextual = family == "lam" and el.calculus != LAMBDA_STANDARD
    r = _Rules(cfg, family, cocontextual, blind)
    pol_of_kind = {"expr": POS, "coexpr": NEG, "lambda-check": PLAIN}

    typed = el.typed if x is None else tuple(x)
    if free_inputs:
        typed = tuple(TEntry(e.name, e.pol, r.fresh(e.pol)) for e in typed)
    root_ty = q.ty if ty is None else ty
    if free_inputs and q.kind in pol_of_kind:
        root_ty = r.fresh(pol_of_kind[q.kind])

    out_ty = out_ctx = None
    try:
        if family == "lam" and not cocontextual:
            env = {e.name: e.ty for e in typed}
            if q.kind == "lambda-check":
                r.std_chk(el.root, env, root_ty)
            else:
                out_ty = r.std_syn(el.root, env)
        elif cocontextual:
            if q.kind == "lambda-check":
                g = r.co_chk(el.root, root_ty)
            else:
                out_ty, g = r.co_syn(el.root)
            out_ctx = r.extend(el.thin, g, el.sigma)
        else:
            xs = [(e.name, e.pol, e.ty) for e in restrict(el.xthin, typed)]
            if q.kind == "expr":
                s = r.expr(el.root, xs, root_ty)
            elif q.kind == "coexpr":
                s = r.coexpr(el.root, xs, root_ty)
            elif q.kind == "pattern":
                out_ty, s = r.pattern(el.root, xs)
            elif q.kind == "copattern":
                out_ty, s = r.copattern(el.root, xs)
            else:
                s = r.cmd(el.root, xs)
            out_ctx = r.extend(el.thin, s, el.sigma)
        subst = r.subst
    except Unsatisfiable:
        subst = None
    js = JudgementSet(subst, r.goals, out_ty, out_ctx, universe, r.annotations, (typed, root_ty))
    if blind and respect_annotations:
        return js.respecting_annotations()
    return js
