"""Bidirectional checkers for the three lambda calculi.

The standard checker takes a typed context as input.  The cocontextual
checker (linear or cartesian, depending on the structural configuration)
takes only the scoped context and synthesises the typed one, combining the
contexts of subterms along the covers recorded during scope elaboration.
"""

from __future__ import annotations

from .errors import CheckError
from .kernel import (
    LUNIT, UNIT1, ZERO0, Arrow, Con, Entry, LTensor, Lolli, PLAIN, ScopedCtx, StructConfig,
    TEntry, Type, TypedCtx, extend_typed, merge_typed, show_type, subtype,
)
from .scope import Elaborated, LAMBDA_STANDARD, Node


def _mismatch(expected: Type, found: Type, node: Node) -> CheckError:
    return CheckError(f"expected {show_type(expected)} but found {show_type(found)}", node.pos, code="mismatch")


def _expect(ty: Type, op: str, node: Node, what: str, code: str = "mismatch") -> Con:
    if isinstance(ty, Con) and ty.op == op:
        return ty
    raise CheckError(f"{node.kind} needs {what} but the expected type is {show_type(ty)}", node.pos, code=code)


# ---------------------------------------------------------------------------
# Standard (contextual) checker


def check_standard(gamma: TypedCtx | dict[str, Type], ty: Type, node: Node) -> None:
    """Check ``node`` against ``ty`` in the typed context ``gamma``; raise on failure."""
    env = gamma if isinstance(gamma, dict) else {e.name: e.ty for e in gamma}
    k = node.kind
    if k == "emb":
        found = synth_standard(env, node.children[0])
        if not subtype(ty, found):
            raise _mismatch(ty, found, node)
    elif k == "lam":
        fn = _expect(ty, "arrow", node, "a function type", code="not-a-function")
        check_standard({**env, node.names[0]: fn.args[0]}, fn.args[1], node.children[0])
    elif k == "unit":
        if ty != UNIT1:
            raise _mismatch(ty, UNIT1, node)
    elif k == "pair":
        prod = _expect(ty, "prod", node, "a product type")
        check_standard(env, prod.args[0], node.children[0])
        check_standard(env, prod.args[1], node.children[1])
    elif k in ("inl", "inr"):
        s = _expect(ty, "sum", node, "a sum type")
        check_standard(env, s.args[0 if k == "inl" else 1], node.children[0])
    elif k == "absurd":
        check_standard(env, ZERO0, node.children[0])
    elif k == "case":
        s = synth_standard(env, node.children[0])
        if not (isinstance(s, Con) and s.op == "sum"):
            raise CheckError(f"case scrutinee has type {show_type(s)}, which is not a sum", node.pos,
                             code="not-a-sum")
        x, y = node.names
        check_standard({**env, x: s.args[0]}, ty, node.children[1])
        check_standard({**env, y: s.args[1]}, ty, node.children[2])
    else:
        raise CheckError(f"{k} is not checkable", node.pos, code="mode")


def synth_standard(gamma: TypedCtx | dict[str, Type], node: Node) -> Type:
    env = gamma if isinstance(gamma, dict) else {e.name: e.ty for e in gamma}
    k = node.kind
    if k == "var":
        name = node.names[0]
        if name not in env:
            raise CheckError(f"unbound variable {name}", node.pos, code="unbound")
        return env[name]
    if k == "annot":
        check_standard(env, node.ty, node.children[0])
        return node.ty
    if k == "app":
        fn = synth_standard(env, node.children[0])
        if not (isinstance(fn, Con) and fn.op == "arrow"):
            raise CheckError(f"applied term has type {show_type(fn)}, which is not a function", node.pos,
                             code="not-a-function")
        check_standard(env, fn.args[0], node.children[1])
        return fn.args[1]
    if k in ("pi1", "pi2"):
        p = synth_standard(env, node.children[0])
        if not (isinstance(p, Con) and p.op == "prod"):
            raise CheckError(f"projection from {show_type(p)}, which is not a product", node.pos,
                             code="not-a-product")
        return p.args[0 if k == "pi1" else 1]
    raise CheckError(f"{k} does not synthesise", node.pos, code="mode")


# ---------------------------------------------------------------------------
# Cocontextual checker


def _fun(cfg: StructConfig):
    return Arrow if cfg.gamma_pos else Lolli


def _split_bound(body_ctx: TypedCtx, thin: str, names) -> tuple[TypedCtx, list[Type]]:
    """Separate the trailing bound variables from a body's synthesised context."""
    kept = thin.count("K")
    rest, bound = body_ctx[:len(body_ctx) - kept], body_ctx[len(body_ctx) - kept:]
    full = extend_typed(thin, bound, [Entry(n, PLAIN) for n in names])
    return rest, [e.ty for e in full]


def _co_check(node: Node, ty: Type, cfg: StructConfig) -> TypedCtx:
    k = node.kind
    if k == "var":
        return (TEntry(node.names[0], PLAIN, ty),)
    if k == "emb":
        found, ctx = _co_synth(node.children[0], cfg)
        if not subtype(ty, found):
            raise _mismatch(ty, found, node)
        return ctx
    if k == "app":
        a, g2 = _co_synth(node.children[1], cfg)
        g1 = _co_check(node.children[0], _fun(cfg)(a, ty), cfg)
        return merge_typed(node.cover, g1, g2, node.pos)
    raise CheckError(f"{k} is not checkable", node.pos, code="mode")


def _co_synth(node: Node, cfg: StructConfig) -> tuple[Type, TypedCtx]:
    k = node.kind
    if k == "annot":
        return node.ty, _co_check(node.children[0], node.ty, cfg)
    if k == "unit":
        return LUNIT, ()
    if k == "lam":
        b, body = _co_synth(node.children[0], cfg)
        rest, (a,) = _split_bound(body, node.thin[0], node.names)
        return _fun(cfg)(a, b), rest
    if k == "pair":
        a, g1 = _co_synth(node.children[0], cfg)
        b, g2 = _co_synth(node.children[1], cfg)
        return LTensor(a, b), merge_typed(node.cover, g1, g2, node.pos)
    if k == "letunit":
        g1 = _co_check(node.children[0], LUNIT, cfg)
        a, g2 = _co_synth(node.children[1], cfg)
        return a, merge_typed(node.cover, g1, g2, node.pos)
    if k == "letpair":
        c, body = _co_synth(node.children[1], cfg)
        g2, (a, b) = _split_bound(body, node.thin[1], node.names)
        g1 = _co_check(node.children[0], LTensor(a, b), cfg)
        return c, merge_typed(node.cover, g1, g2, node.pos)
    raise CheckError(f"{k} does not synthesise", node.pos, code="mode")


def _over(ctx: TypedCtx, scoped: ScopedCtx | None, node: Node) -> TypedCtx:
    if scoped is None:
        return ctx
    names = [e.name for e in scoped]
    if names != [e.name for e in node.ctx]:
        raise ValueError(f"scoped context {names} does not match the term's context")
    return ctx


def check_cocontextual(scoped: ScopedCtx | None, ty: Type, node: Node, cfg: StructConfig) -> TypedCtx:
    """Check ``node`` at ``ty``; return the synthesised context over ``node.ctx``."""
    return _over(_co_check(node, ty, cfg), scoped, node)


def synth_cocontextual(scoped: ScopedCtx | None, node: Node, cfg: StructConfig) -> tuple[Type, TypedCtx]:
    ty, ctx = _co_synth(node, cfg)
    return ty, _over(ctx, scoped, node)


# ---------------------------------------------------------------------------
# Query driver


def run_lambda(el: Elaborated) -> tuple[Type | None, TypedCtx | None]:
    """Typecheck a lambda query.

    Returns the synthesised type (``None`` for check queries) and, for the
    cocontextual calculi, the typed context over the query's whole context
    with unused entries at ``Top``.
    """
    q = el.query
    if el.calculus == LAMBDA_STANDARD:
        if q.kind == "lambda-check":
            check_standard(el.typed, q.ty, el.root)
            return None, None
        return synth_standard(el.typed, el.root), None
    if q.kind == "lambda-check":
        ty, ctx = None, _co_check(el.root, q.ty, el.cfg)
    else:
        ty, ctx = _co_synth(el.root, el.cfg)
    return ty, extend_typed(el.thin, ctx, el.sigma)


__all__ = [
    "check_standard", "synth_standard", "check_cocontextual", "synth_cocontextual", "run_lambda",
]
