"""Types, contexts, covers, thinnings and the order on types.

Every value here is immutable and every function is pure, apart from the
optional instrumentation counters installed with :func:`recording`.

Types come in two families that never mix: the lambda family (plain atoms,
``->``, ``-o``, ``&``, ``+``, ``*``, ``1``, ``0``, ``I``, ``Top``) and the
polarised family of System L.  A type is either an :class:`Atom` or a
:class:`Con` node whose ``op`` is a key of :data:`CONNECTIVES`.

Covers are strings over ``L``/``R``/``B`` and thinnings strings over
``K``/``D``; position ``i`` of the string describes entry ``i`` of the
larger context.
"""

from __future__ import annotations

import contextlib
import enum
from collections import Counter
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Union

from .errors import IllFormedQuery, MergeConflict


class Polarity(enum.Enum):
    POS = "+"
    NEG = "-"
    PLAIN = "0"

    def flip(self) -> "Polarity":
        if self is Polarity.POS:
            return Polarity.NEG
        if self is Polarity.NEG:
            return Polarity.POS
        return self


POS, NEG, PLAIN = Polarity.POS, Polarity.NEG, Polarity.PLAIN


@dataclass(frozen=True)
class Connective:
    op: str
    symbol: str
    family: str  # "lam" or "L"
    result: Polarity
    args: tuple[Polarity, ...] = ()
    variance: tuple[int, ...] = ()
    dual: str | None = None


def _c(op, symbol, family, result, args=(), variance=None, dual=None):
    if variance is None:
        variance = (1,) * len(args)
    return Connective(op, symbol, family, result, tuple(args), tuple(variance), dual)


CONNECTIVES: dict[str, Connective] = {
    c.op: c
    for c in [
        # lambda family
        _c("unit1", "1", "lam", PLAIN),
        _c("zero0", "0", "lam", PLAIN),
        _c("lunit", "I", "lam", PLAIN),
        _c("top", "Top", "lam", PLAIN),
        _c("arrow", "->", "lam", PLAIN, (PLAIN, PLAIN), (-1, 1)),
        _c("lolli", "-o", "lam", PLAIN, (PLAIN, PLAIN), (-1, 1)),
        _c("prod", "&", "lam", PLAIN, (PLAIN, PLAIN)),
        _c("sum", "+", "lam", PLAIN, (PLAIN, PLAIN)),
        _c("ltensor", "*", "lam", PLAIN, (PLAIN, PLAIN)),
        # System L, positive
        _c("I", "I", "L", POS, dual="bot"),
        _c("zero", "0", "L", POS, dual="one"),
        _c("topp", "Top+", "L", POS, dual="topn"),
        _c("tensor", "*", "L", POS, (POS, POS), dual="par"),
        _c("plus", "+", "L", POS, (POS, POS), dual="with"),
        _c("sim", "~", "L", POS, (NEG,), dual="not"),
        _c("down", "down", "L", POS, (NEG,), dual="up"),
        _c("ddown", "Down", "L", POS, (NEG,), dual="uup"),
        # System L, negative
        _c("bot", "bot", "L", NEG, dual="I"),
        _c("one", "1", "L", NEG, dual="zero"),
        _c("topn", "Top-", "L", NEG, dual="topp"),
        _c("par", "par", "L", NEG, (NEG, NEG), dual="tensor"),
        _c("with", "&", "L", NEG, (NEG, NEG), dual="plus"),
        _c("not", "not", "L", NEG, (POS,), dual="sim"),
        _c("up", "up", "L", NEG, (POS,), dual="down"),
        _c("uup", "Up", "L", NEG, (POS,), dual="ddown"),
    ]
}

TOP_OPS = frozenset({"top", "topp", "topn"})


@dataclass(frozen=True)
class Atom:
    name: str
    polarity: Polarity = PLAIN

    def __repr__(self) -> str:
        return f"Atom({self.name}{'' if self.polarity is PLAIN else self.polarity.value})"


@dataclass(frozen=True)
class Con:
    op: str
    args: tuple["Type", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(map(repr, self.args))})"


Type = Union[Atom, Con]


# Constructors named after the connectives they build.
UNIT1 = Con("unit1")
ZERO0 = Con("zero0")
LUNIT = Con("lunit")
TOP = Con("top")
I = Con("I")
ZEROP = Con("zero")
TOP_POS = Con("topp")
BOT = Con("bot")
ONE = Con("one")
TOP_NEG = Con("topn")


def Arrow(a: Type, b: Type) -> Con:
    return Con("arrow", (a, b))


def Lolli(a: Type, b: Type) -> Con:
    return Con("lolli", (a, b))


def Prod(a: Type, b: Type) -> Con:
    return Con("prod", (a, b))


def Sum(a: Type, b: Type) -> Con:
    return Con("sum", (a, b))


def LTensor(a: Type, b: Type) -> Con:
    return Con("ltensor", (a, b))


def Tensor(a: Type, b: Type) -> Con:
    return Con("tensor", (a, b))


def Plus(a: Type, b: Type) -> Con:
    return Con("plus", (a, b))


def SimNeg(a: Type) -> Con:
    return Con("sim", (a,))


def DownShift(a: Type) -> Con:
    return Con("down", (a,))


def DDown(a: Type) -> Con:
    return Con("ddown", (a,))


def Par(a: Type, b: Type) -> Con:
    return Con("par", (a, b))


def With(a: Type, b: Type) -> Con:
    return Con("with", (a, b))


def NotNeg(a: Type) -> Con:
    return Con("not", (a,))


def UpShift(a: Type) -> Con:
    return Con("up", (a,))


def UUp(a: Type) -> Con:
    return Con("uup", (a,))


# ---------------------------------------------------------------------------
# Instrumentation

_probe: ContextVar[Counter | None] = ContextVar("polcheck_kernel_probe", default=None)


@contextlib.contextmanager
def recording() -> Iterator[Counter]:
    """Count order-theoretic calls made inside the ``with`` block.

    Keys: ``meet``, ``meet_top_arg`` (a meet with a top type as an argument),
    ``meet_top`` (a meet whose arguments mention a top type anywhere),
    ``subtype`` and ``subtype_nontrivial`` (a subtype query on unequal types).
    """
    stats: Counter = Counter()
    token = _probe.set(stats)
    try:
        yield stats
    finally:
        _probe.reset(token)


def _bump(key: str) -> None:
    stats = _probe.get()
    if stats is not None:
        stats[key] += 1


def note(key: str) -> None:
    """Count an event raised outside the kernel, such as a checker reading an annotation."""
    _bump(key)


# ---------------------------------------------------------------------------
# Basic queries


def polarity_of(t: Type) -> Polarity:
    if isinstance(t, Atom):
        return t.polarity
    return CONNECTIVES[t.op].result


def family_of(t: Type) -> str:
    if isinstance(t, Atom):
        return "lam" if t.polarity is PLAIN else "L"
    return CONNECTIVES[t.op].family


def sort_of(t: Type) -> tuple[str, Polarity]:
    return family_of(t), polarity_of(t)


def is_top(t: Type) -> bool:
    return isinstance(t, Con) and t.op in TOP_OPS


def contains_top(t: Type) -> bool:
    if isinstance(t, Atom):
        return False
    return t.op in TOP_OPS or any(contains_top(a) for a in t.args)


def top_of(pol: Polarity) -> Con:
    return {PLAIN: TOP, POS: TOP_POS, NEG: TOP_NEG}[pol]


def depth(t: Type) -> int:
    if isinstance(t, Atom) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def check_type(t: Type, family: str | None = None) -> None:
    """Raise :class:`IllFormedQuery` unless ``t`` is well polarised and single-family."""
    fam = family_of(t)
    if family is not None and fam != family:
        raise IllFormedQuery(f"type {show_type(t)} does not belong to the {family} family")
    if isinstance(t, Atom):
        return
    conn = CONNECTIVES.get(t.op)
    if conn is None or len(conn.args) != len(t.args):
        raise IllFormedQuery(f"malformed type node {t!r}")
    for want, arg in zip(conn.args, t.args):
        check_type(arg, fam)
        if polarity_of(arg) is not want:
            raise IllFormedQuery(
                f"{conn.symbol} expects a {_pol_word(want)} argument, got {show_type(arg)}"
            )


def _pol_word(p: Polarity) -> str:
    return {POS: "positive", NEG: "negative", PLAIN: "unpolarised"}[p]


def dual_type(t: Type) -> Type:
    if isinstance(t, Atom):
        if t.polarity is PLAIN:
            raise IllFormedQuery("lambda-calculus types have no dual")
        return Atom(t.name, t.polarity.flip())
    conn = CONNECTIVES[t.op]
    if conn.dual is None:
        raise IllFormedQuery("lambda-calculus types have no dual")
    return Con(conn.dual, tuple(dual_type(a) for a in t.args))


def show_type(t: Type) -> str:
    """Concrete syntax; compound operands are always parenthesised."""
    if isinstance(t, Atom):
        return t.name
    conn = CONNECTIVES.get(t.op)
    if conn is None:
        return repr(t)
    if not t.args:
        return conn.symbol

    def operand(a: Type) -> str:
        s = show_type(a)
        return s if isinstance(a, Atom) or not a.args else f"({s})"

    if len(t.args) == 1:
        sep = "" if conn.symbol == "~" else " "
        return f"{conn.symbol}{sep}{operand(t.args[0])}"
    return f"{operand(t.args[0])} {conn.symbol} {operand(t.args[1])}"


# ---------------------------------------------------------------------------
# The order: discrete on atoms, a top per polarity, congruent closure


def _same_sort(a: Type, b: Type) -> None:
    if sort_of(a) != sort_of(b):
        raise IllFormedQuery(
            f"cannot compare {show_type(a)} with {show_type(b)}: different family or polarity"
        )


def subtype(a: Type, b: Type) -> bool:
    """``a`` is below ``b``; function domains are contravariant."""
    _same_sort(a, b)
    _bump("subtype")
    if a != b:
        _bump("subtype_nontrivial")
    return _sub(a, b)


def _sub(a: Type, b: Type) -> bool:
    if is_top(b):
        return True
    if is_top(a) or isinstance(a, Atom) or isinstance(b, Atom):
        return a == b
    if a.op != b.op:
        return False
    variance = CONNECTIVES[a.op].variance
    return all(
        _sub(x, y) if v > 0 else _sub(y, x) for v, x, y in zip(variance, a.args, b.args)
    )


def meet(a: Type, b: Type) -> Type | None:
    """Greatest lower bound, or ``None`` when the two types have no common lower bound."""
    _same_sort(a, b)
    _bump("meet")
    if is_top(a) or is_top(b):
        _bump("meet_top_arg")
    if contains_top(a) or contains_top(b):
        _bump("meet_top")
    return _meet(a, b)


def join(a: Type, b: Type) -> Type:
    """Least upper bound.  Total: the top of the shared polarity bounds everything."""
    _same_sort(a, b)
    return _join(a, b)


def _meet(a: Type, b: Type) -> Type | None:
    if is_top(a):
        return b
    if is_top(b):
        return a
    if isinstance(a, Atom) or isinstance(b, Atom):
        return a if a == b else None
    if a.op != b.op:
        return None
    out = []
    for v, x, y in zip(CONNECTIVES[a.op].variance, a.args, b.args):
        r = _meet(x, y) if v > 0 else _join(x, y)
        if r is None:
            return None
        out.append(r)
    return Con(a.op, tuple(out))


def _join(a: Type, b: Type) -> Type:
    top = top_of(polarity_of(a))
    if is_top(a) or is_top(b):
        return top
    if isinstance(a, Atom) or isinstance(b, Atom):
        return a if a == b else top
    if a.op != b.op:
        return top
    out = []
    for v, x, y in zip(CONNECTIVES[a.op].variance, a.args, b.args):
        r = _join(x, y) if v > 0 else _meet(x, y)
        if r is None:
            # no lower bound for a contravariant component: only top is above both
            return top
        out.append(r)
    return Con(a.op, tuple(out))


# ---------------------------------------------------------------------------
# Contexts


class Entry(NamedTuple):
    name: str
    pol: Polarity = PLAIN

    def show(self) -> str:
        return self.name if self.pol is PLAIN else f"{self.name}{self.pol.value}"


class TEntry(NamedTuple):
    name: str
    pol: Polarity
    ty: Type

    def show(self) -> str:
        tag = "" if self.pol is PLAIN else self.pol.value
        return f"{self.name}{tag} : {show_type(self.ty)}"


ScopedCtx = tuple[Entry, ...]
TypedCtx = tuple[TEntry, ...]


def erase(ctx: Sequence[TEntry]) -> ScopedCtx:
    return tuple(Entry(e.name, e.pol) for e in ctx)


def show_ctx(ctx: Sequence[Entry | TEntry]) -> str:
    return ", ".join(e.show() for e in ctx)


@dataclass(frozen=True)
class StructConfig:
    """Which context classes admit discarding (thinning ``D``) and copying (cover ``B``).

    The four flags name the System L contexts: positive inputs, positive
    outputs, negative inputs, negative outputs.  Lambda calculi read
    ``gamma_pos`` only.  ``uup``/``ddown`` enable the LNL modalities.
    """

    gamma_pos: bool = False
    delta_pos: bool = False
    gamma_neg: bool = False
    delta_neg: bool = False
    uup: bool = False
    ddown: bool = False
    name: str = "custom"

    def allows(self, pol: Polarity, side: str) -> bool:
        if pol is PLAIN:
            return self.gamma_pos
        if side == "sigma":
            return self.gamma_pos if pol is POS else self.delta_neg
        return self.delta_pos if pol is POS else self.gamma_neg

    @property
    def lambda_cartesian(self) -> bool:
        return self.gamma_pos

    def dual(self) -> "StructConfig":
        flags = (self.delta_neg, self.gamma_neg, self.delta_pos, self.gamma_pos, self.ddown, self.uup)
        for preset in PRESETS.values():
            if (preset.gamma_pos, preset.delta_pos, preset.gamma_neg, preset.delta_neg,
                    preset.uup, preset.ddown) == flags:
                return preset
        return StructConfig(*flags, name=f"dual-{self.name}")


LINEAR = StructConfig(name="linear")
CARTESIAN = StructConfig(True, True, True, True, name="cartesian")
LNL_BANG = StructConfig(gamma_neg=True, uup=True, name="lnl-bang")
LNL_FULL = StructConfig(delta_pos=True, gamma_neg=True, uup=True, ddown=True, name="lnl-full")

PRESETS: dict[str, StructConfig] = {p.name: p for p in (LINEAR, CARTESIAN, LNL_BANG, LNL_FULL)}


# ---------------------------------------------------------------------------
# Covers and thinnings


def _validate(steps: str, alphabet: str, what: str) -> None:
    bad = set(steps) - set(alphabet)
    if bad:
        raise IllFormedQuery(f"{what} contains invalid steps {''.join(sorted(bad))}")


def split(cover: str, ctx: Sequence) -> tuple[tuple, tuple]:
    """Split ``ctx`` along ``cover``: ``L`` entries go left, ``R`` right, ``B`` to both."""
    _validate(cover, "LRB", "cover")
    if len(cover) != len(ctx):
        raise IllFormedQuery(f"cover of length {len(cover)} applied to context of length {len(ctx)}")
    left = tuple(e for s, e in zip(cover, ctx) if s in "LB")
    right = tuple(e for s, e in zip(cover, ctx) if s in "RB")
    return left, right


split_scoped = split


def merge_scoped(cover: str, g1: Sequence[Entry], g2: Sequence[Entry]) -> ScopedCtx:
    out = []
    i = j = 0
    for s in cover:
        if s == "L":
            out.append(g1[i]); i += 1
        elif s == "R":
            out.append(g2[j]); j += 1
        else:
            out.append(g1[i]); i += 1; j += 1
    if i != len(g1) or j != len(g2):
        raise IllFormedQuery("cover does not match the contexts being merged")
    return tuple(out)


def merge_typed(cover: str, g1: Sequence[TEntry], g2: Sequence[TEntry], pos=None) -> TypedCtx:
    """Combine two typed contexts along a scoped cover; shared entries take the meet."""
    _validate(cover, "LRB", "cover")
    if len(g1) != cover.count("L") + cover.count("B") or len(g2) != cover.count("R") + cover.count("B"):
        raise IllFormedQuery("cover does not match the contexts being merged")
    out = []
    i = j = 0
    for s in cover:
        if s == "L":
            out.append(g1[i]); i += 1
        elif s == "R":
            out.append(g2[j]); j += 1
        else:
            a, b = g1[i], g2[j]
            i += 1; j += 1
            if (a.name, a.pol) != (b.name, b.pol):
                raise IllFormedQuery(f"cover pairs {a.name} with {b.name}")
            m = meet(a.ty, b.ty)
            if m is None:
                raise MergeConflict(a.name, a.ty, b.ty, pos)
            out.append(TEntry(a.name, a.pol, m))
    return tuple(out)


def restrict(thinning: str, ctx: Sequence) -> tuple:
    """Keep the entries marked ``K``."""
    _validate(thinning, "KD", "thinning")
    if len(thinning) != len(ctx):
        raise IllFormedQuery(f"thinning of length {len(thinning)} applied to context of length {len(ctx)}")
    return tuple(e for s, e in zip(thinning, ctx) if s == "K")


restrict_scoped = restrict


def extend_typed(thinning: str, g1: Sequence[TEntry], target: Sequence[Entry]) -> TypedCtx:
    """Re-insert dropped entries of ``target`` with the top type of their polarity."""
    _validate(thinning, "KD", "thinning")
    if len(thinning) != len(target) or thinning.count("K") != len(g1):
        raise IllFormedQuery("thinning arity does not match the contexts")
    out = []
    it = iter(g1)
    for s, e in zip(thinning, target):
        if s == "K":
            t = next(it)
            if t.name != e.name:
                raise IllFormedQuery(f"thinning pairs {t.name} with {e.name}")
            out.append(t)
        else:
            out.append(TEntry(e.name, e.pol, top_of(e.pol)))
    return tuple(out)


def thinning_between(small: Sequence[Entry], big: Sequence[Entry]) -> str:
    """The unique order-preserving thinning embedding ``small`` into ``big``."""
    out = []
    it = iter(small)
    nxt = next(it, None)
    for e in big:
        if nxt is not None and nxt == e:
            out.append("K")
            nxt = next(it, None)
        else:
            out.append("D")
    if nxt is not None:
        raise IllFormedQuery("context is not a sub-context")
    return "".join(out)


def illegal_cover_entry(cover: str, ctx: Sequence[Entry], cfg: StructConfig, side: str) -> Entry | None:
    for s, e in zip(cover, ctx):
        if s == "B" and not cfg.allows(e.pol, side):
            return e
    return None


def illegal_thinning_entry(thinning: str, ctx: Sequence[Entry], cfg: StructConfig, side: str) -> Entry | None:
    for s, e in zip(thinning, ctx):
        if s == "D" and not cfg.allows(e.pol, side):
            return e
    return None
