"""Concrete syntax: lexer, parser and printer for types, terms and ``.pl0`` programs.

A program is a sequence of ``;``-terminated directives.  Atom declarations
fix the polarity of type atoms; queries name a judgement kind, a context, a
term and (for checkable kinds) a type::

    atom P positive;
    command [k : P] < x | k >;
    lambda-check [] \\x. x : P -> P;

Typed context entries populate the checkable side, bare names the
synthesisable side.  A bare name may carry a polarity suffix (``x+``,
``y-``); without one its polarity is inferred from use during scope
elaboration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import ParseError
from .kernel import (
    BOT, CONNECTIVES, I, LUNIT, NEG, ONE, PLAIN, POS, TOP, TOP_NEG, TOP_POS, UNIT1, ZERO0, ZEROP,
    Atom, Con, Polarity, Type, show_type,
)

LAMBDA_KINDS = ("lambda-check", "lambda-synth")
L_KINDS = ("expr", "pattern", "copattern", "coexpr", "command")
QUERY_KINDS = LAMBDA_KINDS + L_KINDS
TYPED_KINDS = frozenset({"lambda-check", "expr", "coexpr"})

# Term kinds that carry a type annotation.
ANNOTATION_KINDS = frozenset({"annot", "match-down", "comatch-up", "Up", "Down"})

DEFAULT_L_ATOMS: dict[str, Polarity] = {"P": POS, "Q": POS, "N": NEG, "M": NEG}

_KEYWORDS = frozenset(
    """atom positive negative plain expr pattern copattern coexpr command match comatch
    inl inr pi1 pi2 not down up Down Up case of let in absurd I bot par Top""".split()
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<kw>lambda-check|lambda-synth|mut\+|mut-|mu\+|mu-|Top\+|Top-(?!>))
  | (?P<arrow>->)
  | (?P<lolli>-o(?![A-Za-z0-9_']))
  | (?P<fat>=>)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[01](?![0-9]))
  | (?P<sym>[()\[\]{}<>|,;:.\\*+&~!?=-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", "sym" or "eof"
    text: str
    line: int
    col: int
    start: int
    end: int

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    line, line_start = 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", (line, i - line_start + 1))
        group = m.lastgroup
        s = m.group()
        if group not in ("ws", "comment"):
            if group == "ident":
                kind = "kw" if s in _KEYWORDS else "ident"
            elif group in ("kw",):
                kind = "kw"
            else:
                kind = "sym"
            tokens.append(Token(kind, s, line, i - line_start + 1, i, m.end()))
        for j, ch in enumerate(s):
            if ch == "\n":
                line += 1
                line_start = i + j + 1
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1, i, i))
    return tokens


# ---------------------------------------------------------------------------
# Syntax trees


@dataclass(frozen=True)
class Term:
    """Raw named syntax shared by every calculus; ``kind`` selects the construct."""

    kind: str
    children: tuple["Term", ...] = ()
    names: tuple[str, ...] = ()
    ty: Type | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AtomDecl:
    name: str
    polarity: Polarity
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CtxEntry:
    name: str
    ty: Type | None = None
    pol: Polarity | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False)

    @property
    def typed(self) -> bool:
        return self.ty is not None


@dataclass(frozen=True)
class Query:
    kind: str
    ctx: tuple[CtxEntry, ...]
    term: Term
    ty: Type | None = None
    calculus: str | None = None
    preset: str | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False)

    @property
    def family(self) -> str:
        return "lam" if self.kind in LAMBDA_KINDS else "L"


Directive = Union[AtomDecl, Query]


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in t.children)


def iter_terms(t: Term) -> Iterable[Term]:
    yield t
    for c in t.children:
        yield from iter_terms(c)


def annotation_count(t: Term) -> int:
    return sum(1 for s in iter_terms(t) if s.kind in ANNOTATION_KINDS)


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str, atoms: Mapping[str, Polarity] | None = None, allow_top: bool = False):
        self.tokens = tokenize(text)
        self.i = 0
        self.atoms: dict[str, Polarity] = dict(atoms or {})
        # System L falls back to the conventional atoms when none is declared
        self.l_defaults = DEFAULT_L_ATOMS if atoms is None else {}
        self.allow_top = allow_top

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind != "eof" and t.kind != "ident" and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{msg}, found {found}", tok.pos)

    def expect(self, text: str, what: str | None = None) -> Token:
        if not self.at(text):
            raise self.error(f"expected {what or repr(text)}")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}")
        return self.advance()

    # types

    def parse_type(self, family: str) -> Type:
        left = self.type_sum(family)
        if self.at("->", "-o"):
            op = self.advance()
            right = self.parse_type(family)
            if family != "lam":
                raise ParseError(f"{op.text} is not a System L connective", op.pos)
            return Con("arrow" if op.text == "->" else "lolli", (left, right))
        return left

    def type_sum(self, family: str) -> Type:
        left = self.type_prod(family)
        while self.at("+"):
            op = self.advance()
            right = self.type_prod(family)
            left = self._binary(family, op, left, right)
        return left

    def type_prod(self, family: str) -> Type:
        left = self.type_unary(family)
        while self.at("*", "par", "&"):
            op = self.advance()
            right = self.type_unary(family)
            left = self._binary(family, op, left, right)
        return left

    _LAM_BINARY = {"*": "ltensor", "&": "prod", "+": "sum"}
    _L_BINARY = {"*": "tensor", "par": "par", "&": "with", "+": "plus"}
    _L_UNARY = {"~": "sim", "not": "not", "down": "down", "up": "up", "Down": "ddown", "Up": "uup"}

    def _binary(self, family: str, op: Token, left: Type, right: Type) -> Type:
        table = self._LAM_BINARY if family == "lam" else self._L_BINARY
        name = table.get(op.text)
        if name is None:
            raise ParseError(f"{op.text} is not a {'lambda-calculus' if family == 'lam' else 'System L'} connective", op.pos)
        return self._build(name, (left, right), op)

    def _build(self, op_name: str, args: tuple[Type, ...], op: Token) -> Type:
        conn = CONNECTIVES[op_name]
        for want, a in zip(conn.args, args):
            have = _polarity(a)
            if have is not want:
                word = {POS: "positive", NEG: "negative", PLAIN: "unpolarised"}[want]
                raise ParseError(f"{op.text} expects {word} operands, got {show_type(a)}", op.pos)
        return Con(op_name, args)

    def type_unary(self, family: str) -> Type:
        if self.at("~", "not", "down", "up", "Down", "Up", "!", "?"):
            op = self.advance()
            inner = self.type_unary(family)
            if family == "lam":
                raise ParseError(f"{op.text} is not a lambda-calculus connective", op.pos)
            if op.text == "!":
                return self._build("down", (self._build("uup", (inner,), op),), op)
            if op.text == "?":
                return self._build("up", (self._build("ddown", (inner,), op),), op)
            return self._build(self._L_UNARY[op.text], (inner,), op)
        return self.type_primary(family)

    def type_primary(self, family: str) -> Type:
        t = self.tok
        if self.at("("):
            self.advance()
            ty = self.parse_type(family)
            self.expect(")")
            return ty
        if t.kind == "ident":
            self.advance()
            pol = self.atoms.get(t.text)
            if family == "lam":
                if pol not in (None, PLAIN):
                    raise ParseError(f"atom {t.text} is polarised and cannot appear in a lambda-calculus type", t.pos)
                return Atom(t.text, PLAIN)
            if pol is None:
                pol = self.l_defaults.get(t.text)
            if pol is None or pol is PLAIN:
                raise ParseError(f"unknown atom {t.text}: declare it positive or negative", t.pos)
            return Atom(t.text, pol)
        consts_lam = {"1": UNIT1, "0": ZERO0, "I": LUNIT}
        consts_l = {"I": I, "0": ZEROP, "1": ONE, "bot": BOT}
        if t.text in ("Top", "Top+", "Top-") and t.kind != "eof":
            if not self.allow_top:
                raise ParseError(f"{t.text} is internal to the checker and cannot be written", t.pos)
            self.advance()
            want = {"Top": "lam", "Top+": "L", "Top-": "L"}[t.text]
            if want != family:
                raise ParseError(f"{t.text} does not belong to this calculus", t.pos)
            return {"Top": TOP, "Top+": TOP_POS, "Top-": TOP_NEG}[t.text]
        table = consts_lam if family == "lam" else consts_l
        if t.kind != "eof" and t.text in table:
            self.advance()
            return table[t.text]
        if t.kind != "eof" and t.text in consts_lam | consts_l:
            raise ParseError(f"{t.text} is not a type in this calculus", t.pos)
        raise self.error("expected a type")

    # lambda terms

    _LAM_PREFIX = ("pi1", "pi2", "inl", "inr", "absurd")

    def lam_term(self) -> Term:
        t = self.tok
        if self.at("\\"):
            self.advance()
            x = self.ident("bound variable")
            self.expect(".")
            body = self.lam_term()
            return Term("lam", (body,), (x.text,), pos=t.pos)
        if self.at("case"):
            self.advance()
            scrut = self.lam_term()
            self.expect("of")
            self.expect("{")
            self.expect("inl")
            x = self.ident()
            self.expect("=>")
            left = self.lam_term()
            self.expect(";")
            self.expect("inr")
            y = self.ident()
            self.expect("=>")
            right = self.lam_term()
            self.expect("}")
            return Term("case", (scrut, left, right), (x.text, y.text), pos=t.pos)
        if self.at("let"):
            self.advance()
            self.expect("(")
            if self.at(")"):
                self.advance()
                self.expect("=")
                scrut = self.lam_term()
                self.expect("in")
                body = self.lam_term()
                return Term("letunit", (scrut, body), pos=t.pos)
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            self.expect("=")
            scrut = self.lam_term()
            self.expect("in")
            body = self.lam_term()
            return Term("letpair", (scrut, body), (x.text, y.text), pos=t.pos)
        return self.lam_app()

    def _starts_unary(self) -> bool:
        return self.tok.kind == "ident" or self.at("(", *self._LAM_PREFIX)

    def lam_app(self) -> Term:
        head = self.lam_unary()
        while True:
            if self._starts_unary():
                arg = self.lam_unary()
            elif self.at("\\", "case", "let"):
                arg = self.lam_term()
            else:
                return head
            head = Term("app", (head, arg), pos=head.pos)

    def lam_unary(self) -> Term:
        t = self.tok
        if self.at(*self._LAM_PREFIX):
            self.advance()
            inner = self.lam_unary()
            return Term(t.text, (inner,), pos=t.pos)
        return self.lam_atom()

    def lam_atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Term("var", names=(t.text,), pos=t.pos)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return Term("unit", pos=t.pos)
            inner = self.lam_term()
            if self.at(":"):
                self.advance()
                ty = self.parse_type("lam")
                self.expect(")")
                return Term("annot", (inner,), ty=ty, pos=t.pos)
            if self.at(","):
                self.advance()
                second = self.lam_term()
                self.expect(")")
                return Term("pair", (inner, second), pos=t.pos)
            self.expect(")")
            return inner
        raise self.error("expected a term")

    # System L terms

    _L_PREFIX = {"inl": "inl", "inr": "inr", "pi1": "pi1", "pi2": "pi2", "~": "sim", "not": "not", "down": "down", "up": "up"}

    def l_term(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Term("var", names=(t.text,), pos=t.pos)
        if self.at("<"):
            self.advance()
            left = self.l_term()
            self.expect("|")
            right = self.l_term()
            self.expect(">")
            return Term("cut", (left, right), pos=t.pos)
        if self.at("mu+", "mu-", "mut+", "mut-"):
            self.advance()
            x = self.ident("bound variable")
            self.expect(".")
            body = self.l_term()
            return Term(t.text, (body,), (x.text,), pos=t.pos)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return Term("unit", pos=t.pos)
            first = self.l_term()
            if self.at(","):
                self.advance()
                second = self.l_term()
                self.expect(")")
                return Term("tuple", (first, second), pos=t.pos)
            self.expect(")")
            return first
        if self.at("["):
            self.advance()
            if self.at("]"):
                self.advance()
                return Term("counit", pos=t.pos)
            first = self.l_term()
            self.expect(",")
            second = self.l_term()
            self.expect("]")
            return Term("cotuple", (first, second), pos=t.pos)
        if self.at(*self._L_PREFIX):
            self.advance()
            inner = self.l_term()
            return Term(self._L_PREFIX[t.text], (inner,), pos=t.pos)
        if self.at("Up", "Down"):
            self.advance()
            self.expect("(")
            inner = self.l_term()
            self.expect(":", "type annotation ':'")
            ty = self.parse_type("L")
            self.expect(")")
            return Term(t.text, (inner,), ty=ty, pos=t.pos)
        if self.at("match"):
            return self.match_term()
        if self.at("comatch"):
            return self.comatch_term()
        raise self.error("expected a term")

    def match_term(self) -> Term:
        t = self.advance()
        self.expect("{")
        if self.at("}"):
            self.advance()
            return Term("match-zero", pos=t.pos)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                self.expect("=>")
                body = self.l_term()
                self.expect("}")
                return Term("match-unit", (body,), pos=t.pos)
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            self.expect("=>")
            body = self.l_term()
            self.expect("}")
            return Term("match-pair", (body,), (x.text, y.text), pos=t.pos)
        if self.at("inl"):
            self.advance()
            x = self.ident()
            self.expect("=>")
            left = self.l_term()
            self.expect(";")
            self.expect("inr")
            y = self.ident()
            self.expect("=>")
            right = self.l_term()
            self.expect("}")
            return Term("match-sum", (left, right), (x.text, y.text), pos=t.pos)
        if self.at("~"):
            self.advance()
            x = self.ident()
            self.expect("=>")
            body = self.l_term()
            self.expect("}")
            return Term("match-sim", (body,), (x.text,), pos=t.pos)
        if self.at("down"):
            self.advance()
            self.expect("(")
            x = self.ident()
            self.expect(":", "type annotation ':' on the down binder")
            ty = self.parse_type("L")
            self.expect(")")
            self.expect("=>")
            body = self.l_term()
            self.expect("}")
            return Term("match-down", (body,), (x.text,), ty=ty, pos=t.pos)
        if self.at("Down"):
            self.advance()
            x = self.ident()
            self.expect("=>")
            body = self.l_term()
            self.expect("}")
            return Term("match-Down", (body,), (x.text,), pos=t.pos)
        raise self.error("expected a match branch")

    def comatch_term(self) -> Term:
        t = self.advance()
        self.expect("{")
        if self.at("}"):
            self.advance()
            return Term("comatch-one", pos=t.pos)
        body = self.l_term()
        self.expect("=>")
        if self.at("["):
            self.advance()
            if self.at("]"):
                self.advance()
                self.expect("}")
                return Term("comatch-bot", (body,), pos=t.pos)
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect("]")
            self.expect("}")
            return Term("comatch-par", (body,), (x.text, y.text), pos=t.pos)
        if self.at("pi1"):
            self.advance()
            x = self.ident()
            self.expect(";")
            other = self.l_term()
            self.expect("=>")
            self.expect("pi2")
            y = self.ident()
            self.expect("}")
            return Term("comatch-with", (body, other), (x.text, y.text), pos=t.pos)
        if self.at("not"):
            self.advance()
            x = self.ident()
            self.expect("}")
            return Term("comatch-not", (body,), (x.text,), pos=t.pos)
        if self.at("up"):
            self.advance()
            self.expect("(")
            x = self.ident()
            self.expect(":", "type annotation ':' on the up binder")
            ty = self.parse_type("L")
            self.expect(")")
            self.expect("}")
            return Term("comatch-up", (body,), (x.text,), ty=ty, pos=t.pos)
        if self.at("Up"):
            self.advance()
            x = self.ident()
            self.expect("}")
            return Term("comatch-Up", (body,), (x.text,), pos=t.pos)
        raise self.error("expected a comatch branch")

    # programs

    def program(self, calculus: str | None, preset: str | None) -> list[Directive]:
        out: list[Directive] = []
        while self.tok.kind != "eof":
            if self.at("atom"):
                out.append(self.atom_decl())
            elif self.at(*QUERY_KINDS):
                out.append(self.query(calculus, preset))
            else:
                raise self.error("expected 'atom' or a query kind")
        return out

    def atom_decl(self) -> AtomDecl:
        start = self.advance()
        name = self.ident("atom name")
        if not self.at("positive", "negative", "plain"):
            raise self.error("expected 'positive', 'negative' or 'plain'")
        pol = {"positive": POS, "negative": NEG, "plain": PLAIN}[self.advance().text]
        self.expect(";")
        if name.text in self.atoms:
            raise ParseError(f"atom {name.text} is declared twice", name.pos)
        self.atoms[name.text] = pol
        return AtomDecl(name.text, pol, start.pos)

    def query(self, calculus: str | None, preset: str | None) -> Query:
        kind_tok = self.advance()
        kind = kind_tok.text
        family = "lam" if kind in LAMBDA_KINDS else "L"
        ctx: list[CtxEntry] = []
        if self.at("["):
            self.advance()
            if not self.at("]"):
                ctx.append(self.ctx_entry(family))
                while self.at(","):
                    self.advance()
                    ctx.append(self.ctx_entry(family))
            self.expect("]")
        term = self.lam_term() if family == "lam" else self.l_term()
        ty = None
        if self.at(":"):
            colon = self.advance()
            if kind not in TYPED_KINDS:
                raise ParseError(f"{kind} queries synthesise their type and take no type", colon.pos)
            ty = self.parse_type(family)
        elif kind in TYPED_KINDS:
            raise self.error(f"{kind} queries need a type after ':'")
        self.expect(";", "';' ending the directive")
        return Query(kind, tuple(ctx), term, ty, calculus, preset, kind_tok.pos)

    def ctx_entry(self, family: str) -> CtxEntry:
        name = self.ident("context variable")
        pol = None
        if self.at("+", "-") and self.tok.start == name.end:
            if family == "lam":
                raise ParseError("lambda-calculus variables carry no polarity", self.tok.pos)
            pol = POS if self.advance().text == "+" else NEG
        ty = None
        if self.at(":"):
            self.advance()
            ty = self.parse_type(family)
            tpol = _polarity(ty)
            if pol is not None and pol is not tpol:
                raise ParseError(f"{name.text} is marked {pol.value} but has a {tpol.value} type", name.pos)
            pol = tpol if family == "L" else None
        return CtxEntry(name.text, ty, pol, name.pos)


def _polarity(t: Type) -> Polarity:
    if isinstance(t, Atom):
        return t.polarity
    return CONNECTIVES[t.op].result


def _family_of(tag: str | None) -> str:
    if tag in (None, "L", "pos", "neg", "pol", "lnl"):
        return "L"
    if tag in ("lam", "lambda", "stlc", "lin", "cdb"):
        return "lam"
    raise ValueError(f"unknown calculus {tag!r}")


def parse_type(
    text: str,
    calculus: str | None = "L",
    atoms: Mapping[str, Polarity] | None = None,
    allow_top: bool = False,
) -> Type:
    """Parse a single type.  ``calculus`` is a family (``"L"``/``"lam"``) or a calculus tag.

    System L atoms default to ``P``, ``Q`` positive and ``N``, ``M`` negative.
    """
    family = _family_of(calculus)
    if atoms is None and family == "L":
        atoms = DEFAULT_L_ATOMS
    p = _Parser(text, atoms, allow_top)
    ty = p.parse_type(family)
    if p.tok.kind != "eof":
        raise p.error("unexpected input after type")
    return ty


def parse_term(text: str, family: str = "L", atoms: Mapping[str, Polarity] | None = None) -> Term:
    if atoms is None and family == "L":
        atoms = DEFAULT_L_ATOMS
    p = _Parser(text, atoms)
    t = p.lam_term() if family == "lam" else p.l_term()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after term")
    return t


def parse_program(
    text: str,
    calculus: str | None = None,
    preset: str | None = None,
    atoms: Mapping[str, Polarity] | None = None,
) -> list[Directive]:
    """Parse a whole program; the first error raises :class:`ParseError`."""
    return _Parser(text, atoms).program(calculus, preset)


def declared_atoms(directives: Sequence[Directive]) -> dict[str, Polarity]:
    return {d.name: d.polarity for d in directives if isinstance(d, AtomDecl)}


# ---------------------------------------------------------------------------
# Printers


def show_term(t: Term, family: str = "L") -> str:
    return _show_lam(t, 0) if family == "lam" else _show_l(t)


_LAM_LEVEL = {"lam": 0, "case": 0, "letunit": 0, "letpair": 0, "app": 1,
              "pi1": 2, "pi2": 2, "inl": 2, "inr": 2, "absurd": 2}


def _show_lam(t: Term, need: int) -> str:
    level = _LAM_LEVEL.get(t.kind, 3)
    if level < need:
        return f"({_show_lam(t, 0)})"
    c = t.children
    match t.kind:
        case "var":
            return t.names[0]
        case "unit":
            return "()"
        case "pair":
            return f"({_show_lam(c[0], 0)}, {_show_lam(c[1], 0)})"
        case "annot":
            return f"({_show_lam(c[0], 0)} : {show_type(t.ty)})"
        case "lam":
            return f"\\{t.names[0]}. {_show_lam(c[0], 0)}"
        case "app":
            return f"{_show_lam(c[0], 1)} {_show_lam(c[1], 2)}"
        case "pi1" | "pi2" | "inl" | "inr" | "absurd":
            return f"{t.kind} {_show_lam(c[0], 2)}"
        case "case":
            x, y = t.names
            return (f"case {_show_lam(c[0], 0)} of {{ inl {x} => {_show_lam(c[1], 0)}; "
                    f"inr {y} => {_show_lam(c[2], 0)} }}")
        case "letunit":
            return f"let () = {_show_lam(c[0], 0)} in {_show_lam(c[1], 0)}"
        case "letpair":
            x, y = t.names
            return f"let ({x}, {y}) = {_show_lam(c[0], 0)} in {_show_lam(c[1], 0)}"
    raise ValueError(f"not a lambda term: {t.kind}")


def _show_l(t: Term) -> str:
    c = [_show_l(ch) for ch in t.children]
    n = t.names
    match t.kind:
        case "var":
            return n[0]
        case "cut":
            return f"< {c[0]} | {c[1]} >"
        case "mu+" | "mu-" | "mut+" | "mut-":
            return f"{t.kind} {n[0]}. {c[0]}"
        case "unit":
            return "()"
        case "counit":
            return "[]"
        case "tuple":
            return f"({c[0]}, {c[1]})"
        case "cotuple":
            return f"[{c[0]}, {c[1]}]"
        case "sim":
            return f"~{c[0]}"
        case "inl" | "inr" | "pi1" | "pi2" | "not" | "down" | "up":
            return f"{t.kind} {c[0]}"
        case "Up" | "Down":
            return f"{t.kind}({c[0]} : {show_type(t.ty)})"
        case "match-zero":
            return "match { }"
        case "match-unit":
            return f"match {{ () => {c[0]} }}"
        case "match-pair":
            return f"match {{ ({n[0]}, {n[1]}) => {c[0]} }}"
        case "match-sum":
            return f"match {{ inl {n[0]} => {c[0]}; inr {n[1]} => {c[1]} }}"
        case "match-sim":
            return f"match {{ ~{n[0]} => {c[0]} }}"
        case "match-down":
            return f"match {{ down({n[0]} : {show_type(t.ty)}) => {c[0]} }}"
        case "match-Down":
            return f"match {{ Down {n[0]} => {c[0]} }}"
        case "comatch-one":
            return "comatch { }"
        case "comatch-bot":
            return f"comatch {{ {c[0]} => [] }}"
        case "comatch-par":
            return f"comatch {{ {c[0]} => [{n[0]}, {n[1]}] }}"
        case "comatch-with":
            return f"comatch {{ {c[0]} => pi1 {n[0]}; {c[1]} => pi2 {n[1]} }}"
        case "comatch-not":
            return f"comatch {{ {c[0]} => not {n[0]} }}"
        case "comatch-up":
            return f"comatch {{ {c[0]} => up({n[0]} : {show_type(t.ty)}) }}"
        case "comatch-Up":
            return f"comatch {{ {c[0]} => Up {n[0]} }}"
    raise ValueError(f"not a System L term: {t.kind}")


def show_ctx_entry(e: CtxEntry) -> str:
    if e.ty is not None:
        return f"{e.name} : {show_type(e.ty)}"
    if e.pol in (POS, NEG):
        return f"{e.name}{e.pol.value}"
    return e.name


def show_directive(d: Directive) -> str:
    if isinstance(d, AtomDecl):
        word = {POS: "positive", NEG: "negative", PLAIN: "plain"}[d.polarity]
        return f"atom {d.name} {word};"
    ctx = ", ".join(show_ctx_entry(e) for e in d.ctx)
    out = f"{d.kind} [{ctx}] {show_term(d.term, d.family)}"
    if d.ty is not None:
        out += f" : {show_type(d.ty)}"
    return out + ";"


def show_program(directives: Sequence[Directive]) -> str:
    return "".join(show_directive(d) + "\n" for d in directives)
