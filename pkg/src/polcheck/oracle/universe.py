"""Finite type universes for exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from ..kernel import CONNECTIVES, NEG, PLAIN, POS, Atom, Con, Polarity, Type, top_of

STLC_OPS = ("arrow", "prod", "sum", "unit1", "zero0")
LINEAR_OPS = ("lolli", "ltensor", "lunit")
CDB_OPS = ("arrow", "ltensor", "lunit")
L_OPS = ("I", "zero", "tensor", "plus", "sim", "down", "bot", "one", "par", "with", "not", "up")
LNL_OPS = L_OPS + ("ddown", "uup")
POS_FRAGMENT_OPS = ("I", "zero", "tensor", "plus")
NEG_FRAGMENT_OPS = ("bot", "one", "par", "with")


@dataclass(frozen=True)
class TypeUniverse:
    """Atoms per polarity, the connectives to build with, and a depth bound."""

    depth: int = 2
    atoms_pos: tuple[str, ...] = ("P", "Q")
    atoms_neg: tuple[str, ...] = ("N", "M")
    atoms_plain: tuple[str, ...] = ("P", "Q")
    ops: tuple[str, ...] = STLC_OPS + L_OPS

    def atoms(self, pol: Polarity) -> tuple[str, ...]:
        return {POS: self.atoms_pos, NEG: self.atoms_neg, PLAIN: self.atoms_plain}[pol]

    def with_depth(self, depth: int) -> "TypeUniverse":
        return TypeUniverse(depth, self.atoms_pos, self.atoms_neg, self.atoms_plain, self.ops)


UNIVERSES = {
    "stlc": TypeUniverse(ops=STLC_OPS),
    "lin": TypeUniverse(ops=LINEAR_OPS),
    "cdb": TypeUniverse(ops=CDB_OPS),
    "pos": TypeUniverse(ops=POS_FRAGMENT_OPS),
    "neg": TypeUniverse(ops=NEG_FRAGMENT_OPS),
    "pol": TypeUniverse(ops=L_OPS),
    "lnl": TypeUniverse(ops=LNL_OPS),
}


def universe_for(calculus: str, depth: int = 2) -> TypeUniverse:
    return UNIVERSES[calculus].with_depth(depth)


def _ops_for(u: TypeUniverse, pol: Polarity) -> list[str]:
    family = "lam" if pol is PLAIN else "L"
    return [op for op in u.ops if CONNECTIVES[op].family == family and CONNECTIVES[op].result is pol]


@lru_cache(maxsize=None)
def _layers(u: TypeUniverse, pol: Polarity) -> tuple[tuple[Type, ...], ...]:
    """``layers[d]`` holds the types of depth exactly ``d``."""
    pols = (PLAIN,) if pol is PLAIN else (POS, NEG)
    layers: dict[Polarity, list[list[Type]]] = {p: [] for p in pols}
    for p in pols:
        base: list[Type] = [Atom(a, p) for a in u.atoms(p)]
        base += [Con(op) for op in _ops_for(u, p) if not CONNECTIVES[op].args]
        layers[p].append(base)
    for d in range(1, u.depth + 1):
        for p in pols:
            new: list[Type] = []
            for op in _ops_for(u, p):
                arg_pols = CONNECTIVES[op].args
                if not arg_pols:
                    continue
                pools = [[t for layer in layers[q][:d] for t in layer] for q in arg_pols]
                for args in product(*pools):
                    # exactly depth d: some argument sits in the previous layer
                    if any(a in layers[q][d - 1] for a, q in zip(args, arg_pols)):
                        new.append(Con(op, args))
            layers[p].append(new)
    return tuple(tuple(layer) for layer in layers[pol])


def enumerate_types(u: TypeUniverse, pol: Polarity, with_top: bool = False) -> list[Type]:
    """All types of the given polarity up to ``u.depth``, shallowest first.

    ``with_top`` also admits the top type (at every position), which the
    solver needs because unused variables are typed by it.
    """
    if with_top:
        return list(_with_top(u, pol))
    return [t for layer in _layers(u, pol) for t in layer]


@lru_cache(maxsize=None)
def _with_top(u: TypeUniverse, pol: Polarity) -> tuple[Type, ...]:
    ext = TypeUniverse(u.depth, u.atoms_pos, u.atoms_neg, u.atoms_plain,
                       u.ops + tuple(op for op in ("top", "topp", "topn") if op not in u.ops))
    base = enumerate_types(ext, pol)
    top = top_of(pol)
    # the top type first: it discharges most pending subtype goals immediately
    return (top,) + tuple(t for t in base if t != top)
