"""Declarative oracle: exhaustive derivation, agreement checks and corpus generation."""

from __future__ import annotations

from ..errors import PolcheckError
from .rules import derive_all
from .solver import JudgementSet, Meta
from .universe import TypeUniverse, enumerate_types, universe_for


def agree(verdict, judgements: JudgementSet) -> bool:
    """Does a checker verdict match the oracle?

    ``verdict`` is either the checker's ``(type, context)`` output or the
    error it raised.  An accepted query must produce a derivable judgement;
    a rejected one must have none.
    """
    if isinstance(verdict, PolcheckError):
        return judgements.is_empty()
    ty, ctx = verdict
    return judgements.contains(ty, ctx)


from .generate import generate_corpus, generate_queries  # noqa: E402

__all__ = [
    "JudgementSet", "Meta", "TypeUniverse", "agree", "derive_all", "enumerate_types",
    "generate_corpus", "generate_queries", "universe_for",
]
