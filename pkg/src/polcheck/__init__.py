"""Bicontextual bidirectional typechecking for lambda calculi and polarised System L."""

from .driver import check_query, config_for
from .errors import CheckError, MergeConflict, ParseError, PolcheckError, ScopeError
from .kernel import CARTESIAN, LINEAR, LNL_BANG, LNL_FULL, PRESETS, StructConfig, show_type
from .scope import elaborate, show_elaborated
from .surface import parse_program, parse_term, parse_type, show_directive, show_program
from .systeml import dualize

__version__ = "0.1.0"

__all__ = [
    "CARTESIAN", "LINEAR", "LNL_BANG", "LNL_FULL", "PRESETS", "CheckError", "MergeConflict", "ParseError",
    "PolcheckError", "ScopeError", "StructConfig", "check_query", "config_for", "dualize", "elaborate",
    "parse_program", "parse_term", "parse_type", "show_directive", "show_elaborated", "show_program",
    "show_type",
]
