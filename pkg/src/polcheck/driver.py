"""Run one parsed query through elaboration and the matching checker."""

from __future__ import annotations

from .kernel import PRESETS, StructConfig, Type, TypedCtx
from .lam import run_lambda
from .scope import LAMBDA_CALCULI, Elaborated, default_calculus, elaborate
from .surface import Query
from .systeml import run_l

DEFAULT_PRESETS = {
    "stlc": "cartesian", "cdb": "cartesian", "lin": "linear",
    "pos": "linear", "neg": "linear", "pol": "linear", "lnl": "lnl-full",
}
CALCULI = tuple(DEFAULT_PRESETS)


def config_for(calculus: str, preset: str | None = None) -> StructConfig:
    """The structural configuration for ``calculus``; LNL presets only suit System L."""
    name = preset or DEFAULT_PRESETS[calculus]
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}")
    if calculus in LAMBDA_CALCULI and name.startswith("lnl"):
        raise ValueError(f"preset {name} does not apply to the {calculus} calculus")
    return PRESETS[name]


def check_elaborated(el: Elaborated) -> tuple[Type | None, TypedCtx | None]:
    """Typecheck; returns (synthesised type, synthesised context) or raises CheckError."""
    return run_lambda(el) if el.family == "lam" else run_l(el)


def check_query(query: Query, calculus: str | None = None, preset: str | None = None):
    """Elaborate and check ``query``; returns the elaboration and the checker's outputs."""
    calculus = calculus or default_calculus(query)
    el = elaborate(query, config_for(calculus, preset), calculus)
    return el, check_elaborated(el)
