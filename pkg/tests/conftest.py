import os
import pathlib

from hypothesis import HealthCheck, settings

from polcheck.driver import check_query
from polcheck.kernel import show_type
from polcheck.surface import Query, parse_program

settings.register_profile(
    "polcheck", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "polcheck"))

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def queries(text: str, calculus: str | None = None) -> list[Query]:
    return [d for d in parse_program(text, calculus) if isinstance(d, Query)]


def run(text: str, calculus: str | None = None, preset: str | None = None):
    """Check the last query of ``text``; returns (printed type, printed context)."""
    q = queries(text, calculus)[-1]
    _, (ty, ctx) = check_query(q, calculus, preset)
    shown = None if ctx is None else [f"{e.name} : {show_type(e.ty)}" for e in ctx]
    return (None if ty is None else show_type(ty)), shown


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok = RESULTS[number]
        terminalreporter.write_line(f"C{number:<2} {'PASS' if ok else 'FAIL'}  {title}")
