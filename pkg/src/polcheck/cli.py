"""Command-line driver: ``polcheck check|elaborate|oracle|dualize``.

Exit codes: 0 when every query checks, 1 when some query has a type error,
2 for parse, scope and usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from .driver import CALCULI, check_elaborated, config_for
from .errors import CheckError, PolcheckError
from .kernel import PRESETS, Atom, Con, TypedCtx, show_type
from .scope import LAMBDA_CALCULI, default_calculus, elaborate, show_elaborated
from .surface import AtomDecl, Query, parse_program, show_directive, show_program

EXIT_OK, EXIT_TYPE, EXIT_USAGE = 0, 1, 2

_L_CLASSES = {
    "pos": ("expr", "pattern", "command"),
    "neg": ("coexpr", "copattern", "command"),
    "pol": ("expr", "pattern", "copattern", "coexpr", "command"),
    "lnl": ("expr", "pattern", "copattern", "coexpr", "command"),
}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _color_enabled(stream) -> bool:
    mode = os.environ.get("POLCHECK_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, code: str, on: bool) -> str:
    return f"\033[{code}m{text}\033[0m" if on else text


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _error_record(e: PolcheckError) -> dict:
    line, col = e.pos if e.pos is not None else (None, None)
    return {"code": e.code, "message": e.message, "line": line, "column": col}


def _show_ctx(ctx: TypedCtx | None) -> list[str] | None:
    if ctx is None:
        return None
    return [f"{e.name} : {show_type(e.ty)}" for e in ctx]


def _exit_for(e: PolcheckError) -> int:
    return EXIT_TYPE if isinstance(e, CheckError) else EXIT_USAGE


def run_check(text: str, calculus: str | None, preset: str | None, timing: bool = False) -> tuple[int, dict]:
    """Check every query in ``text``; returns the exit code and the report."""
    try:
        directives = parse_program(text, calculus, preset)
    except PolcheckError as e:
        return EXIT_USAGE, {"status": "error", "error": _error_record(e), "queries": []}
    code = EXIT_OK
    records = []
    for d in directives:
        if not isinstance(d, Query):
            continue
        rec = {"kind": d.kind, "line": d.pos[0] if d.pos else None, "status": "ok",
               "type": None, "context": None, "error": None}
        start = time.perf_counter()
        try:
            cal = calculus or default_calculus(d)
            el = elaborate(d, config_for(cal, preset), cal)
            ty, ctx = check_elaborated(el)
            rec["type"] = None if ty is None else show_type(ty)
            rec["context"] = _show_ctx(ctx)
        except PolcheckError as e:
            rec["status"] = "error"
            rec["error"] = _error_record(e)
            code = max(code, _exit_for(e))
        if timing:
            rec["time_ms"] = round((time.perf_counter() - start) * 1000, 3)
        records.append(rec)
    return code, {"status": "ok" if code == EXIT_OK else "error", "queries": records}


def format_report(report: dict, color: bool = False) -> str:
    lines = []
    if "error" in report:
        e = report["error"]
        lines.append(f"{e['line']}:{e['column']}: {_paint('error', '31', color)} [{e['code']}] {e['message']}")
    for q in report["queries"]:
        head = f"line {q['line']}: {q['kind']}"
        if q["status"] == "ok":
            parts = [head, _paint("ok", "32", color)]
            if q["type"] is not None:
                parts.append(f"type {q['type']}")
            if q["context"] is not None:
                parts.append(f"context [{', '.join(q['context'])}]")
        else:
            e = q["error"]
            where = f" at {e['line']}:{e['column']}" if e["line"] is not None else ""
            parts = [head, _paint("error", "31", color), f"[{e['code']}]{where}: {e['message']}"]
        if "time_ms" in q:
            parts.append(f"({q['time_ms']} ms)")
        lines.append(" ".join(parts))
    return "\n".join(lines)


def _cmd_check(args, out) -> int:
    code, report = run_check(_read(args.file), args.calculus, args.preset, args.timing)
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(format_report(report, _color_enabled(out)) + "\n")
    return code


def _cmd_elaborate(args, out) -> int:
    try:
        directives = parse_program(_read(args.file), args.calculus, args.preset)
    except PolcheckError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    code = EXIT_OK
    for d in directives:
        if not isinstance(d, Query):
            continue
        try:
            cal = args.calculus or default_calculus(d)
            out.write(show_elaborated(elaborate(d, config_for(cal, args.preset), cal)) + "\n")
        except PolcheckError as e:
            out.write(f"{show_directive(d)}\n  error [{e.code}] {e}\n")
            code = EXIT_USAGE
    return code


def _atoms_of(t, acc: dict) -> None:
    if isinstance(t, Atom):
        acc.setdefault(t.name, t.polarity)
    elif isinstance(t, Con):
        for a in t.args:
            _atoms_of(a, acc)


def _cmd_dualize(args, out) -> int:
    from .surface import iter_terms
    from .systeml import dualize

    try:
        directives = parse_program(_read(args.file))
    except PolcheckError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    if any(isinstance(d, Query) and d.family != "L" for d in directives):
        sys.stderr.write("dualize: lambda-calculus queries have no dual\n")
        return EXIT_USAGE
    dual = dualize(directives)
    declared = {d.name for d in dual if isinstance(d, AtomDecl)}
    # atoms that were only implicitly declared change polarity too, so spell them out
    used: dict = {}
    for d in dual:
        if isinstance(d, Query):
            for e in d.ctx:
                if e.ty is not None:
                    _atoms_of(e.ty, used)
            if d.ty is not None:
                _atoms_of(d.ty, used)
            for s in iter_terms(d.term):
                if s.ty is not None:
                    _atoms_of(s.ty, used)
    extra = [AtomDecl(n, p) for n, p in used.items() if n not in declared]
    out.write(show_program(extra + dual))
    return EXIT_OK


def _cmd_oracle(args, out) -> int:
    from .oracle import agree, derive_all, generate_queries

    cfg = config_for(args.calculus, args.preset)
    classes = ("lambda",) if args.calculus in LAMBDA_CALCULI else _L_CLASSES[args.calculus]
    if args.cls:
        if args.cls not in classes:
            raise _Usage(f"class {args.cls} is not available in the {args.calculus} calculus")
        classes = (args.cls,)
    total = mismatches = 0
    start = time.perf_counter()
    for cls in classes:
        for q in generate_queries(args.seed, args.max_size, cls, cfg, args.calculus, count=args.count):
            el = elaborate(q, cfg, args.calculus)
            try:
                verdict = check_elaborated(el)
            except PolcheckError as e:
                verdict = e
            total += 1
            if not agree(verdict, derive_all(el)):
                mismatches += 1
                shown = verdict if isinstance(verdict, PolcheckError) else (
                    None if verdict[0] is None else show_type(verdict[0]), _show_ctx(verdict[1]))
                out.write(f"counterexample: {show_directive(q)}\n  checker: {shown}\n")
    elapsed = time.perf_counter() - start
    out.write(f"{total} queries, {mismatches} mismatches ({elapsed:.2f} s)\n")
    return EXIT_OK if mismatches == 0 else EXIT_TYPE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polcheck", description="Bidirectional typechecker for lambda calculi and System L.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, calculus_required=False):
        sp.add_argument("--calculus", choices=CALCULI, required=calculus_required)
        sp.add_argument("--preset", choices=sorted(PRESETS))

    c = sub.add_parser("check", help="typecheck every query in a program")
    common(c)
    c.add_argument("--json", action="store_true", help="emit a JSON report")
    c.add_argument("--timing", action="store_true", help="record per-query time in milliseconds")
    c.add_argument("file", help="program file, or - for stdin")

    e = sub.add_parser("elaborate", help="print the scoped tree with covers and thinnings")
    common(e)
    e.add_argument("file")

    o = sub.add_parser("oracle", help="compare the checker with the exhaustive oracle on generated queries")
    common(o, calculus_required=True)
    o.add_argument("--max-size", type=int, default=8)
    o.add_argument("--seed", type=int, default=1)
    o.add_argument("--count", type=int, default=200, help="queries per judgement class")
    o.add_argument("--class", dest="cls", help="restrict to one judgement class")

    d = sub.add_parser("dualize", help="print the dual of a System L program")
    d.add_argument("file")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "calculus", None) and getattr(args, "preset", None):
            config_for(args.calculus, args.preset)
        handler = {"check": _cmd_check, "elaborate": _cmd_elaborate,
                   "oracle": _cmd_oracle, "dualize": _cmd_dualize}[args.command]
        return handler(args, out)
    except _Usage as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except ValueError as e:
        sys.stderr.write(f"polcheck: error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"polcheck: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
