"""Re-record the golden JSON reports: ``python3 tests/golden/record.py``."""

import io
import pathlib
import shlex

from polcheck.cli import main

HERE = pathlib.Path(__file__).parent


def golden_args(src: pathlib.Path) -> list[str]:
    first = src.read_text().splitlines()[0]
    return shlex.split(first.removeprefix("--")) + ["--json", str(src)]


def render(src: pathlib.Path) -> str:
    out = io.StringIO()
    code = main(golden_args(src), out)
    return out.getvalue().replace(str(src), src.name) + f"-- exit {code}\n"


if __name__ == "__main__":
    for src in sorted(HERE.glob("*.pl0")):
        src.with_suffix(".json").write_text(render(src))
