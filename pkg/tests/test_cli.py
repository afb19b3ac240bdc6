import io
import json
import subprocess
import sys

import pytest

from polcheck.cli import format_report, main, run_check

from conftest import CORPUS


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def prog(tmp_path):
    def write(text, name="p.pl0"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


class TestExitCodes:
    def test_ok(self, prog):
        assert cli("check", "--calculus", "lin", prog("lambda-synth [] \\x. (x : P);"))[0] == 0

    def test_type_error(self, prog):
        assert cli("check", "--calculus", "lin", prog("lambda-check [] () : P;"))[0] == 1

    def test_usage_error(self, prog):
        assert cli("check", "--calculus", "lin", prog("lambda-synth [] \\x. ();"))[0] == 2

    def test_parse_error(self, prog):
        code, text = cli("check", prog("lambda-synth [] \\x. ("))
        assert code == 2 and "error" in text

    def test_scope_error_missing_annotation(self, prog):
        code, out = cli("check", "--calculus", "cdb", "--json", prog("lambda-synth [] \\x. x;"))
        assert code == 2
        assert json.loads(out)["queries"][0]["status"] == "error"

    def test_unknown_flag(self, prog, capsys):
        assert cli("check", "--frobnicate", prog("lambda-synth [] ();"))[0] == 2
        assert "frobnicate" in capsys.readouterr().err

    def test_lnl_preset_with_standard_lambda(self, prog):
        assert cli("check", "--calculus", "stlc", "--preset", "lnl-full", prog("lambda-synth [] ();"))[0] == 2

    def test_missing_file(self, tmp_path):
        assert cli("check", str(tmp_path / "absent.pl0"))[0] == 2

    def test_worst_error_wins(self, prog):
        text = "lambda-check [] () : P;\nlambda-synth [] \\x. ();\nlambda-synth [] ();\n"
        assert cli("check", "--calculus", "lin", prog(text))[0] == 2


class TestCheckOutput:
    def test_json_shape(self, prog):
        code, out = cli("check", "--calculus", "lin", "--json", prog("lambda-synth [] \\x. (x : P);"))
        report = json.loads(out)
        assert report == {"status": "ok", "queries": [
            {"kind": "lambda-synth", "line": 1, "status": "ok", "type": "P -o P", "context": [],
             "error": None}]}

    def test_error_record(self, prog):
        _, out = cli("check", "--calculus", "lin", "--json", prog("\nlambda-synth [] \\x. ();"))
        q = json.loads(out)["queries"][0]
        assert q["line"] == 2 and q["status"] == "error"
        assert set(q["error"]) == {"code", "message", "line", "column"}

    def test_parse_error_report(self, prog):
        _, out = cli("check", "--json", prog("lambda-synth [] ("))
        report = json.loads(out)
        assert report["status"] == "error" and report["queries"] == []
        assert report["error"]["line"] == 1

    def test_timing_only_on_request(self, prog):
        path = prog("lambda-synth [] ();")
        assert "time_ms" not in json.loads(cli("check", "--json", path)[1])["queries"][0]
        assert json.loads(cli("check", "--json", "--timing", path)[1])["queries"][0]["time_ms"] >= 0

    def test_human_output(self, prog):
        _, out = cli("check", "--calculus", "lin", prog("lambda-synth [] \\x. (x : P);"))
        assert out == "line 1: lambda-synth ok type P -o P context []\n"

    def test_human_and_json_agree(self):
        text = (CORPUS / "structural.pl0").read_text()
        for preset in ("linear", "cartesian", "lnl-bang", "lnl-full"):
            _, report = run_check(text, "lnl", preset)
            lines = format_report(report).splitlines()
            assert len(lines) == len(report["queries"])
            for line, q in zip(lines, report["queries"]):
                assert line.startswith(f"line {q['line']}: {q['kind']} {q['status']}")

    @pytest.mark.parametrize("mode,painted", [("always", True), ("never", False), ("auto", False)])
    def test_color(self, prog, monkeypatch, mode, painted):
        monkeypatch.setenv("POLCHECK_COLOR", mode)
        _, out = cli("check", "--calculus", "lin", prog("lambda-synth [] ();"))
        assert ("\033[" in out) == painted

    def test_stdin(self, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("lambda-synth [] ();"))
        code, out = cli("check", "--calculus", "cdb", "-")
        assert code == 0 and "type I" in out


class TestCorpusExitCodes:
    @pytest.mark.parametrize("name,calculus,preset,expected", [
        ("positive.pl0", "pos", None, 0),
        ("negative.pl0", "neg", None, 0),
        ("lnl_sugar.pl0", "lnl", "lnl-full", 0),
        ("lnl_sugar.pl0", "lnl", "linear", 1),
        ("structural.pl0", "lnl", "cartesian", 0),
        ("structural.pl0", "lnl", "linear", 2),
    ])
    def test_exit_code(self, name, calculus, preset, expected):
        argv = ["check", "--calculus", calculus] + (["--preset", preset] if preset else [])
        assert cli(*argv, str(CORPUS / name))[0] == expected


class TestOtherCommands:
    def test_elaborate(self, prog):
        code, out = cli("elaborate", "--calculus", "cdb", prog("lambda-synth [] \\x. ((x : P), (x : P));"))
        assert code == 0 and "pair [cover: B]" in out

    def test_elaborate_scope_error(self, prog):
        assert cli("elaborate", "--calculus", "cdb", prog("lambda-synth [] \\x. x;"))[0] == 2

    def test_dualize_round_trip(self, prog):
        code, once = cli("dualize", str(CORPUS / "positive.pl0"))
        assert code == 0
        code, twice = cli("dualize", prog(once))
        assert code == 0
        _, r1 = run_check(once, "neg", None)
        assert r1["status"] == "ok"
        assert run_check(twice, "pos", None)[1]["status"] == "ok"

    def test_dualize_rejects_lambda(self, prog):
        assert cli("dualize", prog("lambda-synth [] ();"))[0] == 2

    def test_oracle(self):
        code, out = cli("oracle", "--calculus", "pol", "--max-size", "4", "--count", "20")
        assert code == 0
        assert out.strip().endswith("s)") and ", 0 mismatches" in out

    def test_oracle_rejects_foreign_class(self):
        assert cli("oracle", "--calculus", "pos", "--class", "coexpr")[0] == 2

    def test_module_entry_point(self):
        r = subprocess.run([sys.executable, "-m", "polcheck", "check", "--calculus", "pos",
                            str(CORPUS / "positive.pl0")], capture_output=True, text=True)
        assert r.returncode == 0 and r.stdout.count(" ok") == 27
