import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from integrality.cli import EXIT_EXHAUSTED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, UsageError, parse_element, run
from integrality.diophdef import decide, definition_to_json, dumps, validate
from integrality.exactalg import LiteralError
from integrality.harness import enumerate_elements
from integrality.perfectclosure import PerfElement
from integrality.places import FunctionField, Rationals


@pytest.fixture(scope="module")
def def_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "def.json"
    assert run(["build", "--field", "F3t", "--place", "finite:t", "--out", str(path)]) == EXIT_OK
    return path


@pytest.fixture(scope="module")
def perf_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "perf.json"
    assert run(["perfect-build", "--field", "F3t", "--place", "finite:t", "--out", str(path)]) == EXIT_OK
    return path


def verdict(out: str) -> str:
    return next(line for line in out.splitlines() if line.startswith("verdict:")).split()[1]


class TestParseElement:
    def test_examples(self):
        F = FunctionField(3)
        x = parse_element("(t^2+1)/(t+2)", F)
        assert F.fmt(x) == "(t^2+1)/(t+2)"
        assert parse_element("-7/15", Rationals()) == Fraction(-7, 15)
        y = parse_element("level=1; s/(s^2+1)", F)
        assert isinstance(y, PerfElement) and y.level == 1
        assert parse_element(str(y), F) == y

    def test_round_trip(self, f3, qq):
        for field in (f3, qq):
            for x in enumerate_elements(field, 2):
                assert parse_element(field.fmt(x), field) == x

    def test_errors(self, qq, f3):
        with pytest.raises(LiteralError):
            parse_element("1/0", qq)
        with pytest.raises(LiteralError):
            parse_element("t^", f3)
        with pytest.raises(UsageError):
            parse_element("level=1; s", qq)


class TestCommands:
    def test_build_is_valid(self, def_file):
        validate(json.loads(def_file.read_text()))

    def test_build_deterministic(self, def_file, tmp_path):
        again = tmp_path / "again.json"
        assert run(["build", "--field", "F3t", "--place", "finite:t", "--out", str(again)]) == EXIT_OK
        assert again.read_text() == def_file.read_text()

    def test_build_to_stdout(self, capsys):
        assert run(["build", "--field", "Q", "--place", "prime:5"]) == EXIT_OK
        validate(json.loads(capsys.readouterr().out))

    def test_decide(self, def_file, capsys):
        assert run(["decide", "--def", str(def_file), "--element", "1/t"]) == EXIT_OK
        assert verdict(capsys.readouterr().out) == "false"
        assert run(["decide", "--def", str(def_file), "--element", "(t^2+1)/(t+2)"]) == EXIT_OK
        out = capsys.readouterr().out
        assert verdict(out) == "true" and "split:" in out

    def test_decide_without_artifact(self, capsys):
        assert run(["decide", "--field", "Q", "--place", "prime:5", "--element=-7/15"]) == EXIT_OK
        assert verdict(capsys.readouterr().out) == "false"

    def test_verify(self, def_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run(["verify", "--def", str(def_file), "--bound", "2", "--out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        validate(doc, "sweep-report")
        assert doc["passed"] and doc["counts"]["disagreed"] == 0
        assert "disagreed 0" in capsys.readouterr().err

    def test_perfect(self, perf_file, capsys):
        assert run(["perfect-decide", "--def", str(perf_file), "--element", "level=1; s"]) == EXIT_OK
        assert verdict(capsys.readouterr().out) == "true"
        assert run(["perfect-decide", "--def", str(perf_file), "--element", "level=2; 1/s"]) == EXIT_OK
        assert verdict(capsys.readouterr().out) == "false"
        assert run(["perfect-verify", "--def", str(perf_file), "--bound", "1", "--levels", "1"]) == EXIT_OK
        validate(json.loads(capsys.readouterr().out), "sweep-report")

    def test_emit(self, def_file, perf_file, capsys):
        assert run(["emit", "--def", str(def_file)]) == EXIT_OK
        text = capsys.readouterr().out
        assert text.startswith("EXISTS") and "= 0" in text
        assert run(["emit", "--def", str(perf_file), "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["node"] == "Exists" and doc["vars"] == ["y", "z"]
        assert run(["emit", "--perfect", "--field", "F3t", "--place", "finite:t"]) == EXIT_OK
        assert "x1_2" in capsys.readouterr().out

    def test_module_entry_point(self, def_file):
        proc = subprocess.run(
            [sys.executable, "-m", "integrality.cli", "decide", "--def", str(def_file), "--element", "t"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and verdict(proc.stdout) == "true"


class TestExitCodes:
    def test_usage(self, def_file, capsys):
        assert run(["decide", "--element", "t"]) == EXIT_USAGE
        assert run(["decide", "--def", str(def_file), "--element", "t^"]) == EXIT_USAGE
        assert run(["build", "--field", "F4t", "--place", "finite:t"]) == EXIT_USAGE
        assert run(["build", "--field", "F3t", "--place", "finite:t^2+1+t"]) == EXIT_USAGE
        assert run(["build", "--field", "F3t", "--place", "infinite"]) == EXIT_USAGE
        assert run(["decide", "--def", "/nonexistent.json", "--element", "t"]) == EXIT_USAGE
        assert run(["verify", "--def", str(def_file), "--bound", "-1"]) == EXIT_USAGE
        with pytest.raises(SystemExit) as exc:
            run(["decide", "--bogus"])
        assert exc.value.code == EXIT_USAGE
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == EXIT_USAGE

    def test_verification(self, def_file, tmp_path):
        doc = json.loads(def_file.read_text())
        doc["a"][0] = "t+1"
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert run(["decide", "--def", str(bad), "--element", "t"]) == EXIT_VERIFY
        bad.write_text("{not json")
        assert run(["decide", "--def", str(bad), "--element", "t"]) == EXIT_VERIFY
        bad.write_text(json.dumps({"schema": "something else"}))
        assert run(["verify", "--def", str(bad)]) == EXIT_VERIFY

    def test_exhaustion(self):
        assert run(["build", "--field", "F3t", "--place", "finite:t", "--coset-cap", "1"]) == EXIT_EXHAUSTED
        assert run(["build", "--field", "Q", "--place", "prime:5", "--ram-bound", "0"]) == EXIT_EXHAUSTED


def test_reload_agrees_with_memory(def_file, f3_def, capsys):
    rng = random.Random(5)
    pool = list(enumerate_elements(f3_def.field, 3))
    for x in rng.sample(pool, 25):
        assert run(["decide", "--def", str(def_file), "--element", f3_def.field.fmt(x)]) == EXIT_OK
        got = verdict(capsys.readouterr().out) == "true"
        assert got == decide(f3_def, x)[0]
    assert dumps(definition_to_json(f3_def)) == def_file.read_text()
