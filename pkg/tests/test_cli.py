import io
import json
from pathlib import Path

import pytest

from qcluster.cli import run

DATA = Path(__file__).resolve().parents[1] / "data"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


def test_seed_check():
    code, text = call("seed-check", "--seed", DATA / "a2_seed.json")
    assert code == 0 and "pass" in text


def test_seed_check_auto_lambda():
    code, _ = call("seed-check", "--seed", DATA / "a2_seed_auto.json")
    assert code == 0


def test_variable_json():
    code, text = call("variable", "--seed", DATA / "a2_seed.json", "--path", "0,1", "--target", "1", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "pass"
    assert doc["engine"]["name"] == "qcluster"
    assert len(doc["inputs"]["seed"]["sha256"]) == 64
    assert doc["result"]["positive"]


def test_mutate():
    code, text = call("mutate", "--seed", DATA / "a2_seed.json", "--path", "0")
    assert code == 0 and "B: [[0, -1], [1, 0]]" in text


def test_expand_hexagon():
    code, text = call("expand", "--surface", DATA / "hexagon_fan.json", "--arc", "0-2", "--verify")
    assert code == 0 and "ORACLE MATCH" in text
    code, text = call("expand", "--surface", DATA / "hexagon_fan.json", "--arc", "1-4", "--verify")
    assert code == 0 and "ORACLE MATCH" in text


def test_expand_other_target():
    code, text = call(
        "expand", "--surface", DATA / "hexagon_fan.json",
        "--target-triangulation", DATA / "hexagon_fan_1.json", "--arc", "0-3", "--verify", "--format", "json",
    )
    doc = json.loads(text)
    assert code == 0 and doc["result"]["oracle_match"]
    assert "target_triangulation" in doc["inputs"]


def test_expand_annulus_word():
    code, text = call("expand", "--surface", DATA / "annulus_2_1.json", "--arc", "1 >R 0", "--verify")
    assert code == 0 and "ORACLE MATCH" in text


def test_verify_suite_pentagon():
    code, text = call("verify-suite", "--surface", DATA / "pentagon_fan.json")
    assert code == 0
    assert text.strip().splitlines()[-1] == "25/25 instances pass"


def test_index_and_submodules():
    code, text = call("index", "--surface", DATA / "pentagon_fan.json", "--arc", "1-3")
    assert code == 0 and text.startswith("index:")
    code, text = call("submodules", "--surface", DATA / "hexagon_fan.json", "--arc", "1-5")
    assert code == 0 and "4 canonical submodules" in text


def test_byte_stable():
    args = ("expand", "--surface", DATA / "hexagon_fan.json", "--arc", "1-5", "--format", "json")
    assert call(*args) == call(*args)


def test_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 2, "n": 2, "B": [[0, 1], [-1, 0]], "lambda": [[0, 2], [-2, 0]]}')
    code, text = call("seed-check", "--seed", bad, "--format", "json")
    assert code == 2
    assert json.loads(text)["error"]["type"] == "NotCompatible"
    code, _ = call("seed-check", "--seed", tmp_path / "missing.json")
    assert code == 2
    code, _ = call("expand", "--surface", DATA / "pentagon_fan.json", "--arc", "0-1")
    assert code == 2


def test_usage_error():
    with pytest.raises(SystemExit):
        call("no-such-command")
