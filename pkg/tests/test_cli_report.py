import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from asepdual.cli import SEED_ENV, resolve_seed, run_cli
from asepdual.report import build_document, emit_report, load_schema
from asepdual.results import CheckResult
from asepdual.scalar_ring import TAU
from asepdual.verification import RunConfig, run_all


def test_empty_grid_document():
    doc = build_document([])
    assert doc["checks"] == [] and doc["status"] == "pass"
    jsonschema.validate(doc, load_schema())


def test_exact_residual_strings():
    ok = CheckResult("x", {"mode": "exact"}, True, 0)
    bad = CheckResult("y", {"mode": "exact"}, False, TAU - TAU.inverse(), {"r": Fraction(1, 3)})
    doc = build_document([ok, bad])
    assert doc["checks"][0]["residual"] == "0"
    assert doc["checks"][1]["residual"] == "t^2 - t^-2"
    assert doc["checks"][1]["derived"] == {"r": "1/3"}
    assert doc["status"] == "fail"


def test_numeric_residual_is_float():
    doc = build_document([CheckResult("z", {"mode": "numeric"}, True, 3.5e-15)])
    assert doc["checks"][0]["residual"] == 3.5e-15
    assert doc["mode"] == "numeric"


def test_key_order_fixed():
    doc = build_document([CheckResult("x", {}, True, 0)])
    assert list(doc) == ["version", "mode", "timestamp", "grid", "checks", "status"]
    assert list(doc["checks"][0]) == ["name", "params", "passed", "residual", "derived"]


def test_default_run_validates_against_schema(tmp_path):
    path = tmp_path / "r.json"
    emit_report(run_all(RunConfig()), "json", str(path))
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, load_schema())
    assert doc["status"] == "pass"


def test_emit_report_unwritable(tmp_path):
    with pytest.raises(OSError):
        emit_report([], "json", str(tmp_path / "missing" / "r.json"))


def test_cli_verify_all_exact_passes():
    assert run_cli(["verify", "all", "--Lmax", "4", "--Nmax", "2", "--mode", "exact", "--quiet"]) == 0


def test_cli_regime_violation_exits_one():
    argv = ["verify", "duality", "--L", "3", "--N", "1", "--p", "2", "--q", "0.5", "--alpha", "1", "--gamma", "1"]
    assert run_cli(argv) == 1


def test_cli_help_and_usage(capsys):
    assert run_cli(["--help"]) == 0
    assert "verify" in capsys.readouterr().out
    assert run_cli(["verify", "all", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run_cli(["verify", "duality", "--p", "2"]) == 2
    assert run_cli(["verify", "duality", "--p", "2", "--q", "1"]) == 2  # irrational tau in exact mode
    assert run_cli(["verify", "duality", "--L", "0"]) == 2


def test_cli_unwritable_json():
    assert run_cli(["verify", "conventions", "--json", "/nonexistent/dir/r.json"]) == 2


def test_cli_json_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run_cli(["verify", "all", "--Lmax", "2", "--Nmax", "1", "--json", str(p), "--quiet"]) == 0
    assert a.read_text() == b.read_text()
    jsonschema.validate(json.loads(a.read_text()), load_schema())


@pytest.mark.parametrize("target", ["prop1", "lemma", "duality", "corollary", "symmetry", "examples", "conventions"])
def test_cli_targets_pass(target):
    assert run_cli(["verify", target, "--Lmax", "3", "--Nmax", "2", "--quiet"]) == 0


def test_cli_numeric_mode():
    assert run_cli(["verify", "all", "--Lmax", "3", "--mode", "numeric", "--tau", "1.5", "--quiet"]) == 0


def test_cli_negative_controls():
    assert run_cli(["verify", "duality", "--Lmax", "2", "--N", "1", "--beta", "1/10", "--quiet"]) == 1
    assert run_cli(["verify", "duality", "--Lmax", "2", "--N", "1", "--tau", "2", "--alpha", "101/25", "--quiet"]) == 1


def test_cli_simulate_small(tmp_path):
    path = tmp_path / "mc.json"
    argv = ["simulate", "duality-mc", "--L", "3", "--trajectories", "5000", "--seed", "4", "--json", str(path)]
    assert run_cli(argv) == 0
    doc = json.loads(path.read_text())
    assert doc["checks"][0]["params"]["seed"] == 4
    jsonschema.validate(doc, load_schema())
    assert run_cli(["simulate", "duality-mc", "--L", "3", "--alpha", "1", "--trajectories", "10"]) == 2


def test_seed_env(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "17")
    assert resolve_seed(None) == 17
    assert resolve_seed(3) == 3
    monkeypatch.setenv(SEED_ENV, "nope")
    assert run_cli(["simulate", "duality-mc", "--trajectories", "10"]) == 2


def test_report_schema_command(capsys):
    assert run_cli(["report", "schema"]) == 0
    assert json.loads(capsys.readouterr().out) == load_schema()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "asepdual", "verify", "conventions", "--quiet"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.startswith("PASS")
