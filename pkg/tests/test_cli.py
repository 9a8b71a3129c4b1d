import json
import shutil
import subprocess
import sys

import pytest

from hqdeform.cli import dump, main, run_command
from hqdeform.config import read_config
from hqdeform.fixtures import fixture_path

from conftest import FIXTURES
from mutations import MUTATIONS, mutate


def test_validate_fixture_lists_conditions():
    code, out = run_command(["validate", "dihedral-h1"])
    assert code == 0 and out["status"] == "pass"
    ids = [c["id"] for c in out["checks"]]
    assert "cor2.item3" in ids and "cor2.det1" in ids


def test_validate_by_path():
    code, _ = run_command(["validate", str(fixture_path("dihedral-hm1")), "--mode", "general"])
    assert code == 0


def test_validate_mutation_exits_one(tmp_path):
    raw = read_config(fixture_path("dihedral-h1"))
    label, fn, want = MUTATIONS["dihedral-h1"][0]
    p = tmp_path / "mut.json"
    p.write_text(json.dumps(mutate(raw, fn)))
    code, out = run_command(["validate", str(p)])
    assert code == 1
    assert want in [c["id"] for c in out["checks"] if c["status"] == "fail"]


def test_structure_error_becomes_failed_report(tmp_path):
    raw = read_config(fixture_path("cyclic-recipe"))
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(mutate(raw, MUTATIONS["cyclic-recipe"][6][1])))
    for cmd in (["validate", str(p)], ["assoc-check", str(p), "--samples", "2"]):
        code, out = run_command(cmd)
        assert code == 1 and out["checks"][0]["id"] == "cor2.b.eq8"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["validate"], ["deform", "dihedral-h1", "--a", "x1"],
                                  ["assoc-check", "dihedral-h1", "--samples", "many"]])
def test_usage_errors_exit_two(argv):
    code, out = run_command(argv)
    assert code == 2 and out["error"] == "usage"


def test_config_errors_exit_two(tmp_path):
    code, out = run_command(["validate", "no-such-fixture"])
    assert code == 2 and out["error"] == "config"
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run_command(["validate", str(p)])[0] == 2
    code, out = run_command(["deform", "dihedral-h1", "--a", "x1 +", "--b", "x2"])
    assert code == 2 and out["field"] == "element"


def test_deform():
    code, out = run_command(["deform", "dihedral-h1", "--a", "x1", "--b", "x2"])
    assert code == 0
    assert out["product"] == "x1*x2*w[e] + t*(w[t] + w[t^3])"
    assert out["coefficients"] == ["x1*x2*w[e]", "w[t] + w[t^3]"]


def test_assoc_check_records_seed():
    code, out = run_command(["assoc-check", "cyclic-recipe", "--samples", "20", "--seed", "3"])
    assert code == 0 and out["seed"] == 3 and out["samples"] == 20


def test_hopf_check_matrix():
    code, out = run_command(["hopf-check", "--all"])
    assert code == 0 and len(out["runs"]) == 5
    code, out = run_command(["hopf-check", "--field", "fp:7", "--q", "2", "--pbw-bound", "2"])
    assert code == 0 and out["runs"][0]["q"] == "2"
    assert run_command(["hopf-check", "--field", "fp:7", "--q", "1/7"])[0] == 2


def test_resolution_check_command():
    code, out = run_command(["resolution-check", "cyclic-recipe", "--max-total-degree", "2"])
    assert code == 0 and out["max_total_degree"] == 2


def test_nontrivial_command():
    code, out = run_command(["nontrivial", "dihedral-h1", "--degree-bound", "2"])
    assert code == 0
    assert out["verdict"] == "nontrivial" and out["basis"] == "proof"
    assert out["coboundary"]["degree_bound"] == 2 and out["coboundary"]["certificate_rows"]


def test_examples_list_and_show():
    code, out = run_command(["examples", "list"])
    assert code == 0 and sorted(out["fixtures"]) == sorted(FIXTURES)
    code, out = run_command(["examples", "show", "dihedral-h1"])
    assert out["dihedral-h1"]["expected"]["q"] == "1"


@pytest.fixture(scope="module")
def examples_run():
    return run_command(["examples", "run"])


def test_examples_run_reproduces_recorded_verdicts(examples_run):
    code, out = examples_run
    assert code == 0, out
    assert [r["name"] for r in out["results"]] == sorted(FIXTURES)
    for r in out["results"]:
        assert r["mismatches"] == {}
        assert read_config(fixture_path(r["name"]))["expected"]


def test_pipeline_is_byte_for_byte_deterministic(examples_run):
    assert dump(run_command(["examples", "run"])[1]) == dump(examples_run[1])


def test_examples_run_detects_tampered_expectation(monkeypatch):
    import hqdeform.cli as cli
    real = cli.read_config

    def tampered(path):
        raw = real(path)
        raw["expected"]["q"] = "7"
        return raw

    monkeypatch.setattr(cli, "read_config", tampered)
    code, out = run_command(["examples", "run", "cyclic-recipe"])
    assert code == 1 and "q" in out["results"][0]["mismatches"]


def test_main_prints_sorted_json(capsys):
    assert main(["examples", "list"]) == 0
    text = capsys.readouterr().out
    assert json.loads(text) == {"fixtures": sorted(FIXTURES)}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hqdeform", "validate", "dihedral-h1"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "pass"


@pytest.mark.skipif(shutil.which("hqdeform") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["hqdeform", "validate", "bogus-name"], capture_output=True, text=True)
    assert r.returncode == 2
