import json
import subprocess
import sys

import pytest

from wonderful_sl2.cli import main
from wonderful_sl2.errors import ConfigError
from wonderful_sl2.report import Check, Report, emit_report
from wonderful_sl2.suites import Config, run_suite


def test_empty_report():
    doc = json.loads(emit_report(Report("none", {}), "json"))
    assert doc["checks"] == [] and doc["summary"] == {"passed": 0, "failed": 0}


def test_failing_check_carries_witness():
    rep = Report("x", {"p": 5}, [Check("c", "claim", False, 1, 2, "[1, 0; 0, 1]")])
    doc = json.loads(emit_report(rep, "json"))
    assert doc["checks"][0]["status"] == "fail"
    assert doc["checks"][0]["witness"] == "[1, 0; 0, 1]"
    text = emit_report(rep, "text").decode()
    assert "witness" in text and "failed 1" in text


def test_schema():
    doc = run_suite("square-classes", Config()).to_dict()
    assert set(doc) == {"suite", "params", "checks", "summary"}
    assert set(doc["params"]) == {"p", "N", "seed", "involution", "m", "ext"}
    for c in doc["checks"]:
        assert {"id", "paper_ref", "status", "expected", "observed"} <= set(c)
        assert c["paper_ref"]


@pytest.mark.parametrize("kw", [{"prime": 2}, {"prime": 9}, {"precision": 2}, {"m": "x"}, {"b": "1/0"}, {"n_max": 50}])
def test_bad_configs(kw):
    with pytest.raises(ConfigError):
        run_suite("square-classes", Config(**kw))


def test_exit_codes(capsys):
    assert main(["verify", "square-classes", "--prime", "5"]) == 0
    assert main(["verify", "all", "--prime", "2"]) == 2
    assert "config error" in capsys.readouterr().err


def test_verify_limits_example(capsys):
    assert main(["verify", "limits", "--involution", "inner", "--m", "one", "--b", "2", "--prime", "5", "--trials", "50"]) == 0
    doc = json.loads(capsys.readouterr().out)
    first = doc["checks"][0]
    assert first["id"] == "limits.configured" and first["status"] == "pass"


def test_limits_rows(capsys):
    assert main(["limits", "--b", "2", "--n-max", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in doc["rows"]] == [1, 2, 3, 4, 5]
    assert [r["depth"] for r in doc["rows"]][:3] == [4, 8, 12]
    assert doc["result"]["status"] == "Converged"
    assert main(["limits", "--b", "2", "--direction", "expand"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["status"] == "Diverged"


def test_orbits_histogram(capsys):
    assert main(["orbits", "--space", "f", "--group", "diag", "--trials", "300"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert sum(doc["histogram"].values()) == 300
    assert main(["orbits", "--space", "f", "--group", "hm"]) == 2


def test_figures(tmp_path, capsys):
    assert main(["verify", "orbits", "--trials", "200", "--figures", str(tmp_path)]) == 0
    assert main(["limits", "--figures", str(tmp_path)]) == 0
    pngs = sorted(p.name for p in tmp_path.glob("*.png"))
    assert "limits_depth_vs_n.png" in pngs and "orbits_diag_labels.png" in pngs
    assert all((tmp_path / n).read_bytes()[:4] == b"\x89PNG" for n in pngs)


def test_parallel_matches_sequential():
    cfg = Config(trials=100)
    a = emit_report(run_suite("cosets", cfg), "json")
    b = emit_report(run_suite("cosets", cfg, parallel=True), "json")
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "wonderful_sl2", "verify", "square-classes", "--trials", "50", "--format", "text"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "passed" in out.stdout
