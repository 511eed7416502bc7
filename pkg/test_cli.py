"""
Tests for the command line: exit codes, reports and CSV export.
"""

import json

import pytest
from typer.testing import CliRunner

from cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, app
from utils import dump_json

runner = CliRunner()


def test_valuation_of_a_power():
    result = runner.invoke(app, ["valuation", "eps^2"])
    assert result.exit_code == EXIT_OK
    assert "Order(2.000)" in result.stdout


def test_valuation_as_json():
    result = runner.invoke(app, ["valuation", "exp(-1/eps)", "--json"])
    assert result.exit_code == EXIT_OK
    data = json.loads(result.stdout)
    assert data["classification"] == "BeyondOrder"


def test_valuation_of_a_bad_spec():
    assert runner.invoke(app, ["valuation", "eps +"]).exit_code == EXIT_CONFIG


def test_verify_writes_the_report(tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "--suite", "A-valuation-engine", "--out", str(out)])
    assert result.exit_code == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["summary"] == {"total": 1, "passed": 1, "skipped": 0, "failed": 0}
    assert document["checks"][0]["check_id"] == "A-valuation-engine"
    assert document["eps_grid"] == {"base": 2, "k_min": 6, "k_max": 40}


def test_verify_applies_overrides(tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "-s", "A-valuation-engine", "-o", str(out), "--eps-kmax", "30"])
    assert result.exit_code == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["eps_grid"]["k_max"] == 30


def test_verify_unknown_suite(tmp_path):
    result = runner.invoke(app, ["verify", "--suite", "Z-nothing", "--out", str(tmp_path / "r.json")])
    assert result.exit_code == EXIT_CONFIG
    assert not (tmp_path / "r.json").exists()


def test_verify_bad_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"eps_grid": {"k_max": 3}}), encoding="utf-8")
    result = runner.invoke(app, ["verify", "--config", str(bad), "--out", str(tmp_path / "r.json")])
    assert result.exit_code == EXIT_CONFIG


def test_verify_rejects_bad_override(tmp_path):
    result = runner.invoke(app, ["verify", "-s", "A-valuation-engine", "--jobs", "0",
                                 "--out", str(tmp_path / "r.json")])
    assert result.exit_code == EXIT_CONFIG


def test_report_exports_csv(tmp_path):
    document = {"checks": [{"check_id": "X", "series": {"net": [[-6.0, -12.0], [-7.0, -14.0]]}}]}
    source = tmp_path / "report.json"
    source.write_text(dump_json(document), encoding="utf-8")
    result = runner.invoke(app, ["report", str(source)])
    assert result.exit_code == EXIT_OK
    lines = result.stdout.splitlines()
    assert lines[0] == "check_id,series,log2_eps,log2_magnitude"
    assert lines[1] == "X,net,-6.0,-12.0"
    csv_path = tmp_path / "series.csv"
    assert runner.invoke(app, ["report", str(source), "--out", str(csv_path)]).exit_code == EXIT_OK
    assert csv_path.read_text(encoding="utf-8").splitlines() == lines


def test_report_of_a_missing_file(tmp_path):
    assert runner.invoke(app, ["report", str(tmp_path / "missing.json")]).exit_code == EXIT_CONFIG


def test_checks_lists_the_registry():
    result = runner.invoke(app, ["checks"], env={"COLUMNS": "200"})
    assert result.exit_code == EXIT_OK
    assert "A-valuation-engine" in result.stdout


def test_mollifier_check_of_a_bad_table(tmp_path):
    table = tmp_path / "table.txt"
    table.write_text("0 1\n", encoding="utf-8")
    result = runner.invoke(app, ["mollifier", "check", "--table", str(table)])
    assert result.exit_code == EXIT_FAILED


@pytest.mark.slow
def test_mollifier_build_and_check(tmp_path):
    table = tmp_path / "phi_table.txt"
    assert runner.invoke(app, ["mollifier", "build", "--out", str(table)]).exit_code == EXIT_OK
    result = runner.invoke(app, ["mollifier", "check", "--table", str(table), "--alpha-max", "4"],
                           env={"COLUMNS": "200"})
    assert result.exit_code == EXIT_OK
    assert "counterexample_constant" in result.stdout


def test_reports_are_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        assert runner.invoke(app, ["verify", "-s", "A-valuation-engine", "-o", str(path)]).exit_code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
