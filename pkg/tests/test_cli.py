from __future__ import annotations

import config
import suites
from cli import cli
from conftest import stdout_json
from models import SuiteReport


def test_normal_form(runner):
    result = runner.invoke(cli, ["normal-form", "--p", "7", "E^(1) D^(1)"])
    assert result.exit_code == 0
    assert "D^(1) E^(1) - H^(1)" in result.output


def test_normal_form_json(runner):
    result = runner.invoke(cli, ["normal-form", "--p", "7", "--format", "json", "E^(2) E^(3)"])
    assert result.exit_code == 0
    assert stdout_json(result.output) == {"p": 7, "result": "3 E^(5)"}


def test_normal_form_parse_error_exits_2(runner):
    result = runner.invoke(cli, ["normal-form", "--p", "7", "E^(1) +"])
    assert result.exit_code == 2


def test_gram_json(runner):
    result = runner.invoke(cli, ["gram", "--carrier", "affine:sl2", "--p", "5", "--level", "1",
                                 "--max-degree", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = stdout_json(result.output)
    assert doc["carrier"] == "affine:sl2"
    assert doc["rows"][1]["matrix"] == [[0, 0, 4], [0, 3, 0], [4, 0, 0]]
    assert doc["rows"][1]["quotient_dim"] == 3


def test_gram_text_uses_symmetric_residues(runner):
    result = runner.invoke(cli, ["gram", "--p", "5", "-N", "1"])
    assert result.exit_code == 0
    assert "[ 0  0 -1]" in result.output


def test_dims_csv(runner):
    result = runner.invoke(cli, ["dims", "--carrier", "virasoro", "--p", "7", "--c", "0", "-N", "2",
                                 "--format", "csv"])
    assert result.exit_code == 0
    assert "degree,dim\n0,1\n1,0\n2,0" in result.output


def test_formspace(runner):
    result = runner.invoke(cli, ["formspace", "--carrier", "virasoro", "--p", "7", "--c", "3", "-N", "4"])
    assert result.exit_code == 0
    assert result.output.strip().splitlines()[-1] == "1"


def test_formspace_at_zero_truncation_is_flagged(runner):
    result = runner.invoke(cli, ["formspace", "--carrier", "virasoro", "--p", "7", "-N", "0"])
    assert result.exit_code == 0
    assert result.output.strip().splitlines()[-1] == "1  (truncation-limited: N=0 leaves no positive degree to check)"

    doc = stdout_json(runner.invoke(cli, ["formspace", "--carrier", "virasoro", "--p", "7", "-N", "0",
                                          "--format", "json"]).output)
    assert doc == {"dim": 1, "stabilized": False, "span_dim": 0, "last_growth_degree": 0}


def test_invalid_prime_exits_2(runner):
    result = runner.invoke(cli, ["gram", "--p", "4"])
    assert result.exit_code == 2
    assert "✗" in result.output


def test_unknown_carrier_exits_2(runner):
    result = runner.invoke(cli, ["dims", "--carrier", "w3"])
    assert result.exit_code == 2


def test_verify_passing_suite(runner):
    result = runner.invoke(cli, ["verify", "--suite", "l1-vanishing", "--carrier", "virasoro", "--p", "7",
                                 "--c", "1", "-N", "4"])
    assert result.exit_code == 0
    assert "✓ l1-vanishing" in result.output


def test_verify_json_single_suite_is_an_object(runner):
    result = runner.invoke(cli, ["verify", "--suite", "lminus-subset", "-N", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = stdout_json(result.output)
    assert doc["suite"] == "lminus-subset"
    assert doc["failures"] == []


def test_verify_unknown_suite_exits_2(runner):
    result = runner.invoke(cli, ["verify", "--suite", "nope"])
    assert result.exit_code == 2


def test_verify_failure_exits_1(runner, monkeypatch):
    def broken(cfg, settings):
        report = SuiteReport("l1-vanishing", {"p": cfg.p}, attempted=2, passed=1)
        return report

    monkeypatch.setitem(suites.CATALOG, "l1-vanishing", broken)
    result = runner.invoke(cli, ["verify", "--suite", "l1-vanishing", "-N", "1"])
    assert result.exit_code == 1
    assert "✗ l1-vanishing: 1/2 passed" in result.output


def json_text(output: str) -> str:
    lines = output.splitlines()
    start = next(i for i, line in enumerate(lines) if line in ("{", "["))
    return "\n".join(lines[start:])


def test_verify_all_is_byte_identical_across_runs_and_workers(runner, monkeypatch):
    monkeypatch.setitem(config.DEFAULT_SUITE_SETTINGS, "hopf_bound", 2)
    args = ["verify", "--suite", "all", "--carrier", "affine:sl2", "--p", "5", "-N", "6", "--seed", "3",
            "--format", "json"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    threaded = runner.invoke(cli, args + ["--workers", "4"])
    assert first.exit_code == second.exit_code == threaded.exit_code == 0
    assert json_text(first.output) == json_text(second.output) == json_text(threaded.output)
    docs = stdout_json(first.output)
    assert [doc["suite"] for doc in docs] == list(suites.CATALOG)


def test_dual_check(runner):
    result = runner.invoke(cli, ["dual-check", "--carrier", "affine:sl2", "--p", "5", "-N", "2", "--window", "1",
                                 "--format", "json"])
    assert result.exit_code == 0
    doc = stdout_json(result.output)
    assert [row["dim"] for row in doc["window"]] == [1, 3]
    assert all(row["dual_basis_pairs_to_identity"] for row in doc["window"])
    assert doc["report"]["suite"] == "dual-module"


def test_dual_check_window_out_of_range(runner):
    result = runner.invoke(cli, ["dual-check", "-N", "2", "--window", "3"])
    assert result.exit_code == 2
