"""End-to-end checks of the command-line interface."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

import sparse_lqr as sq
from sparse_lqr.cli import main
from sparse_lqr.generate import random_instance

from conftest import scalar_instance


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def scalar_file(tmp_path):
    p = tmp_path / "scalar.json"
    sq.save_instance(scalar_instance(), p)
    return str(p)


@pytest.fixture
def chain_file(tmp_path):
    p = tmp_path / "chain.json"
    sq.save_instance(scalar_instance(N=4, d=2), p)
    return str(p)


def test_schedule_prints_result_and_trace(runner, scalar_file):
    res = runner.invoke(main, ["schedule", scalar_file])
    assert res.exit_code == 0
    assert "schedule: [0]" in res.output
    assert "J: 1.5" in res.output
    assert "f: 0.5" in res.output
    assert "J_empty: 2" in res.output
    assert "iteration 1: instant 0  gain 0.5" in res.output


def test_schedule_budget_override_and_csv(runner, chain_file, tmp_path):
    out = tmp_path / "trace.csv"
    res = runner.invoke(main, ["schedule", chain_file, "--d", "3",
                               "--output", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "iteration,instant,gain,objective"
    assert len(lines) == 4
    assert f"wrote {out}" in res.output


def test_certify_scalar_instance(runner, scalar_file, tmp_path):
    out = tmp_path / "cert.csv"
    res = runner.invoke(main, ["certify", scalar_file, "--output", str(out)])
    assert res.exit_code == 0
    assert "defined: true" in res.output
    assert "gamma_lb: 1" in res.output
    assert "alpha_ub: 0" in res.output
    assert "factor: 1" in res.output
    lines = out.read_text().splitlines()
    assert lines[0].startswith("gamma_lb,alpha_ub,factor,defined")
    assert lines[1].startswith("1,0,1,true")


def test_certify_reports_undefined(runner, tmp_path):
    doc = {"A": [[1.0]], "B": [[0.0]], "x0": [1.0], "N": 2, "d": 1,
           "Q": {"scalar": 1.0}, "R": {"scalar": 1.0}}
    p = tmp_path / "dead.json"
    p.write_text(json.dumps(doc))
    res = runner.invoke(main, ["certify", str(p)])
    assert res.exit_code == 0
    assert "defined: false" in res.output
    assert "gamma_lb: nan" in res.output


def test_oracle_finds_best_instant(runner, tmp_path):
    p = tmp_path / "two.json"
    sq.save_instance(scalar_instance(N=2, d=1), p)
    res = runner.invoke(main, ["oracle", str(p)])
    assert res.exit_code == 0
    assert "optimal schedule: [0]" in res.output
    values = {line.split(":")[0]: float(line.split(":")[1])
              for line in res.output.splitlines() if ":" in line and
              not line.startswith("optimal")}
    assert values["f_star"] == pytest.approx(3.0 - 5.0 / 3.0, rel=1e-12)
    assert values["J_star"] == pytest.approx(5.0 / 3.0, rel=1e-12)


def test_oracle_budget_override(runner, chain_file):
    res = runner.invoke(main, ["oracle", chain_file, "--d", "4"])
    assert res.exit_code == 0
    assert "optimal schedule: [0, 1, 2, 3]" in res.output


def test_experiment_fig2_writes_csv(runner, tmp_path):
    inst_path = tmp_path / "plant.json"
    sq.save_instance(random_instance(np.random.default_rng(9800), N=5, d=5),
                     inst_path)
    out = tmp_path / "sweep.csv"
    res = runner.invoke(main, ["experiment", "fig2", "--d", "0:3",
                               "--trials", "3", "--instance", str(inst_path),
                               "--output", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "d,J_greedy,J_random_best,J_first_d"
    assert len(lines) == 5
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "1", "2", "3"]


def test_experiment_fig3_writes_rows_and_summary(runner, tmp_path):
    out = tmp_path / "fig3.csv"
    res = runner.invoke(main, ["experiment", "fig3", "--realizations", "6",
                               "--output", str(out)])
    assert res.exit_code == 0
    assert (tmp_path / "fig3_summary.csv").exists()
    assert f"wrote {out}" in res.output
    lines = out.read_text().splitlines()
    assert len(lines) == 7
    assert lines[0] == "realization,spectral_norm_A,gamma_lb,alpha_ub," \
        "factor,defined"


def test_experiment_stochastic_reports_mean(runner, tmp_path):
    out = tmp_path / "st.csv"
    res = runner.invoke(main, ["experiment", "stochastic",
                               "--realizations", "6", "--output", str(out)])
    assert res.exit_code == 0
    assert "mean factor (unit covariance):" in res.output
    header = out.read_text().splitlines()[0]
    assert header.endswith(",factor_cov")
    assert (tmp_path / "st_summary.csv").exists()


def test_validation_failures_exit_1(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [[1.0]], "B": [[1.0]], "x0": [1.0],
                               "N": 2, "d": 1, "Q": {"scalar": 1.0},
                               "R": {"scalar": 0.0}}))
    res = runner.invoke(main, ["schedule", str(bad)])
    assert res.exit_code == 1
    assert "error:" in res.stderr

    garbled = tmp_path / "garbled.json"
    garbled.write_text("{nope")
    res = runner.invoke(main, ["certify", str(garbled)])
    assert res.exit_code == 1

    res = runner.invoke(main, ["experiment", "fig2", "--d", "5:1"])
    assert res.exit_code == 1


def test_missing_file_exits_2(runner, tmp_path):
    res = runner.invoke(main, ["schedule", str(tmp_path / "absent.json")])
    assert res.exit_code == 2
    assert "io error:" in res.stderr


def test_numeric_blowup_exits_3(runner, tmp_path):
    doc = {"A": [[1e6]], "B": [[1.0]], "x0": [1.0], "N": 60, "d": 1,
           "Q": {"scalar": 1.0}, "R": {"scalar": 1.0}}
    p = tmp_path / "explosive.json"
    p.write_text(json.dumps(doc))
    res = runner.invoke(main, ["schedule", str(p)])
    assert res.exit_code == 3
    assert "numeric failure:" in res.stderr


def test_help_screens(runner):
    assert runner.invoke(main, ["--help"]).exit_code == 0
    assert runner.invoke(main, ["experiment", "--help"]).exit_code == 0
    for sub in ("fig2", "fig3", "stochastic"):
        assert runner.invoke(main, ["experiment", sub, "--help"]).exit_code == 0
