#!/usr/bin/python
# Copyright (C) 2026 The DecoyForge Authors
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA 02110-1301 USA


import csv
import dataclasses
import io
import json
import logging

import pytest

from decoyforge.cli import main
from decoyforge.milp import build_milp, count_stats
from decoyforge.model import CostModel
from decoyforge.scenario import parse_scenario, serialize_scenario

from .conftest import (
    GRID5_FOUR_CHANGES,
    GRID5_O1_NORTH,
    GRID5_THREE_CHANGES,
    TOY_DOCUMENT,
    cycle_scenario,
)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _error(capsys):
    err = capsys.readouterr().err
    return json.loads(err.strip().splitlines()[-1])


@pytest.fixture()
def grid5_path(tmp_path):
    path = tmp_path / "grid5.scn"
    assert main(["gen", "grid", "--n", "5", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture()
def toy_path(tmp_path):
    path = tmp_path / "toy.scn"
    path.write_text(TOY_DOCUMENT)
    return str(path)


def test_gen_grid_header(grid5_path):
    with open(grid5_path) as f:
        first = f.readline()
    assert first.startswith("# generated by decoyforge ")


def test_validate(toy_path, capsys):
    assert main(["validate", "--scenario", toy_path]) == 0
    assert capsys.readouterr().out == "%s: ok\n" % toy_path


def test_validate_failure(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text(TOY_DOCUMENT.replace(
        'successors { state: "s2" prob: 0.5 }', 'successors { state: "s2" prob: 0.4 }'))
    assert main(["validate", "--scenario", str(path)]) == 1
    error = _error(capsys)
    assert error["code"] == "validation-failed"
    assert "row sum ≠ 1" in error["description"]


def test_parse_failure(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text("states: \"s0\"\nwibble: 1\n")
    assert main(["validate", "--scenario", str(path)]) == 1
    assert _error(capsys)["code"] == "parse-error"


def test_missing_file(tmp_path, capsys):
    assert main(["validate", "--scenario", str(tmp_path / "nope.scn")]) == 1
    assert _error(capsys)["code"] == "io-error"


def test_verify_csv(grid5_path, capsys):
    assert main([
        "verify", "--scenario", grid5_path, "--alt", "o1->o3", "--out", "csv",
        "--omit-timing"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == (
        "scenario,alteration,cost,within_budget,probability,residual,method,seconds")
    [row] = _rows(text)
    assert row["alteration"] == "o1->o3"
    assert row["cost"] == "1"
    assert row["within_budget"] == "false"
    assert float(row["probability"]) == pytest.approx(0.720, abs=0.005)
    assert float(row["probability"]) == pytest.approx(GRID5_O1_NORTH, abs=1e-6)
    assert row["method"] == "direct"
    assert row["seconds"] == ""


def test_verify_table(grid5_path, capsys):
    assert main(["verify", "--scenario", grid5_path, "--alt", "o1->o3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == [
        "scenario", "alteration", "cost", "within_budget", "probability",
        "residual", "method", "seconds"]
    assert len(lines) == 2


def test_verify_csv_path(grid5_path, tmp_path):
    out = tmp_path / "verify.csv"
    assert main([
        "verify", "--scenario", grid5_path, "--out", "csv:%s" % out]) == 0
    [row] = _rows(out.read_text())
    assert row["alteration"] == ""
    assert row["within_budget"] == "true"


def test_verify_bad_alteration(grid5_path, capsys):
    assert main(["verify", "--scenario", grid5_path, "--alt", "o1->o9"]) == 1
    assert _error(capsys)["code"] == "unresolved-reference"
    assert main(["verify", "--scenario", grid5_path, "--alt", "o1"]) == 1
    assert _error(capsys)["code"] == "invalid-alteration"


def test_verify_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(TOY_DOCUMENT))
    assert main([
        "verify", "--scenario", "-", "--alt", "o3->o1", "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert float(row["probability"]) == pytest.approx(0.5)


def test_optimize_sweep(grid5_path, capsys):
    argv = [
        "optimize", "--scenario", grid5_path, "--method", "bb",
        "--sweep", "0,1,2,3,4", "--out", "csv", "--omit-timing"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert first.splitlines()[0] == "budget,value,cost,status,nodes,seconds,alteration"
    rows = _rows(first)
    assert [row["budget"] for row in rows] == ["0", "1", "2", "3", "4"]
    values = [float(row["value"]) for row in rows]
    assert values == sorted(values)
    assert values[3] == pytest.approx(GRID5_THREE_CHANGES, abs=1e-6)
    assert values[4] == pytest.approx(GRID5_FOUR_CHANGES, abs=1e-6)
    assert all(row["status"] == "optimal" for row in rows)
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_optimize_budget(toy_path, capsys):
    assert main([
        "optimize", "--scenario", toy_path, "--budget", "0", "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert row["alteration"] == ""
    assert float(row["value"]) == 0


def test_optimize_methods_agree(toy_path, capsys):
    values = {}
    for method in ("bb", "brute", "milp"):
        assert main([
            "optimize", "--scenario", toy_path, "--method", method, "--out", "csv"]) == 0
        [row] = _rows(capsys.readouterr().out)
        values[method] = (row["alteration"], float(row["value"]))
    assert values["bb"] == ("o3->o1", pytest.approx(0.5))
    assert values["brute"] == values["bb"]
    assert values["milp"][0] == "o3->o1"


def test_optimize_sweep_and_budget_exclusive(toy_path, capsys):
    assert main([
        "optimize", "--scenario", toy_path, "--budget", "1", "--sweep", "1,2"]) == 1
    error = _error(capsys)
    assert error["code"] == "invalid-arguments"
    assert "--sweep" in error["description"]


def test_usage_errors(toy_path, capsys):
    assert main(["optimize", "--scenario", toy_path, "--wibble"]) == 1
    assert _error(capsys)["code"] == "invalid-arguments"
    assert main(["optimize", "--scenario", toy_path, "--method", "anneal"]) == 1
    assert _error(capsys)["code"] == "invalid-arguments"
    assert main([]) == 1
    assert _error(capsys)["code"] == "invalid-arguments"


def test_optimize_export(toy_path, tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("DECOYFORGE_SOLVER", raising=False)
    lp = tmp_path / "toy.lp"
    assert main([
        "optimize", "--scenario", toy_path, "--method", "export",
        "--lp", str(lp)]) == 0
    assert lp.read_text().startswith("\\ decoyforge MILP model\n")


def test_optimize_export_needs_target(toy_path, capsys, monkeypatch):
    monkeypatch.delenv("DECOYFORGE_SOLVER", raising=False)
    assert main([
        "optimize", "--scenario", toy_path, "--method", "export",
        "--solve-external", ""]) == 1
    assert _error(capsys)["code"] == "invalid-arguments"


def test_optimize_solver_error(toy_path, capsys):
    assert main([
        "optimize", "--scenario", toy_path, "--method", "export",
        "--solve-external", "false"]) == 2
    assert _error(capsys)["code"] == "solver-error"


def test_forbidden_initial_identity(tmp_path, capsys):
    path = tmp_path / "knapsack.scn"
    assert main([
        "gen", "knapsack", "--weights", "1,2,3,4,5", "--values", "20,30,40,50,60",
        "--capacity", "7", "--threshold", "100", "--out", str(path)]) == 0
    from decoyforge.scenario import load_scenario

    scenario = load_scenario(str(path))
    cost = {k: v for k, v in scenario.cost_model.cost.items() if k != ("o0", "o0")}
    scenario = dataclasses.replace(scenario, cost_model=CostModel(cost=cost, budget=7))
    path.write_text(serialize_scenario(scenario))
    assert main(["optimize", "--scenario", str(path), "--method", "brute"]) == 1
    error = _error(capsys)
    assert error["code"] == "initial-observation-forbidden"
    assert "o0" in error["description"]


def test_gen_knapsack_stdout(capsys):
    assert main([
        "gen", "knapsack", "--weights", "1,2,3,4,5", "--values", "20,30,40,50,60",
        "--capacity", "7", "--threshold", "100"]) == 0
    out = capsys.readouterr().out
    assert "# threshold_r=0.25\n" in out
    assert 'decoy: "sbot"' in out


def test_gen_knapsack_invalid(capsys):
    assert main([
        "gen", "knapsack", "--weights", "1,2", "--values", "1",
        "--capacity", "1", "--threshold", "1"]) == 1
    assert _error(capsys)["code"] == "invalid-generator-parameters"


def test_export_lp(toy_path, tmp_path):
    first = tmp_path / "first.lp"
    second = tmp_path / "second.lp"
    assert main(["export-lp", "--scenario", toy_path, "--lp", str(first)]) == 0
    assert main(["export-lp", "--scenario", toy_path, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_stats_grid_sizes(capsys):
    assert main(["stats", "--grid-sizes", "5", "--out", "csv", "--omit-timing"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == "n,num_vars,num_constraints,seconds"
    [row] = _rows(text)
    assert row["n"] == "5"
    assert int(row["num_vars"]) > 0
    assert row["seconds"] == ""


def test_stats_scenario(toy_path, capsys):
    assert main([
        "stats", "--scenario", toy_path, "--out", "csv", "--no-certificate"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert row["num_vars"] == "54"
    assert row["num_constraints"] == "118"
    assert main(["stats", "--scenario", toy_path, "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    stats = count_stats(build_milp(parse_scenario(TOY_DOCUMENT)))
    assert row["num_vars"] == str(stats.num_vars)
    assert row["num_constraints"] == str(stats.num_constraints)


def test_stats_invalid_scenario(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text(TOY_DOCUMENT.replace(
        'successors { state: "s2" prob: 0.5 }', 'successors { state: "s2" prob: 0.4 }'))
    assert main(["stats", "--scenario", str(path)]) == 1
    assert _error(capsys)["code"] == "validation-failed"


def test_simulate_reproducible(grid5_path, capsys):
    argv = [
        "simulate", "--scenario", grid5_path, "--alt", "o1->o3", "--episodes", "1",
        "--seed", "11", "--out", "csv"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert _rows(first)[0]["estimate"] in ("0", "1")
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_config_error(toy_path, tmp_path, capsys):
    config = tmp_path / "decoyforge.conf"
    config.write_text("verifier { tolerence: 1 }\n")
    assert main(["validate", "--scenario", toy_path, "--config", str(config)]) == 1
    assert _error(capsys)["code"] == "config-error"


def test_config_applies(toy_path, tmp_path, capsys):
    config = tmp_path / "decoyforge.conf"
    config.write_text("verifier { direct_max_states: 1 }\n")
    assert main([
        "verify", "--scenario", toy_path, "--config", str(config), "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert row["method"] == "iterative"


@pytest.fixture()
def cycle_path(tmp_path):
    path = tmp_path / "cycle.scn"
    path.write_text(serialize_scenario(cycle_scenario()))
    return str(path)


def test_optimize_milp_cycle(cycle_path, capsys):
    assert main([
        "optimize", "--scenario", cycle_path, "--method", "milp", "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert row["status"] == "optimal"
    assert row["alteration"] == ""
    assert float(row["value"]) == pytest.approx(0.5)


def test_optimize_milp_inexact(cycle_path, capsys):
    assert main([
        "optimize", "--scenario", cycle_path, "--method", "milp", "--no-certificate",
        "--out", "csv"]) == 0
    [row] = _rows(capsys.readouterr().out)
    assert row["status"] == "inexact"
    assert row["alteration"] == "o1->o2"
    assert float(row["value"]) == pytest.approx(0.0, abs=1e-12)


def test_sweep_brute_force_limit(toy_path, tmp_path, capsys):
    config = tmp_path / "decoyforge.conf"
    config.write_text("optimizer { brute_force_limit: 1 }\n")
    assert main([
        "optimize", "--scenario", toy_path, "--method", "brute", "--sweep", "0,1",
        "--config", str(config)]) == 2
    assert _error(capsys)["code"] == "brute-force-too-large"


def test_settings_logged(toy_path, tmp_path, caplog, capsys):
    config = tmp_path / "decoyforge.conf"
    config.write_text("optimizer { max_nodes: 7 }\nmilp { sparse: false }\n")
    with caplog.at_level(logging.INFO):
        assert main([
            "optimize", "--scenario", toy_path, "--config", str(config),
            "--max-seconds", "30"]) == 0
    [settings] = [
        r.getMessage() for r in caplog.records
        if r.getMessage().startswith("Settings: ")]
    assert "max_nodes=7" in settings
    assert "max_seconds=30.0" in settings
    assert "sparse=False" in settings
    assert "certify_reachability=True" in settings
    assert "method='bb'" in settings
