#!/usr/bin/python3
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

"""Command line entry point.

Every failure ends with one JSON object on stderr, carrying a result code
and a description, and a nonzero exit code: 1 for malformed, invalid or
infeasible input and 2 when a solver gives up.
"""

__all__ = ["main", "Failure"]

import argparse
import asyncio
import csv
import io
import json
import logging
import os
import sys
import time
from typing import NoReturn, Optional

from aiohttp_openmetrics import REGISTRY, Gauge, push_to_gateway
from google.protobuf import text_format  # type: ignore

from . import version_string
from .config import format_config, load_config
from .generators import (
    GeneratorError,
    KnapsackInstance,
    gen_grid,
    gen_knapsack,
    reference_grid_spec,
)
from .milp import (
    ExternalSolverError,
    SolutionParseError,
    build_milp,
    count_stats,
    export_lp,
    run_external_solver,
    solve_milp,
)
from .model import (
    Alteration,
    InfeasibleScenario,
    Scenario,
    ScenarioResolutionError,
    alteration_cost,
    ensure_initial_identity,
    validate_scenario,
)
from .optimizer import (
    BruteForceTooLarge,
    Limits,
    OptResult,
    branch_and_bound,
    brute_force,
    budget_sweep,
)
from .scenario import ScenarioParseError, load_scenario, parse_scenario, serialize_scenario
from .verifier import NonConvergence, simulate, verify

last_success_gauge = Gauge(
    "job_last_success_unixtime", "Last time a batch job successfully finished"
)

VERIFY_COLUMNS = [
    "scenario", "alteration", "cost", "within_budget", "probability", "residual",
    "method", "seconds",
]
OPTIMIZE_COLUMNS = ["budget", "value", "cost", "status", "nodes", "seconds", "alteration"]
STATS_COLUMNS = ["n", "num_vars", "num_constraints", "seconds"]
MILP_AGREEMENT = 1e-6
SIMULATE_COLUMNS = [
    "scenario", "alteration", "estimate", "half_width_95", "episodes", "horizon", "seed",
]


class Failure(Exception):
    """A run failed with a machine-readable result code."""

    def __init__(self, code: str, description: str, exit_code: int = 1) -> None:
        self.code = code
        self.description = description
        self.exit_code = exit_code
        super().__init__(description)


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors end in the JSON failure line as well."""

    def error(self, message: str) -> NoReturn:
        raise Failure("invalid-arguments", f"{self.prog}: {message}")


def _number(v) -> str:
    if v is None:
        return ""
    return "%.12g" % float(v)


def _seconds(args, seconds: float) -> str:
    return "" if args.omit_timing else "%.3f" % seconds


def _emit(args, columns: list[str], rows: list[dict[str, str]]) -> None:
    """Write rows as a table or as CSV, to stdout or to the csv:<path> target."""
    if args.out == "table":
        widths = [
            max([len(c)] + [len(row[c]) for row in rows]) for c in columns
        ]
        print("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
        for row in rows:
            print("  ".join(row[c].ljust(w) for c, w in zip(columns, widths)).rstrip())
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out == "csv":
        sys.stdout.write(buf.getvalue())
    elif args.out.startswith("csv:"):
        path = args.out[len("csv:"):]
        with open(path, "w", newline="") as f:
            f.write(buf.getvalue())
        logging.info("Wrote %d rows to %s", len(rows), path)
    else:
        raise Failure("invalid-arguments", f"unknown output format {args.out!r}")


def _parse_list(text: str, convert, what: str) -> list:
    try:
        return [convert(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise Failure("invalid-arguments", f"invalid {what} list {text!r}") from e


def _load(args) -> Scenario:
    if args.scenario == "-":
        return parse_scenario(sys.stdin.read())
    return load_scenario(args.scenario)


def _require_valid(scenario: Scenario) -> None:
    report = validate_scenario(scenario)
    if report:
        for v in report:
            logging.error("%s", v)
        raise Failure(
            "validation-failed", "; ".join(str(v) for v in report))


def _verifier_kwargs(config) -> dict:
    return {
        "tol": config.verifier.tolerance,
        "max_iter": config.verifier.max_iterations,
        "direct_max_states": config.verifier.direct_max_states,
    }


def _alteration(scenario: Scenario, text: str) -> Alteration:
    try:
        return Alteration.from_literal(scenario.observations, text)
    except ValueError as e:
        raise Failure("invalid-alteration", str(e)) from e


def cmd_validate(args, config) -> int:
    scenario = _load(args)
    _require_valid(scenario)
    print("%s: ok" % args.scenario)
    return 0


def cmd_verify(args, config) -> int:
    scenario = _load(args)
    _require_valid(scenario)
    alt = _alteration(scenario, args.alt)
    started = time.monotonic()
    result = verify(scenario, alt, **_verifier_kwargs(config))
    seconds = time.monotonic() - started
    logging.info("Reach probability under %s: %.12f", alt, result.probability)
    _emit(args, VERIFY_COLUMNS, [{
        "scenario": args.scenario,
        "alteration": alt.to_literal(),
        "cost": _number(result.cost),
        "within_budget": str(result.within_budget).lower(),
        "probability": _number(result.probability),
        "residual": "%.3g" % result.residual,
        "method": result.method,
        "seconds": _seconds(args, seconds),
    }])
    return 0


def cmd_simulate(args, config) -> int:
    scenario = _load(args)
    _require_valid(scenario)
    alt = _alteration(scenario, args.alt)
    sim = config.simulation
    episodes = args.episodes if args.episodes is not None else sim.episodes
    seed = args.seed if args.seed is not None else sim.seed
    threads = args.threads if args.threads is not None else sim.threads
    horizon = args.horizon
    if horizon is None:
        ix = scenario.indexed
        horizon = sim.horizon_factor * ix.num_states * ix.num_nodes
    result = simulate(scenario, alt, episodes=episodes, horizon=horizon, seed=seed,
                      threads=threads)
    _emit(args, SIMULATE_COLUMNS, [{
        "scenario": args.scenario,
        "alteration": alt.to_literal(),
        "estimate": _number(result.estimate),
        "half_width_95": _number(result.half_width_95),
        "episodes": str(result.episodes),
        "horizon": str(result.horizon),
        "seed": str(seed),
    }])
    return 0


def _result_row(args, result: OptResult) -> dict[str, str]:
    return {
        "budget": _number(result.budget),
        "value": _number(result.best_value),
        "cost": _number(result.best_cost),
        "status": result.status,
        "nodes": str(result.nodes_explored),
        "seconds": _seconds(args, result.seconds),
        "alteration": result.best_alteration.to_literal(),
    }


def _build_model(scenario: Scenario, config, args):
    return build_milp(
        scenario,
        sparse=config.milp.sparse and not getattr(args, "dense", False),
        prune_unreachable=(config.milp.prune_unreachable
                           or getattr(args, "prune_unreachable", False)),
        pin_unreachable=config.milp.pin_unreachable,
        certify_reachability=(config.milp.certify_reachability
                              and not getattr(args, "no_certificate", False)),
    )


def _solution_status(solution, exact: str) -> str:
    gap = abs(solution.objective - solution.verified_value)
    if gap > MILP_AGREEMENT:
        logging.warning(
            "MILP objective %.9f disagrees with verified value %.9f",
            solution.objective, solution.verified_value)
        return "inexact"
    return exact


def _milp_row(args, scenario: Scenario, alt: Alteration, value: float, status: str,
              seconds: float) -> dict[str, str]:
    return {
        "budget": _number(scenario.budget),
        "value": _number(value),
        "cost": _number(alteration_cost(scenario.cost_model, alt)),
        "status": status,
        "nodes": "0",
        "seconds": _seconds(args, seconds),
        "alteration": alt.to_literal(),
    }


def cmd_optimize(args, config) -> int:
    scenario = _load(args)
    if args.budget is not None:
        scenario = scenario.with_budget(args.budget)
    ensure_initial_identity(scenario)
    _require_valid(scenario)
    limits = Limits(
        max_nodes=args.max_nodes if args.max_nodes is not None
        else config.optimizer.max_nodes,
        max_seconds=args.max_seconds if args.max_seconds is not None
        else config.optimizer.max_seconds,
    )

    if args.sweep is not None:
        if args.method not in ("bb", "brute"):
            raise Failure("invalid-arguments", "--sweep needs --method bb or brute")
        budgets = _parse_list(args.sweep, float, "budget")
        if budgets != sorted(budgets):
            raise Failure("invalid-arguments", "--sweep budgets must be ascending")
        results = budget_sweep(
            scenario, budgets, limits, method=args.method,
            brute_force_limit=config.optimizer.brute_force_limit)
        _emit(args, OPTIMIZE_COLUMNS, [_result_row(args, r) for r in results])
        return 0

    if args.method == "bb":
        result = branch_and_bound(scenario, limits)
    elif args.method == "brute":
        result = brute_force(scenario, config.optimizer.brute_force_limit)
    elif args.method == "milp":
        started = time.monotonic()
        solution = solve_milp(_build_model(scenario, config, args),
                              time_limit=limits.max_seconds or None)
        _emit(args, OPTIMIZE_COLUMNS, [_milp_row(
            args, scenario, solution.alteration, solution.verified_value,
            _solution_status(solution, "optimal"), time.monotonic() - started)])
        return 0
    else:
        started = time.monotonic()
        model = _build_model(scenario, config, args)
        if args.lp:
            export_lp(model, args.lp)
            logging.info("Wrote LP model to %s", args.lp)
        command = args.solve_external or config.solver_command
        if not command:
            if not args.lp:
                raise Failure(
                    "invalid-arguments", "--method export needs --lp or --solve-external")
            return 0
        solution = asyncio.run(run_external_solver(
            model, command, timeout=limits.max_seconds or None))
        _emit(args, OPTIMIZE_COLUMNS, [_milp_row(
            args, scenario, solution.alteration, solution.verified_value,
            _solution_status(solution, "external"), time.monotonic() - started)])
        return 0
    _emit(args, OPTIMIZE_COLUMNS, [_result_row(args, result)])
    return 0


def cmd_export_lp(args, config) -> int:
    scenario = _load(args)
    if args.budget is not None:
        scenario = scenario.with_budget(args.budget)
    ensure_initial_identity(scenario)
    _require_valid(scenario)
    model = _build_model(scenario, config, args)
    export_lp(model, args.lp)
    stats = count_stats(model)
    logging.info("Wrote %d variables and %d constraints to %s",
                 stats.num_vars, stats.num_constraints, args.lp)
    return 0


def cmd_stats(args, config) -> int:
    if args.grid_sizes is not None:
        cases = [
            (str(n), gen_grid(reference_grid_spec(n)))
            for n in _parse_list(args.grid_sizes, int, "grid size")
        ]
    elif args.scenario is not None:
        scenario = _load(args)
        _require_valid(scenario)
        cases = [("", scenario)]
    else:
        raise Failure("invalid-arguments", "stats needs --scenario or --grid-sizes")
    rows = []
    for n, scenario in cases:
        started = time.monotonic()
        stats = count_stats(_build_model(scenario, config, args))
        rows.append({
            "n": n,
            "num_vars": str(stats.num_vars),
            "num_constraints": str(stats.num_constraints),
            "seconds": _seconds(args, time.monotonic() - started),
        })
    _emit(args, STATS_COLUMNS, rows)
    return 0


def _write_document(args, text: str) -> None:
    if args.out and args.out != "-":
        with open(args.out, "w") as f:
            f.write(text)
        logging.info("Wrote scenario to %s", args.out)
    else:
        sys.stdout.write(text)


def cmd_gen_grid(args, config) -> int:
    spec = reference_grid_spec(
        args.n, budget=args.budget, blank_obs_alterable=not args.freeze_blank)
    scenario = gen_grid(spec)
    header = [
        "generated by decoyforge %s" % version_string,
        "grid n=%d budget=%s blank_obs_alterable=%s" % (
            spec.n, spec.budget, spec.blank_obs_alterable),
    ]
    _write_document(args, serialize_scenario(scenario, header=header))
    return 0


def cmd_gen_knapsack(args, config) -> int:
    inst = KnapsackInstance(
        weights=_parse_list(args.weights, int, "weight"),
        values=_parse_list(args.values, float, "value"),
        capacity=args.capacity,
        threshold=args.threshold,
    )
    generated = gen_knapsack(inst)
    header = [
        "generated by decoyforge %s" % version_string,
        "knapsack weights=%s values=%s capacity=%s threshold=%s" % (
            args.weights, args.values, args.capacity, args.threshold),
        "threshold_r=%.17g" % generated.threshold_r,
    ]
    _write_document(args, serialize_scenario(generated.scenario, header=header))
    return 0


def _common_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="Path to configuration.")
    common.add_argument("--debug", action="store_true")
    common.add_argument(
        "--gcp-logging", action="store_true", help="Use Google cloud logging."
    )
    common.add_argument(
        "--prometheus", type=str, help="Prometheus push gateway to export to."
    )
    common.add_argument("--seed", type=int, help="Seed for all randomness.")
    common.add_argument("--threads", type=int, help="Maximum number of workers.")
    common.add_argument(
        "--omit-timing", action="store_true",
        help="Leave the seconds column empty, for reproducible output.")
    return common


def _output_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", type=str, default="table",
        help="Output format: table, csv or csv:<path>.")


def _milp_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--dense", action="store_true",
        help="Create linearization variables for every successor state.")
    parser.add_argument(
        "--prune-unreachable", action="store_true",
        help="Drop triples unreachable from the initial state and node.")
    parser.add_argument(
        "--no-certificate", action="store_true",
        help="Leave out the reachability flow rows; faster, but may "
        "overestimate when the alteration closes a cycle.")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = ArgumentParser(prog="decoyforge")
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + version_string)
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("validate", parents=[common], help="Check a scenario.")
    p.add_argument("--scenario", required=True, help="Scenario document, - for stdin.")
    p.set_defaults(func=cmd_validate)

    p = subparsers.add_parser(
        "verify", parents=[common], help="Reach probability of one alteration.")
    p.add_argument("--scenario", required=True, help="Scenario document, - for stdin.")
    p.add_argument("--alt", default="", help="Alteration, e.g. 'o1->o3;o2->o0'.")
    _output_argument(p)
    p.set_defaults(func=cmd_verify)

    p = subparsers.add_parser(
        "simulate", parents=[common], help="Monte Carlo estimate for one alteration.")
    p.add_argument("--scenario", required=True, help="Scenario document, - for stdin.")
    p.add_argument("--alt", default="", help="Alteration, e.g. 'o1->o3;o2->o0'.")
    p.add_argument("--episodes", type=int)
    p.add_argument("--horizon", type=int)
    _output_argument(p)
    p.set_defaults(func=cmd_simulate)

    p = subparsers.add_parser(
        "optimize", parents=[common], help="Find the best alteration within budget.")
    p.add_argument("--scenario", required=True, help="Scenario document, - for stdin.")
    p.add_argument(
        "--method", choices=["bb", "brute", "export", "milp"], default="bb")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--budget", type=float, help="Override the scenario budget.")
    budget.add_argument("--sweep", type=str, help="Ascending budgets, e.g. 0,1,2.")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--lp", type=str, help="Where to write the LP model (export).")
    p.add_argument(
        "--solve-external", type=str, default=os.environ.get("DECOYFORGE_SOLVER"),
        help="Solver command run on the LP model; {lp} and {solution} are "
        "replaced by file names.")
    _milp_arguments(p)
    _output_argument(p)
    p.set_defaults(func=cmd_optimize)

    p = subparsers.add_parser(
        "export-lp", parents=[common], help="Write the MILP in LP format.")
    p.add_argument("--scenario", required=True, help="Scenario document, - for stdin.")
    p.add_argument("--budget", type=float, help="Override the scenario budget.")
    p.add_argument("--lp", "--out", dest="lp", required=True, help="LP file to write.")
    _milp_arguments(p)
    p.set_defaults(func=cmd_export_lp)

    p = subparsers.add_parser(
        "stats", parents=[common], help="MILP size for scenarios or grid sizes.")
    p.add_argument("--scenario", help="Scenario document, - for stdin.")
    p.add_argument("--grid-sizes", type=str, help="Grid sizes, e.g. 5,15,25.")
    _milp_arguments(p)
    _output_argument(p)
    p.set_defaults(func=cmd_stats)

    p = subparsers.add_parser("gen", help="Generate a scenario.")
    gen = p.add_subparsers(dest="generator", required=True)
    g = gen.add_parser("grid", parents=[common], help="Sensor grid world.")
    g.add_argument("--n", type=int, default=5)
    g.add_argument("--budget", type=float, default=0)
    g.add_argument(
        "--freeze-blank", action="store_true",
        help="Forbid altering the blank observation.")
    g.add_argument("--out", type=str, help="File to write; stdout by default.")
    g.set_defaults(func=cmd_gen_grid)
    g = gen.add_parser("knapsack", parents=[common], help="Knapsack reduction.")
    g.add_argument("--weights", required=True)
    g.add_argument("--values", required=True)
    g.add_argument("--capacity", type=float, required=True)
    g.add_argument("--threshold", type=float, required=True)
    g.add_argument("--out", type=str, help="File to write; stdout by default.")
    g.set_defaults(func=cmd_gen_knapsack)
    return parser


def _setup_logging(args) -> None:
    if args.gcp_logging:
        import google.cloud.logging

        client = google.cloud.logging.Client()
        client.get_default_handler()
        client.setup_logging()
    else:
        if args.debug:
            level = logging.DEBUG
        else:
            level = logging.INFO
        logging.basicConfig(level=level, format="%(message)s")


def resolved_settings(args, config) -> dict[str, object]:
    """Command line options, with the ones left unset taken from config."""
    given = vars(args)
    settings = {k: v for k, v in given.items() if k != "func" and v is not None}
    fallbacks = {
        "max_nodes": config.optimizer.max_nodes,
        "max_seconds": config.optimizer.max_seconds,
        "episodes": config.simulation.episodes,
        "seed": config.simulation.seed,
        "threads": config.simulation.threads,
    }
    for key, value in fallbacks.items():
        if key in given and given[key] is None:
            settings[key] = value
    if "dense" in given:
        settings["sparse"] = config.milp.sparse and not given["dense"]
        settings["prune_unreachable"] = (
            config.milp.prune_unreachable or given["prune_unreachable"])
        settings["certify_reachability"] = (
            config.milp.certify_reachability and not given["no_certificate"])
        settings["pin_unreachable"] = config.milp.pin_unreachable
    if given.get("method") == "brute":
        settings["brute_force_limit"] = config.optimizer.brute_force_limit
    return settings


def format_settings(settings: dict[str, object]) -> str:
    return ", ".join("%s=%r" % (k, settings[k]) for k in sorted(settings))


def _run(args) -> int:
    try:
        config = load_config(args.config)
    except text_format.ParseError as e:
        raise Failure("config-error", str(e)) from e
    except OSError as e:
        raise Failure("io-error", str(e)) from e
    logging.info("Configuration: %s", format_config(config))
    logging.info("Settings: %s", format_settings(resolved_settings(args, config)))
    try:
        return args.func(args, config)
    except ScenarioParseError as e:
        raise Failure("parse-error", str(e)) from e
    except ScenarioResolutionError as e:
        raise Failure("unresolved-reference", str(e)) from e
    except InfeasibleScenario as e:
        raise Failure(e.code, e.description) from e
    except GeneratorError as e:
        raise Failure("invalid-generator-parameters", str(e)) from e
    except NonConvergence as e:
        raise Failure("non-convergence", str(e), exit_code=2) from e
    except BruteForceTooLarge as e:
        raise Failure("brute-force-too-large", str(e), exit_code=2) from e
    except ExternalSolverError as e:
        raise Failure("solver-error", str(e), exit_code=2) from e
    except SolutionParseError as e:
        raise Failure("solution-parse-error", str(e), exit_code=2) from e
    except OSError as e:
        raise Failure("io-error", str(e)) from e


def _report(e: Failure) -> int:
    sys.stderr.write(
        json.dumps({"code": e.code, "description": e.description}) + "\n")
    return e.exit_code


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except Failure as e:
        return _report(e)
    _setup_logging(args)

    try:
        ret = _run(args)
    except Failure as e:
        return _report(e)

    last_success_gauge.set_to_current_time()
    if args.prometheus:
        asyncio.run(push_to_gateway(
            args.prometheus, job="decoyforge", registry=REGISTRY))
    return ret
