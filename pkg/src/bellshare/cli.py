"""Command-line front end: ``bellshare --scenario file.json``.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 bound violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from .exceptions import BellshareError
from .protocol import ProtocolParams
from .quantum import SchmidtVector
from .schemas import OPTIMIZE_RESULT_SCHEMA, SCENARIO_SCHEMA, VERIFY_REPORT_SCHEMA
from .search import THETA_MIN, SweepGrid, SweepRecord, maximize_chsh, sweep
from .verify import checks_for, notes_for

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_BOUND_VIOLATED = 0, 1, 2, 3

OPTIMIZE_BOUND = 2.0 + 1e-6
SWEEP_BOUND = 2.0 + 1e-9
CSV_HEADER = ("d", "c_spec", "theta", "gamma1", "chsh_sim", "chsh_pred", "bound_f", "zero_term", "delta")
WORKERS_ENV = "BELLSHARE_WORKERS"


class ScenarioError(BellshareError, ValueError):
    """The scenario file cannot be loaded or is inconsistent."""


@dataclass(frozen=True)
class Scenario:
    mode: str
    d: int
    schmidt: tuple[SchmidtVector, ...]
    theta: tuple[float, ...]
    gamma1: tuple[float, ...]
    restarts: int | None
    budget: int | None
    seed: int | None
    output: str | None


def _as_tuple(value: Any) -> tuple[float, ...]:
    if value is None:
        return ()
    return tuple(float(v) for v in (value if isinstance(value, list) else [value]))


def parse_scenario(data: Any) -> Scenario:
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"invalid scenario at {where}: {exc.message}") from None

    raw = data["schmidt"]
    specs = raw if isinstance(raw[0], list) else [raw]
    squared = data.get("squared", False)
    try:
        schmidt = tuple(
            SchmidtVector.from_weights(s) if squared else SchmidtVector(tuple(s)) for s in specs
        )
    except BellshareError as exc:
        raise ScenarioError(f"Schmidt vector normalization error: {exc}") from None

    d = data["d"]
    if any(len(s) > d for s in schmidt):
        raise ScenarioError(f"Schmidt vector longer than d = {d}")
    scenario = Scenario(
        mode=data["mode"],
        d=d,
        schmidt=schmidt,
        theta=_as_tuple(data.get("theta")),
        gamma1=_as_tuple(data.get("gamma1")),
        restarts=data.get("restarts"),
        budget=data.get("budget"),
        seed=data.get("seed"),
        output=data.get("output"),
    )
    # build every parameter combination once so domain errors surface as input errors
    for c in schmidt:
        for t in scenario.theta:
            for g in scenario.gamma1:
                try:
                    ProtocolParams(d, c, t, g)
                except (BellshareError, ValueError) as exc:
                    raise ScenarioError(str(exc)) from None
    return scenario


def load_scenario(path: str | os.PathLike[str]) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
    return parse_scenario(data)


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return format(x, ".15g")


def _params_dict(p: ProtocolParams) -> dict[str, Any]:
    return {"d": p.d, "schmidt": list(p.schmidt.coeffs), "theta": p.theta, "gamma1": p.gamma1}


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def verify_report(scenario: Scenario) -> dict[str, Any]:
    points = []
    summary: dict[str, dict[str, Any]] = {}
    all_checks = []
    for c in scenario.schmidt:
        for t in scenario.theta:
            for g in scenario.gamma1:
                p = ProtocolParams(scenario.d, c, t, g)
                checks = checks_for(p)
                all_checks.extend(checks)
                points.append({"params": _params_dict(p), "checks": [ch.as_dict() for ch in checks]})
                for ch in checks:
                    entry = summary.setdefault(ch.name, {
                        "max_value": 0.0, "tolerance": ch.tolerance, "passed": True,
                        "informational": ch.informational, "count": 0,
                    })
                    entry["max_value"] = max(entry["max_value"], float(ch.value))
                    entry["passed"] = entry["passed"] and ch.passed
                    entry["count"] += 1
    passed = all(ch.passed for ch in all_checks if not ch.informational)
    return {
        "mode": "verify",
        "d": scenario.d,
        "passed": passed,
        "summary": summary,
        "points": points,
        "notes": notes_for(scenario.d, all_checks),
    }


def optimize_report(scenario: Scenario, seed: int, theta_min: float) -> dict[str, Any]:
    result = maximize_chsh(
        scenario.d, scenario.schmidt[0], scenario.restarts, scenario.budget,
        seed=seed, theta_min=theta_min,
    )
    return {
        "mode": "optimize",
        "best_params": _params_dict(result.best_params),
        "best_value": result.best_value,
        "evaluations": result.evaluations,
        "seed": result.seed,
        "restarts": scenario.restarts,
        "budget": scenario.budget,
        "theta_min": theta_min,
        "status": result.status,
        "bound": OPTIMIZE_BOUND,
        "bound_violated": result.best_value > OPTIMIZE_BOUND,
        "trace": [{"theta": p.theta, "gamma1": p.gamma1, "value": v} for p, v in result.trace],
    }


def sweep_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([
            r.d,
            ";".join(_fmt(c) for c in r.schmidt.coeffs),
            _fmt(r.theta),
            _fmt(r.gamma1),
            _fmt(r.chsh_sim),
            _fmt(r.chsh_pred),
            _fmt(r.bound_f),
            _fmt(r.zero_term),
            _fmt(r.delta),
        ])
    return buf.getvalue()


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_verify(scenario: Scenario, output: str | None) -> int:
    report = verify_report(scenario)
    _write(_dumps(report), output)
    for name, entry in report["summary"].items():
        if not entry["passed"]:
            level = logging.INFO if entry["informational"] else logging.ERROR
            log.log(level, "%s: max %.3e exceeds %.0e", name, entry["max_value"], entry["tolerance"])
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def cmd_sweep(scenario: Scenario, output: str | None, workers: int) -> int:
    grid = SweepGrid(scenario.d, scenario.theta, scenario.gamma1, scenario.schmidt)
    records = sweep(grid, workers=workers)
    _write(sweep_csv(records), output)
    if any(not r.ok for r in records):
        return EXIT_CHECK_FAILED
    if any(abs(r.chsh_sim) > SWEEP_BOUND for r in records):
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


def cmd_optimize(scenario: Scenario, output: str | None, seed: int, theta_min: float) -> int:
    report = optimize_report(scenario, seed, theta_min)
    _write(_dumps(report), output)
    if report["status"] == "budget":
        log.info("optimizer stopped on its evaluation budget (%d)", scenario.budget)
    if report["bound_violated"]:
        log.error("bound violated - investigate: best value %.12g", report["best_value"])
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bellshare",
        description="Simulate and verify CHSH sharing under bilateral sequential measurements.",
    )
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--output", help="report path (overrides the scenario's 'output'; default stdout)")
    p.add_argument("--seed", type=int, help="seed for optimizer restarts (default: scenario seed or 0)")
    p.add_argument("--workers", type=int, default=1, help=f"sweep worker threads (env {WORKERS_ENV} overrides)")
    p.add_argument("--theta-min", type=float, default=THETA_MIN, help="lower clamp for theta in optimize mode")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _workers(flag: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env is None or not env.strip():
        return max(flag, 1)
    try:
        return max(int(env), 1)
    except ValueError:
        raise ScenarioError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        scenario = load_scenario(args.scenario)
        workers = _workers(args.workers)
        if args.seed is not None and args.seed < 0:
            raise ScenarioError("--seed must be non-negative")
        if not 0.0 < args.theta_min < math.pi / 4:
            raise ScenarioError("--theta-min must lie in (0, pi/4)")
    except ScenarioError as exc:
        print(f"bellshare: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    output = args.output if args.output is not None else scenario.output
    seed = args.seed if args.seed is not None else (scenario.seed or 0)
    if scenario.mode == "verify":
        return cmd_verify(scenario, output)
    if scenario.mode == "sweep":
        return cmd_sweep(scenario, output, workers)
    return cmd_optimize(scenario, output, seed, args.theta_min)


def validate_report(report: dict[str, Any]) -> None:
    """Raise ``jsonschema.ValidationError`` if a CLI report is malformed."""
    schema = VERIFY_REPORT_SCHEMA if report.get("mode") == "verify" else OPTIMIZE_RESULT_SCHEMA
    jsonschema.validate(report, schema)


if __name__ == "__main__":
    sys.exit(main())
