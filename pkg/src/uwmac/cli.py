"""Command line front end: scenario files in, reports and CSV out.

Exit codes: 0 success, 1 comparison or certificate failure, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from .bruteforce import (ENUMERATION_HORIZON_LIMIT, HorizonLimitError,
                         certify_policy, exact_expected_throughput,
                         policy_sequence, ActionSequence)
from .core import (Action, AlohaRole, ContractViolation, Delay, ModelAwareRole,
                   NodeSpec, Scenario, TdmaRole, TdmaSchedule, ValidationError,
                   delay_from_distance, validate_scenario)
from .engine import SimReport, SweepPoint, default_tolerance, run, sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

CSV_COLUMNS = ["scenario_id", "seed", "measured_slots", "successes", "collisions",
               "idle", "empirical", "oracle", "branch", "z", "deviation",
               "tolerance", "pass", "tdma_cross_collisions", "status"]


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _parse_role(doc, path: str, errors: list[str]):
    if not isinstance(doc, dict) or len(doc) != 1:
        errors.append(f"{path}: expected an object with exactly one of "
                      f"tdma, aloha, model_aware")
        return None
    kind, body = next(iter(doc.items()))
    if kind == "tdma":
        if not isinstance(body, dict):
            errors.append(f"{path}.tdma: expected an object")
            return None
        frame = body.get("frame_length")
        assigned = body.get("assigned")
        ok = True
        if not _is_int(frame) or frame < 1:
            errors.append(f"{path}.tdma.frame_length: expected a positive integer")
            ok = False
        if not isinstance(assigned, list) or not all(_is_int(o) for o in assigned):
            errors.append(f"{path}.tdma.assigned: expected a list of integers")
            ok = False
        elif ok:
            bad = sorted(o for o in assigned if not 0 <= o < frame)
            if bad:
                errors.append(f"{path}.tdma.assigned: offsets {bad} fall outside "
                              f"[0, {frame})")
                ok = False
        return TdmaRole(TdmaSchedule(frame, frozenset(assigned))) if ok else None
    if kind == "aloha":
        if not isinstance(body, dict):
            errors.append(f"{path}.aloha: expected an object")
            return None
        q = body.get("q")
        if not _is_number(q) or not 0.0 <= q <= 1.0:
            errors.append(f"{path}.aloha.q: expected a probability in [0, 1]")
            return None
        return AlohaRole(float(q))
    if kind == "model_aware":
        if not isinstance(body, dict):
            errors.append(f"{path}.model_aware: expected an object")
            return None
        member = body.get("gateway_member", True)
        if not isinstance(member, bool):
            errors.append(f"{path}.model_aware.gateway_member: expected a boolean")
            return None
        return ModelAwareRole(member)
    errors.append(f"{path}.{kind}: unknown role (expected tdma, aloha or model_aware)")
    return None


def _parse_delay(doc, path: str, errors: list[str]):
    has_slots = "delay_slots" in doc
    has_geometry = "geometry" in doc
    if has_slots == has_geometry:
        errors.append(f"{path}: exactly one of delay_slots or geometry is required")
        return None
    if has_slots:
        slots = doc["delay_slots"]
        if not _is_int(slots) or slots < 0:
            errors.append(f"{path}.delay_slots: expected a nonnegative integer")
            return None
        return Delay(slots)
    geometry = doc["geometry"]
    if not isinstance(geometry, dict):
        errors.append(f"{path}.geometry: expected an object")
        return None
    ok = True
    for key in ("distance_m", "sound_speed_mps", "slot_duration_s"):
        value = geometry.get(key)
        if not _is_number(value) or value <= 0:
            errors.append(f"{path}.geometry.{key}: expected a positive number")
            ok = False
    if not ok:
        return None
    return delay_from_distance(geometry["distance_m"], geometry["sound_speed_mps"],
                               geometry["slot_duration_s"])


def parse_scenario(doc) -> tuple[Scenario | None, list[str]]:
    """Build a Scenario from a decoded JSON document, collecting every schema
    violation with its field path."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        return None, ["top level: expected an object"]
    nodes_doc = doc.get("nodes")
    nodes = []
    if not isinstance(nodes_doc, list) or not nodes_doc:
        errors.append("nodes: expected a non-empty list")
    else:
        for i, node_doc in enumerate(nodes_doc):
            path = f"nodes[{i}]"
            if not isinstance(node_doc, dict):
                errors.append(f"{path}: expected an object")
                continue
            node_id = node_doc.get("id")
            if not _is_int(node_id) or node_id < 0:
                errors.append(f"{path}.id: expected a nonnegative integer")
                node_id = None
            delay = _parse_delay(node_doc, path, errors)
            role = _parse_role(node_doc.get("role"), f"{path}.role", errors)
            if node_id is not None and delay is not None and role is not None:
                nodes.append(NodeSpec(node_id, delay, role))

    horizon = doc.get("horizon")
    if not _is_int(horizon) or horizon < 1:
        errors.append("horizon: expected a positive integer")
    warmup = doc.get("warmup")
    if warmup is not None and (not _is_int(warmup) or warmup < 0):
        errors.append("warmup: expected a nonnegative integer")
        warmup = None
    seed = doc.get("seed")
    if not _is_int(seed) or not 0 <= seed < 2 ** 64:
        errors.append("seed: expected an unsigned 64-bit integer")

    if errors:
        return None, errors
    scenario = Scenario(tuple(nodes), horizon, warmup, seed)
    return scenario, validate_scenario(scenario)


def load_scenario(path: str, slots: int | None = None, warmup: int | None = None,
                  seed: int | None = None) -> tuple[Scenario | None, list[str]]:
    """Read and validate a scenario file, applying any command-line overrides."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        return None, [f"cannot read {path}: {exc}"]
    except json.JSONDecodeError as exc:
        return None, [f"{path} is not valid JSON: {exc}"]
    scenario, errors = parse_scenario(doc)
    if scenario is not None and not errors:
        overrides = {}
        if slots is not None:
            overrides["horizon"] = slots
        if warmup is not None:
            overrides["warmup"] = warmup
        if seed is not None:
            overrides["seed"] = seed
        if overrides:
            scenario = replace(scenario, **overrides)
            errors = validate_scenario(scenario)
    return scenario, errors


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _report_row(scenario_id: str, scenario: Scenario, report: SimReport,
                tolerance: float | None) -> dict:
    row = {
        "scenario_id": scenario_id,
        "seed": scenario.seed,
        "measured_slots": report.measured_slots,
        "successes": report.successes,
        "collisions": report.collisions,
        "idle": report.idle,
        "empirical": report.empirical_throughput,
        "tdma_cross_collisions": report.tdma_cross_collisions,
        "oracle": None, "branch": None, "z": None,
        "deviation": None, "tolerance": None, "pass": None,
        "status": "ok",
    }
    if report.oracle is None:
        row["status"] = "oracle-na"
    else:
        row["oracle"] = report.oracle.optimal_throughput
        row["branch"] = report.oracle.chosen_branch.value
        row["z"] = report.oracle.z_value
        row["deviation"] = report.deviation
        row["tolerance"] = tolerance
        if tolerance is not None:
            row["pass"] = report.deviation <= tolerance
    return {key: _fmt(row[key]) for key in CSV_COLUMNS}


def _write_csv(out_path: str | None, fieldnames: list[str], rows: list[dict]) -> None:
    if out_path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    with open(out_path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _input_error(errors: list[str]) -> int:
    for message in errors:
        print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _cmd_run(args) -> int:
    scenario, errors = load_scenario(args.scenario, args.slots, args.warmup, args.seed)
    if errors or scenario is None:
        return _input_error(errors)
    report = run(scenario)
    scenario_id = Path(args.scenario).stem

    tolerance = None
    if report.oracle is not None:
        tolerance = (args.tolerance if args.tolerance is not None else
                     default_tolerance(report.oracle.optimal_throughput,
                                       report.measured_slots))
    print(f"scenario: {scenario_id} (seed {scenario.seed})")
    print(f"nodes: {len(scenario.model_aware_nodes)} model-aware, "
          f"{scenario.num_tdma} tdma (p={scenario.tdma_frame_ratio:.4g}), "
          f"{scenario.num_aloha} aloha")
    print(f"measured slots: {report.measured_slots} (warm-up {report.warmup_slots})")
    print(f"successes / collisions / idle: {report.successes} / "
          f"{report.collisions} / {report.idle}")
    print(f"empirical throughput: {report.empirical_throughput:.6f}")
    if report.tdma_cross_collisions > 0:
        print(f"warning: {report.tdma_cross_collisions} AP slots saw overlapping "
              f"TDMA arrivals; oracle comparison not applicable", file=sys.stderr)
    if report.oracle is None:
        print("oracle: not applicable")
        if args.out:
            _write_csv(args.out, CSV_COLUMNS,
                       [_report_row(scenario_id, scenario, report, None)])
        return EXIT_OK
    print(f"oracle optimal: {report.oracle.optimal_throughput!r} "
          f"({report.oracle.chosen_branch.value} branch, z={report.oracle.z_value!r})")
    verdict = "PASS" if report.deviation <= tolerance else "FAIL"
    print(f"deviation: {report.deviation!r} (tolerance {tolerance!r}) -> {verdict}")
    if args.out:
        _write_csv(args.out, CSV_COLUMNS,
                   [_report_row(scenario_id, scenario, report, tolerance)])
    return EXIT_OK if verdict == "PASS" else EXIT_FAILED


def _parse_grid(specs: list[str]) -> tuple[list[tuple[str, list]], list[str]]:
    grid = []
    errors = []
    for spec in specs:
        name, sep, rest = spec.partition("=")
        name = name.strip()
        if not sep or not name or not rest.strip():
            errors.append(f"--sweep {spec!r}: expected name=v1,v2,...")
            continue
        values = []
        for token in rest.split(","):
            token = token.strip()
            try:
                values.append(int(token) if name in ("horizon", "warmup", "seed")
                              else float(token))
            except ValueError:
                errors.append(f"--sweep {spec!r}: {token!r} is not a number")
        grid.append((name, values))
    return grid, errors


def _cmd_sweep(args) -> int:
    scenario, errors = load_scenario(args.scenario, args.slots, args.warmup, args.seed)
    if errors or scenario is None:
        return _input_error(errors)
    grid, grid_errors = _parse_grid(args.sweep)
    if grid_errors:
        return _input_error(grid_errors)
    scenario_id = Path(args.scenario).stem
    try:
        points = sweep(scenario, grid)
    except (ValidationError, ContractViolation) as exc:
        return _input_error([str(exc)])

    param_names = [name for name, _ in grid]
    fieldnames = param_names + CSV_COLUMNS
    rows = []
    any_failed = False
    for point in points:
        if point.report is None:
            row = {key: "" for key in CSV_COLUMNS}
            row.update({"scenario_id": f"{scenario_id}#{point.index}",
                        "seed": _fmt(point.seed),
                        "status": f"error: {point.error}"})
        else:
            tolerance = None
            if point.report.oracle is not None:
                tolerance = (args.tolerance if args.tolerance is not None else
                             default_tolerance(point.report.oracle.optimal_throughput,
                                               point.report.measured_slots))
                if point.report.deviation > tolerance:
                    any_failed = True
            point_scenario = replace(scenario, seed=point.seed)
            row = _report_row(f"{scenario_id}#{point.index}", point_scenario,
                              point.report, tolerance)
        row.update({name: _fmt(point.params.get(name)) for name in param_names})
        rows.append(row)
    _write_csv(args.out, fieldnames, rows)
    return EXIT_FAILED if any_failed else EXIT_OK


def _cmd_verify(args) -> int:
    scenario, errors = load_scenario(args.scenario, seed=args.seed)
    if errors or scenario is None:
        return _input_error(errors)
    horizon = args.horizon if args.horizon is not None else scenario.horizon
    if horizon > ENUMERATION_HORIZON_LIMIT:
        return _input_error([f"verification horizon {horizon} exceeds "
                             f"{ENUMERATION_HORIZON_LIMIT}; pass --horizon"])
    try:
        cert = certify_policy(scenario, horizon=horizon)
        policy_value = cert.policy_value
        if args.corrupt_policy:
            window = replace(scenario, horizon=horizon)
            flipped = ActionSequence(tuple(
                Action.WAIT if bit is Action.TRANSMIT else Action.TRANSMIT
                for bit in policy_sequence(window).bits))
            policy_value = exact_expected_throughput(flipped, window)
    except (HorizonLimitError, ValidationError, ContractViolation) as exc:
        return _input_error([str(exc)])

    max_dev = max(abs(cert.best_value - policy_value),
                  abs(cert.best_value - cert.oracle_value))
    matches = max_dev <= 1e-12
    print(f"enumerated optimum over 2^{cert.horizon} sequences: "
          f"{cert.best_value!r} ({cert.best_sequence.to_string()})")
    print(f"policy value: {policy_value!r}")
    print(f"closed-form optimum at window tdma fraction "
          f"{cert.tdma_window_fraction!r}: {cert.oracle_value!r}")
    print(f"certificate: {'MATCH' if matches else 'MISMATCH'} "
          f"(max deviation {max_dev:.3e}, tolerance 1e-12)")
    return EXIT_OK if matches else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwmac",
        description="Slotted MAC coexistence simulator with analytic oracles")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_out=True):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--slots", type=int, default=None,
                       help="override the measured horizon")
        p.add_argument("--warmup", type=int, default=None,
                       help="override the warm-up slot count")
        p.add_argument("--seed", type=int, default=None, help="override the seed")
        if with_out:
            p.add_argument("--out", default=None, help="write results CSV here")
            p.add_argument("--tolerance", type=float, default=None,
                           help="override the oracle comparison tolerance")

    p_run = sub.add_parser("run", help="simulate one scenario and compare to the oracle")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter grid and emit CSV")
    common(p_sweep)
    p_sweep.add_argument("--sweep", action="append", required=True,
                         metavar="name=v1,v2,...",
                         help="parameter grid; repeat for a cross product "
                              "(names: q, p, horizon, warmup, seed)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify",
                              help="brute-force certificate that the policy is optimal")
    p_verify.add_argument("--scenario", required=True, help="scenario JSON file")
    p_verify.add_argument("--seed", type=int, default=None, help="override the seed")
    p_verify.add_argument("--horizon", type=int, default=None,
                          help=f"measured window to enumerate "
                               f"(<= {ENUMERATION_HORIZON_LIMIT})")
    p_verify.add_argument("--corrupt-policy", action="store_true",
                          help="negative control: evaluate a deliberately "
                               "inverted policy instead")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
