"""
Command-line interface for generating scenarios, planning, simulating,
benchmarking and rendering tangent intersection guidance runs.

Exit codes: 0 on success, 2 when a planner reports a failure, 1 on usage or
I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from baseline import grid_astar
from benchmark import DYNAMIC_ALGOS, STATIC_ALGOS, make_cases, run_bench
from config import ConfigError, RunConfig, build_run_config
from dtig import ExecutionTrace, executed_from_events, read_trace, run_dynamic
from metrics import (
    MetricsRecord,
    append_rows,
    evaluate,
    format_row,
    path_length,
    read_rows,
    rows_to_csv,
    summarize,
    summary_to_csv,
    total_turning,
)
from rendering import RenderOptions, render_svg, write_svg
from smoothing import SmoothedPath, smooth_path
from stig import FailureReason, PlannedPath, StartOrTargetBlocked, plan_static
from world import (
    FAMILIES,
    GenerationFailed,
    MapSpec,
    PlannerParams,
    Scenario,
    ScenarioError,
    ValidationError,
    estimate_coverage,
    generate_map,
    load_scenario,
    save_scenario,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PLANNER_FAILURE = 2


def _print_diagnostics(messages: List[str]) -> None:
    if not messages:
        return
    for message in messages:
        sys.stderr.write(message + "\n")


def _collect_diagnostics(source_name: str, status: str, detail: str, smoothed: Optional[SmoothedPath]) -> List[str]:
    diagnostics: List[str] = []
    if status not in ("Success", "Reached"):
        suffix = f": {detail}" if detail else ""
        diagnostics.append(f"WARNING {source_name}: planner returned {status}{suffix}")
    if smoothed is not None:
        sharp = sum(1 for offset in smoothed.corner_offsets if offset == 0.0)
        if sharp:
            diagnostics.append(f"INFO {source_name}: {sharp} corner(s) kept sharp to preserve clearance")
    return diagnostics


def _configure_logging(config: RunConfig) -> None:
    logging.basicConfig(
        level=config.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _config(args: argparse.Namespace) -> Optional[RunConfig]:
    try:
        config = build_run_config(args)
    except ConfigError as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
        return None
    _configure_logging(config)
    return config


def _load(config: RunConfig) -> Optional[Scenario]:
    path = config.scenario_path
    if path is None:
        sys.stderr.write("ERROR: --scenario is required\n")
        return None
    try:
        scenario = load_scenario(path)
        return scenario.with_params(config.apply_overrides(scenario.params))
    except ValidationError as exc:
        for violation in exc.violations:
            sys.stderr.write(f"ERROR {path}: {violation}\n")
    except (ScenarioError, ConfigError) as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
    except OSError as exc:
        sys.stderr.write(f"ERROR: Failed to read {path}: {exc}\n")
    return None


def _fixed(value: float) -> float:
    return round(float(value), 6)


def _points(points: Sequence[Sequence[float]]) -> List[List[float]]:
    return [[_fixed(p[0]), _fixed(p[1])] for p in points]


def _path_document(algo: str, result: Any, record: MetricsRecord, points: Sequence[Sequence[float]],
                   smoothed: Optional[SmoothedPath]) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "algo": algo,
        "status": record.status,
        "waypoints": _points(points),
        "expansions": getattr(result, "expansions", 0),
        "path_length_m": None if record.path_length is None else _fixed(record.path_length),
        "total_turning_rad": None if record.total_turning is None else _fixed(record.total_turning),
        "node_count": record.node_count,
    }
    if smoothed is not None:
        document["smoothed"] = {
            "polyline": _points(smoothed.polyline),
            "path_length_m": _fixed(path_length(smoothed.polyline)),
            "total_turning_rad": _fixed(total_turning(smoothed.polyline)),
            "corner_offsets": [_fixed(v) for v in smoothed.corner_offsets],
        }
    return document


def _write_outputs(
    config: RunConfig,
    scenario: Scenario,
    document: Dict[str, Any],
    record: MetricsRecord,
    algo: str,
    smoothed: Optional[SmoothedPath],
    trace: Optional[ExecutionTrace] = None,
) -> bool:
    out_path = config.out_path or config.scenario_path.with_suffix(".path.json")
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        if trace is not None:
            trace_path = config.trace_path or config.scenario_path.with_suffix(".trace.jsonl")
            trace.write(trace_path)
        if config.svg_path is not None:
            rendered = render_svg(
                scenario,
                path=document["waypoints"] or None,
                smoothed=smoothed.polyline if smoothed is not None else None,
                events=trace.steps if trace is not None else None,
            )
            write_svg(rendered, config.svg_path)
        if config.csv_path is not None:
            row = format_row(
                record,
                case_id=config.scenario_path.stem,
                algo=algo,
                map_family="custom",
                seed=config.seed,
            )
            append_rows(config.csv_path, [row])
    except OSError as exc:
        sys.stderr.write(f"ERROR: Failed to write outputs: {exc}\n")
        return False
    return True


def _plan_static(config: RunConfig, scenario: Scenario) -> int:
    began = time.perf_counter()
    try:
        if config.algorithm == "astar":
            result = grid_astar(scenario)
        else:
            result = plan_static(scenario)
    except StartOrTargetBlocked as exc:
        result = PlannedPath.failure(FailureReason.START_OR_TARGET_BLOCKED, 0, str(exc))
    elapsed = time.perf_counter() - began

    record = evaluate(result, elapsed)
    smoothed = None
    if result.succeeded and config.smooth and len(result.waypoints) >= 3:
        smoothed = smooth_path(result, scenario.obstacles, scenario.params)
    document = _path_document(config.algorithm, result, record, result.waypoints, smoothed)
    if not _write_outputs(config, scenario, document, record, config.algorithm, smoothed):
        return EXIT_USAGE

    _print_diagnostics(_collect_diagnostics(str(config.scenario_path), record.status, result.detail, smoothed))
    return EXIT_OK if result.succeeded else EXIT_PLANNER_FAILURE


def plan_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    scenario = _load(config)
    if scenario is None:
        return EXIT_USAGE
    return _plan_static(config, scenario)


def simulate_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    scenario = _load(config)
    if scenario is None:
        return EXIT_USAGE
    if config.mode == "static":
        return _plan_static(config, scenario)

    trace = run_dynamic(scenario, config.mode)
    record = evaluate(trace)
    algo = f"dtig-{config.mode}"
    document = _path_document(algo, trace, record, trace.executed_path, None)
    document["replans"] = len(trace.plan_times)
    if not _write_outputs(config, scenario, document, record, algo, None, trace):
        return EXIT_USAGE

    _print_diagnostics(_collect_diagnostics(str(config.scenario_path), record.status, trace.detail, None))
    return EXIT_OK if trace.reached else EXIT_PLANNER_FAILURE


def gen_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    try:
        spec = MapSpec.for_family(args.family, config.seed, size=args.size, coverage=args.coverage)
        scenario = generate_map(spec, config.apply_overrides(PlannerParams()))
    except GenerationFailed as exc:
        sys.stderr.write(f"ERROR: GenerationFailed: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ConfigError) as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
        return EXIT_USAGE

    try:
        save_scenario(scenario, config.out_path)
    except OSError as exc:
        sys.stderr.write(f"ERROR: Failed to write {config.out_path}: {exc}\n")
        return EXIT_USAGE
    coverage = estimate_coverage(scenario, seed=config.seed)
    sys.stdout.write(f"coverage: {coverage:.6f}\n")
    return EXIT_OK


def bench_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    families = [name.strip() for name in args.families.split(",") if name.strip()]
    unknown = [name for name in families if name not in FAMILIES]
    if unknown:
        sys.stderr.write(f"ERROR: unknown map families: {', '.join(unknown)}\n")
        return EXIT_USAGE
    if args.count < 0:
        sys.stderr.write("ERROR: --count must be >= 0\n")
        return EXIT_USAGE

    algos = STATIC_ALGOS + (DYNAMIC_ALGOS if args.dynamic else ())
    try:
        params = config.apply_overrides(PlannerParams())
        rows = run_bench(make_cases(families, args.count, config.seed), algos, params=params, workers=config.workers)
    except GenerationFailed as exc:
        sys.stderr.write(f"ERROR: GenerationFailed: {exc}\n")
        return EXIT_USAGE
    except ConfigError as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
        return EXIT_USAGE

    text = rows_to_csv(rows)
    if config.csv_path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        config.csv_path.parent.mkdir(parents=True, exist_ok=True)
        config.csv_path.write_text(text, encoding="utf-8")
    except OSError as exc:
        sys.stderr.write(f"ERROR: Failed to write {config.csv_path}: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


def render_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    scenario = _load(config)
    if scenario is None:
        return EXIT_USAGE

    path_points = None
    smoothed_points = None
    events = None
    try:
        if args.path:
            document = json.loads(Path(args.path).read_text(encoding="utf-8"))
            path_points = document.get("waypoints") or None
            smoothed_points = (document.get("smoothed") or {}).get("polyline")
        if config.trace_path is not None:
            events = read_trace(config.trace_path)
            if path_points is None:
                path_points = executed_from_events(events) or None
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"ERROR: Failed to read render input: {exc}\n")
        return EXIT_USAGE

    rendered = render_svg(
        scenario,
        path=path_points,
        smoothed=smoothed_points,
        events=events,
        options=RenderOptions(show_virtual=args.virtual),
    )
    try:
        write_svg(rendered, config.out_path)
    except OSError as exc:
        sys.stderr.write(f"ERROR: Failed to write {config.out_path}: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


def report_command(args: argparse.Namespace) -> int:
    config = _config(args)
    if config is None:
        return EXIT_USAGE
    if config.csv_path is None:
        sys.stderr.write("ERROR: --csv is required\n")
        return EXIT_USAGE
    try:
        rows = read_rows(config.csv_path)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"ERROR: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(summary_to_csv(summarize(rows, baseline=args.baseline)))
    return EXIT_OK


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="count", default=0, help="Repeat for more log output")
    return common


def _param_flags() -> argparse.ArgumentParser:
    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--rsafe", type=float, help="Safety inflation r_safe in metres")
    params.add_argument("--dvir", type=float, help="Virtual ellipse growth d_vir in metres")
    params.add_argument("--alpha", type=float, help="Heuristic collision weight")
    params.add_argument("--theta-max", dest="theta_max", type=float, help="Maximum turn per waypoint in radians")
    params.add_argument("--range", type=float, help="Sensor range in metres")
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tigplan", description="Tangent intersection guidance path planning toolkit"
    )
    subparsers = parser.add_subparsers(dest="command")
    common, params = _common_flags(), _param_flags()

    gen_parser = subparsers.add_parser("gen", parents=[common, params], help="Generate a random scenario")
    gen_parser.add_argument("--family", choices=FAMILIES, default="short", help="Map family")
    gen_parser.add_argument("--size", type=float, help="Map side length in metres")
    gen_parser.add_argument("--coverage", type=float, help="Target obstacle coverage in (0, 1)")
    gen_parser.add_argument("--seed", type=int, default=0, help="Generator seed")
    gen_parser.add_argument("--out", required=True, help="Scenario JSON output path")
    gen_parser.set_defaults(func=gen_command)

    plan_parser = subparsers.add_parser("plan", parents=[common, params], help="Plan a static path")
    plan_parser.add_argument("--scenario", required=True, help="Scenario JSON file")
    plan_parser.add_argument("--algo", choices=["stig", "astar"], default="stig")
    plan_parser.add_argument("--seed", type=int, default=0, help="Seed recorded in the CSV row")
    plan_parser.add_argument("--out", help="Path JSON output (defaults to <scenario>.path.json)")
    plan_parser.add_argument("--svg", help="Optional SVG rendering of the result")
    plan_parser.add_argument("--csv", help="CSV file to append a metrics row to")
    plan_parser.add_argument("--no-smooth", action="store_true", help="Skip Bezier smoothing")
    plan_parser.set_defaults(func=plan_command)

    sim_parser = subparsers.add_parser("simulate", parents=[common, params], help="Fly a sensor-driven mission")
    sim_parser.add_argument("--scenario", required=True, help="Scenario JSON file")
    sim_parser.add_argument("--mode", choices=["static", "partial", "unknown"], default="partial")
    sim_parser.add_argument("--seed", type=int, default=0, help="Seed recorded in the CSV row")
    sim_parser.add_argument("--out", help="Executed path JSON output (defaults to <scenario>.path.json)")
    sim_parser.add_argument("--trace", help="Trace JSON-lines output (defaults to <scenario>.trace.jsonl)")
    sim_parser.add_argument("--svg", help="Optional SVG rendering of the run")
    sim_parser.add_argument("--csv", help="CSV file to append a metrics row to")
    sim_parser.add_argument("--no-smooth", action="store_true", help="Skip Bezier smoothing in static mode")
    sim_parser.set_defaults(func=simulate_command)

    bench_parser = subparsers.add_parser("bench", parents=[common, params], help="Benchmark over generated maps")
    bench_parser.add_argument("--families", default=",".join(FAMILIES), help="Comma-separated map families")
    bench_parser.add_argument("--count", type=int, default=10, help="Cases per family")
    bench_parser.add_argument("--seed", type=int, default=0, help="First case seed")
    bench_parser.add_argument("--csv", help="CSV output path (defaults to standard output)")
    bench_parser.add_argument("--workers", type=int, default=1, help="Worker processes")
    bench_parser.add_argument("--dynamic", action="store_true", help="Also run both dynamic modes")
    bench_parser.set_defaults(func=bench_command)

    render_parser = subparsers.add_parser("render", parents=[common], help="Render a scenario to SVG")
    render_parser.add_argument("--scenario", required=True, help="Scenario JSON file")
    render_parser.add_argument("--path", help="Path JSON written by plan or simulate")
    render_parser.add_argument("--trace", help="Trace JSON-lines written by simulate")
    render_parser.add_argument("--out", required=True, help="SVG output path")
    render_parser.add_argument("--virtual", action="store_true", help="Draw virtual ellipses dotted")
    render_parser.set_defaults(func=render_command)

    report_parser = subparsers.add_parser("report", parents=[common], help="Summarise a results CSV")
    report_parser.add_argument("--csv", required=True, help="Results CSV from bench or plan")
    report_parser.add_argument("--baseline", default="astar", help="Algorithm the reductions compare against")
    report_parser.set_defaults(func=report_command)

    return parser


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
