"""
Benchmark pipeline stitching together generation, planning and evaluation.

``run_case`` turns one (family, seed) pair into metrics rows, one per
algorithm; ``run_bench`` fans cases out over an optional process pool and
returns the rows in case order so the resulting CSV is deterministic apart
from the timing column.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from baseline import GridSpec, grid_astar
from dtig import ExecutionTrace, Mode, run_dynamic
from metrics import MetricsRecord, evaluate, format_row
from stig import FailureReason, PlannedPath, StartOrTargetBlocked, plan_static
from world import MapSpec, PlannerParams, Scenario, generate_map

logger = logging.getLogger(__name__)

STATIC_ALGOS = ("stig", "astar")
DYNAMIC_ALGOS = ("dtig-partial", "dtig-unknown")
ALGOS = STATIC_ALGOS + DYNAMIC_ALGOS


@dataclass(frozen=True)
class BenchCase:
    case_id: str
    family: str
    seed: int


def make_cases(families: Sequence[str], count: int, seed: int) -> List[BenchCase]:
    """``count`` cases per family; case seeds are consecutive from ``seed``."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return [
        BenchCase(f"{family}-{index:04d}", family, seed + index)
        for family in families
        for index in range(count)
    ]


def plan_scenario(
    scenario: Scenario, algo: str, grid: Optional[GridSpec] = None
) -> Tuple[Union[PlannedPath, ExecutionTrace], float]:
    """
    Run one algorithm; returns the result and the wall-clock planning time.

    Dynamic runs report their own cumulative replanning time instead.
    """
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm '{algo}' (expected one of {ALGOS})")
    if algo in DYNAMIC_ALGOS:
        trace = run_dynamic(scenario, Mode(algo.split("-", 1)[1]))
        return trace, trace.plan_time
    began = time.perf_counter()
    try:
        if algo == "stig":
            result = plan_static(scenario)
        else:
            result = grid_astar(scenario, grid)
    except StartOrTargetBlocked as exc:
        result = PlannedPath.failure(FailureReason.START_OR_TARGET_BLOCKED, 0, str(exc))
    return result, time.perf_counter() - began


def run_case(
    case: BenchCase,
    algos: Sequence[str] = STATIC_ALGOS,
    params: Optional[PlannerParams] = None,
) -> List[Dict[str, str]]:
    scenario = generate_map(MapSpec.for_family(case.family, case.seed), params)
    rows: List[Dict[str, str]] = []
    for algo in algos:
        result, elapsed = plan_scenario(scenario, algo)
        record: MetricsRecord = evaluate(result, elapsed)
        logger.info("%s %s: %s", case.case_id, algo, record.status)
        rows.append(
            format_row(record, case_id=case.case_id, algo=algo, map_family=case.family, seed=case.seed)
        )
    return rows


def _run_case_args(args: Tuple[BenchCase, Tuple[str, ...], Optional[PlannerParams]]) -> List[Dict[str, str]]:
    return run_case(*args)


def run_bench(
    cases: Sequence[BenchCase],
    algos: Sequence[str] = STATIC_ALGOS,
    *,
    params: Optional[PlannerParams] = None,
    workers: int = 1,
) -> List[Dict[str, str]]:
    jobs = [(case, tuple(algos), params) for case in cases]
    if workers <= 1 or len(jobs) <= 1:
        per_case = [_run_case_args(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_case = list(pool.map(_run_case_args, jobs))
    return [row for rows in per_case for row in rows]


__all__ = [
    "ALGOS",
    "BenchCase",
    "DYNAMIC_ALGOS",
    "STATIC_ALGOS",
    "make_cases",
    "plan_scenario",
    "run_bench",
    "run_case",
]
