"""Metrics records, the results CSV and its per-family summary."""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

from geometry import Point2, distance

from .measures import path_length, total_turning

CSV_COLUMNS = (
    "case_id",
    "algo",
    "map_family",
    "seed",
    "status",
    "path_length_m",
    "total_turning_rad",
    "plan_time_s",
    "node_count",
)
SUMMARY_COLUMNS = (
    "map_family",
    "algo",
    "cases",
    "successes",
    "mean_path_length_m",
    "mean_total_turning_rad",
    "mean_plan_time_s",
    "length_reduction_pct",
    "turning_reduction_pct",
)
MISSING = "N/A"
SUCCESS_LABELS = ("Success", "Reached")


@dataclass(frozen=True)
class MetricsRecord:
    path_length: Optional[float]
    total_turning: Optional[float]
    plan_time: float
    node_count: int
    status: str

    @property
    def succeeded(self) -> bool:
        return self.status in SUCCESS_LABELS


def _distinct(points: Iterable[Sequence[float]]) -> List[Point2]:
    kept: List[Point2] = []
    for p in points:
        if not kept or distance(kept[-1], p) > 0.0:
            kept.append(Point2(*p))
    return kept


def evaluate(result, measured_time: Union[None, float, Sequence[float]] = None) -> MetricsRecord:
    """
    Build a record for a PlannedPath or an ExecutionTrace.

    ``measured_time`` is either one wall-clock figure or the per-plan timings
    of a dynamic run, which are summed.  Traces default to their own timings.
    """
    if hasattr(result, "executed_path"):
        points = list(result.executed_path)
        succeeded = result.reached
        if measured_time is None:
            measured_time = result.plan_times
    else:
        points = list(result.waypoints)
        succeeded = result.succeeded
    if measured_time is None:
        plan_time = 0.0
    elif isinstance(measured_time, (int, float)):
        plan_time = float(measured_time)
    else:
        plan_time = math.fsum(measured_time)

    status = result.status_label
    if not succeeded:
        return MetricsRecord(None, None, plan_time, len(points), status)
    distinct = _distinct(points)
    if len(distinct) < 2:
        return MetricsRecord(0.0, 0.0, plan_time, len(points), status)
    return MetricsRecord(
        path_length(distinct),
        total_turning(distinct),
        plan_time,
        len(points),
        status,
    )


def _fmt(value: Optional[float]) -> str:
    return MISSING if value is None else f"{value:.6f}"


def format_row(
    record: MetricsRecord,
    *,
    case_id: str,
    algo: str,
    map_family: str,
    seed: Union[int, str],
) -> Dict[str, str]:
    return {
        "case_id": case_id,
        "algo": algo,
        "map_family": map_family,
        "seed": str(seed),
        "status": record.status,
        "path_length_m": _fmt(record.path_length),
        "total_turning_rad": _fmt(record.total_turning),
        "plan_time_s": _fmt(record.plan_time),
        "node_count": str(record.node_count),
    }


def rows_to_csv(rows: Iterable[Mapping[str, str]], *, header: bool = True) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    if header:
        writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def append_rows(path: Union[str, Path], rows: Iterable[Mapping[str, str]]) -> None:
    """Append rows, writing the header only when the file is new or empty."""
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="") as handle:
        handle.write(rows_to_csv(rows, header=fresh))


def read_rows(path: Union[str, Path]) -> List[Dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [name for name in CSV_COLUMNS if name not in (reader.fieldnames or ())]
        if missing:
            raise ValueError(f"{path}: missing CSV columns {', '.join(missing)}")
        return list(reader)


def _mean(values: Sequence[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


def _reduction(algo_values: Sequence[float], base_values: Sequence[float]) -> Optional[float]:
    base = _mean(base_values)
    mine = _mean(algo_values)
    if base is None or mine is None or base == 0.0:
        return None
    return 100.0 * (base - mine) / base


def summarize(rows: Iterable[Mapping[str, str]], baseline: str = "astar") -> List[Dict[str, str]]:
    """
    Per (map_family, algo) means over successful cases.

    Reductions compare against ``baseline`` on the cases both solved; positive
    means shorter or smoother than the baseline.
    """
    groups: "OrderedDict[tuple, List[Mapping[str, str]]]" = OrderedDict()
    for row in rows:
        groups.setdefault((row["map_family"], row["algo"]), []).append(row)

    def solved(items: Sequence[Mapping[str, str]]) -> Dict[str, Mapping[str, str]]:
        return {r["case_id"]: r for r in items if r["status"] in SUCCESS_LABELS}

    summary: List[Dict[str, str]] = []
    for (family, algo), items in sorted(groups.items()):
        ok = solved(items)
        lengths = [float(r["path_length_m"]) for r in ok.values()]
        turns = [float(r["total_turning_rad"]) for r in ok.values()]
        times = [float(r["plan_time_s"]) for r in ok.values()]
        base_ok = solved(groups.get((family, baseline), []))
        shared = sorted(set(ok) & set(base_ok))
        length_cut = _reduction(
            [float(ok[c]["path_length_m"]) for c in shared],
            [float(base_ok[c]["path_length_m"]) for c in shared],
        )
        turning_cut = _reduction(
            [float(ok[c]["total_turning_rad"]) for c in shared],
            [float(base_ok[c]["total_turning_rad"]) for c in shared],
        )
        summary.append(
            {
                "map_family": family,
                "algo": algo,
                "cases": str(len(items)),
                "successes": str(len(ok)),
                "mean_path_length_m": _fmt(_mean(lengths)),
                "mean_total_turning_rad": _fmt(_mean(turns)),
                "mean_plan_time_s": _fmt(_mean(times)),
                "length_reduction_pct": _fmt(length_cut),
                "turning_reduction_pct": _fmt(turning_cut),
            }
        )
    return summary


def summary_to_csv(summary: Iterable[Mapping[str, str]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in summary:
        writer.writerow(row)
    return buffer.getvalue()


__all__ = [
    "CSV_COLUMNS",
    "MISSING",
    "MetricsRecord",
    "SUMMARY_COLUMNS",
    "append_rows",
    "evaluate",
    "format_row",
    "read_rows",
    "rows_to_csv",
    "summarize",
    "summary_to_csv",
]
