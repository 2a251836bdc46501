"""Objective path measures and result tables."""

from .measures import (
    DegenerateVertex,
    max_heading_change,
    path_length,
    slope_turning_angle,
    total_turning,
    turning_angle,
)
from .records import (
    CSV_COLUMNS,
    MISSING,
    SUMMARY_COLUMNS,
    MetricsRecord,
    append_rows,
    evaluate,
    format_row,
    read_rows,
    rows_to_csv,
    summarize,
    summary_to_csv,
)

__all__ = [
    "CSV_COLUMNS",
    "DegenerateVertex",
    "MISSING",
    "MetricsRecord",
    "SUMMARY_COLUMNS",
    "append_rows",
    "evaluate",
    "format_row",
    "max_heading_change",
    "path_length",
    "read_rows",
    "rows_to_csv",
    "slope_turning_angle",
    "summarize",
    "summary_to_csv",
    "total_turning",
    "turning_angle",
]
