"""Dynamic tangent intersection guidance: sensing, replanning and mission execution."""

from .executor import (
    LOOP_REVISITS,
    MAX_MOVES,
    EventKind,
    ExecutionTrace,
    Mode,
    RunFailure,
    RunStatus,
    TraceEvent,
    executed_from_events,
    plan_dynamic_partial,
    plan_dynamic_unknown,
    read_trace,
    run_dynamic,
)
from .sensor import BOUNDARY_SAMPLES, RANGE_TOLERANCE, SensorModel, in_range, max_range_waypoint, sense

__all__ = [
    "BOUNDARY_SAMPLES",
    "EventKind",
    "ExecutionTrace",
    "LOOP_REVISITS",
    "MAX_MOVES",
    "Mode",
    "RANGE_TOLERANCE",
    "RunFailure",
    "RunStatus",
    "SensorModel",
    "TraceEvent",
    "executed_from_events",
    "in_range",
    "max_range_waypoint",
    "plan_dynamic_partial",
    "plan_dynamic_unknown",
    "read_trace",
    "run_dynamic",
    "sense",
]
