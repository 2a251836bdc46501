"""Static tangent intersection guidance planner."""

from .planner import (
    GOAL_EPS,
    ExpansionOverflow,
    FailureReason,
    Horizon,
    InternalError,
    PlannedPath,
    PlanningError,
    PlanStatus,
    SearchNode,
    SearchState,
    StartOrTargetBlocked,
    TangentPlanner,
    WORK_BUDGET_FACTOR,
    WorkBudget,
    collect_waypoints,
    extract_path,
    heuristic,
    plan_path,
    plan_static,
    quantize,
    turning,
    unit,
)

__all__ = [
    "ExpansionOverflow",
    "FailureReason",
    "GOAL_EPS",
    "Horizon",
    "InternalError",
    "PlanStatus",
    "PlannedPath",
    "PlanningError",
    "SearchNode",
    "SearchState",
    "StartOrTargetBlocked",
    "TangentPlanner",
    "WORK_BUDGET_FACTOR",
    "WorkBudget",
    "collect_waypoints",
    "extract_path",
    "heuristic",
    "plan_path",
    "plan_static",
    "quantize",
    "turning",
    "unit",
]
