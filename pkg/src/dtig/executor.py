"""
Sensor-driven mission execution.

Two modes share one mission loop:

* partial: the visible obstacles are known up front, hidden ones (and the true
  geometry of relocated ones) are discovered by the sensor and trigger replans;
* unknown: nothing is known, the planner searches only inside the sensing
  circle and commits to a sub-path ending on its perimeter.
"""

from __future__ import annotations

import json
import logging
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Deque, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from geometry import Ellipse, Point2, distance, segment_collides
from stig import (
    GOAL_EPS,
    Horizon,
    PlannedPath,
    StartOrTargetBlocked,
    TangentPlanner,
    unit,
)
from world import Scenario

from .sensor import SensorModel, max_range_waypoint

logger = logging.getLogger(__name__)

MAX_MOVES = 10_000
LOOP_RADIUS = 1e-3
LOOP_REVISITS = 3


class Mode(str, Enum):
    PARTIAL = "partial"
    UNKNOWN = "unknown"


class EventKind(str, Enum):
    MOVE = "Move"
    SENSE = "Sense"
    REPLAN = "Replan"
    MAX_RANGE_WAYPOINT = "MaxRangeWaypoint"


class RunStatus(str, Enum):
    REACHED = "Reached"
    FAILED = "Failed"


class RunFailure(str, Enum):
    NO_INITIAL_PATH = "NoInitialPath"
    REPLAN_FAILED = "ReplanFailed"
    STEP_LIMIT = "StepLimit"
    LOOP_DETECTED = "LoopDetected"


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    position: Point2
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "x": self.position.x,
            "y": self.position.y,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceEvent":
        return cls(
            EventKind(data["kind"]),
            Point2(float(data["x"]), float(data["y"])),
            dict(data.get("payload") or {}),
        )


@dataclass
class ExecutionTrace:
    mode: Mode
    steps: List[TraceEvent] = field(default_factory=list)
    final_status: RunStatus = RunStatus.FAILED
    reason: Optional[RunFailure] = None
    executed_path: List[Point2] = field(default_factory=list)
    plan_times: List[float] = field(default_factory=list)
    initial_path: Optional[PlannedPath] = None
    expansions: int = 0
    detail: str = ""

    @property
    def reached(self) -> bool:
        return self.final_status is RunStatus.REACHED

    @property
    def status_label(self) -> str:
        if self.reached:
            return self.final_status.value
        reason = self.reason.value if self.reason else "Unknown"
        return f"{self.final_status.value}({reason})"

    @property
    def plan_time(self) -> float:
        return sum(self.plan_times)

    def events(self, kind: EventKind) -> List[TraceEvent]:
        return [event for event in self.steps if event.kind is kind]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(event.to_dict(), sort_keys=True) + "\n" for event in self.steps)

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")


def read_trace(path: Union[str, Path]) -> List[TraceEvent]:
    events: List[TraceEvent] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            events.append(TraceEvent.from_dict(json.loads(line)))
    return events


def executed_from_events(events: Sequence[TraceEvent]) -> List[Point2]:
    """Flown polyline recovered from a trace: first event position, then every move."""
    if not events:
        return []
    points = [events[0].position]
    points.extend(event.position for event in events if event.kind is EventKind.MOVE)
    return points


class _Abort(Exception):
    def __init__(self, reason: RunFailure, detail: str):
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


def _points(path: Iterable[Sequence[float]]) -> List[List[float]]:
    return [[p[0], p[1]] for p in path]


class _Mission:
    """Shared state of one dynamic run."""

    def __init__(self, scenario: Scenario, mode: Mode):
        self.scenario = scenario
        self.params = scenario.params
        self.sensor = SensorModel(scenario.params.sensor_range)
        self.mode = mode
        self.target = scenario.target
        self.bounds = (scenario.width, scenario.height)
        self.world: Tuple[Ellipse, ...] = scenario.true_obstacles()
        if mode is Mode.PARTIAL:
            self.belief: Dict[int, Ellipse] = dict(enumerate(scenario.obstacles))
        else:
            self.belief = {}
        self.pos = scenario.start
        self.trace = ExecutionTrace(mode, executed_path=[scenario.start])
        self.moves = 0
        self.visits: Counter = Counter()
        self._remember(scenario.start)

    # ------------------------------------------------------------ sensing

    def visible(self) -> Tuple[Ellipse, ...]:
        return tuple(self.belief[index] for index in sorted(self.belief))

    def sense(self) -> List[int]:
        """Update the belief from the current position; returns ids whose geometry changed."""
        seen = set(self.sensor.scan(self.world, self.pos))
        # a moved obstacle is also noticed where the map still places it
        seen.update(
            index
            for index, believed in self.belief.items()
            if believed != self.world[index] and self.sensor.sees(believed, self.pos)
        )
        in_view = sorted(seen)
        changed: List[int] = []
        for index in in_view:
            actual = self.world[index]
            if self.belief.get(index) != actual:
                self.belief[index] = actual
                changed.append(index)
        self.note_event(EventKind.SENSE, self.pos, {"visible": in_view, "new": changed})
        if changed:
            logger.debug("sensed %d new obstacles at (%.3f, %.3f)", len(changed), *self.pos)
        return changed

    def blocks(self, changed: Sequence[int], route: Sequence[Point2]) -> bool:
        points = [self.pos, *route]
        for index in changed:
            e = self.belief[index]
            for p, q in zip(points, points[1:]):
                if distance(p, q) > 0.0 and segment_collides(p, q, e):
                    return True
        return False

    # ------------------------------------------------------------ planning

    def _search(self, target: Point2, heading, horizon: Optional[Horizon]) -> PlannedPath:
        planner = TangentPlanner(self.visible(), self.params, bounds=self.bounds, horizon=horizon)
        began = time.perf_counter()
        try:
            path = planner.plan(self.pos, target, heading)
        finally:
            self.trace.plan_times.append(time.perf_counter() - began)
        self.trace.expansions += path.expansions
        return path

    def plan(
        self, *, horizon: Optional[Horizon] = None, failure: RunFailure, record: bool = True
    ) -> PlannedPath:
        """Plan from the current position, retrying without the heading constraint."""
        heading = None
        if len(self.trace.executed_path) >= 2:
            heading = unit(self.trace.executed_path[-2], self.pos)
        try:
            path = self._search(self.target, heading, horizon)
            if not path.succeeded and heading is not None:
                logger.debug("replan with heading failed (%s); retrying unconstrained", path.status_label)
                path = self._search(self.target, None, horizon)
        except StartOrTargetBlocked as exc:
            raise _Abort(failure, str(exc)) from exc
        if not path.succeeded:
            raise _Abort(failure, f"planner returned {path.status_label} at ({self.pos[0]:.3f}, {self.pos[1]:.3f})")
        if record:
            self.note_event(EventKind.REPLAN, self.pos, {"path": _points(path.waypoints)})
        return path

    # ------------------------------------------------------------ motion

    def _remember(self, p: Point2) -> None:
        key = (int(round(p[0] / LOOP_RADIUS)), int(round(p[1] / LOOP_RADIUS)))
        self.visits[key] += 1
        if self.visits[key] > LOOP_REVISITS + 1:
            raise _Abort(RunFailure.LOOP_DETECTED, f"revisited ({p[0]:.3f}, {p[1]:.3f}) too often")

    def move_to(self, p: Point2) -> None:
        self.moves += 1
        if self.moves > MAX_MOVES:
            raise _Abort(RunFailure.STEP_LIMIT, f"exceeded {MAX_MOVES} moves")
        self.pos = Point2(*p)
        self.trace.executed_path.append(self.pos)
        self.note_event(EventKind.MOVE, self.pos, {"step": self.moves})
        self._remember(self.pos)

    def at_target(self) -> bool:
        return distance(self.pos, self.target) <= GOAL_EPS

    def note_event(self, kind: EventKind, position: Point2, payload: Dict[str, Any]) -> None:
        self.trace.steps.append(TraceEvent(kind, Point2(*position), payload))

    def follow(self, waypoints: Sequence[Point2], *, until_change: bool) -> bool:
        """
        Fly the route, never more than the sensor range per move, sensing after each.

        Returns True when the route is exhausted.  A newly sensed obstacle that
        blocks the rest of the route either triggers an immediate replan
        (``until_change`` False) or ends the leg early (returns False).
        """
        radius = self.params.sensor_range
        pending: Deque[Point2] = deque(Point2(*w) for w in waypoints)
        while pending and distance(pending[0], self.pos) <= GOAL_EPS:
            pending.popleft()
        while pending:
            node = pending[0]
            if distance(self.pos, node) > radius:
                step = max_range_waypoint(self.pos, node, radius)
            else:
                step = pending.popleft()
            self.move_to(step)
            if self.at_target():
                return True
            changed = self.sense()
            if changed and self.blocks(changed, list(pending)):
                if until_change:
                    return False
                path = self.plan(failure=RunFailure.REPLAN_FAILED)
                pending = deque(path.waypoints[1:])
        return True

    # ------------------------------------------------------------ outcome

    def finish(self, status: RunStatus, reason: Optional[RunFailure] = None, detail: str = "") -> ExecutionTrace:
        self.trace.final_status = status
        self.trace.reason = reason
        self.trace.detail = detail
        logger.info(
            "%s run %s after %d moves, %d plans",
            self.mode.value,
            self.trace.status_label,
            self.moves,
            len(self.trace.plan_times),
        )
        return self.trace


def plan_dynamic_partial(scenario: Scenario) -> ExecutionTrace:
    """Fly S to T over a partially known map, replanning when sensing contradicts the plan."""
    mission = _Mission(scenario, Mode.PARTIAL)
    try:
        try:
            initial = mission.plan(failure=RunFailure.NO_INITIAL_PATH, record=False)
        except _Abort as exc:
            return mission.finish(RunStatus.FAILED, exc.reason, exc.detail)
        mission.trace.initial_path = initial
        route: Sequence[Point2] = initial.waypoints[1:]
        changed = mission.sense()
        if changed and mission.blocks(changed, route):
            route = mission.plan(failure=RunFailure.REPLAN_FAILED).waypoints[1:]
        mission.follow(route, until_change=False)
    except _Abort as exc:
        return mission.finish(RunStatus.FAILED, exc.reason, exc.detail)
    if not mission.at_target():
        return mission.finish(RunStatus.FAILED, RunFailure.REPLAN_FAILED, "route ended short of the target")
    return mission.finish(RunStatus.REACHED)


def plan_dynamic_unknown(scenario: Scenario) -> ExecutionTrace:
    """Fly S to T with no prior map, searching only inside the sensing circle."""
    mission = _Mission(scenario, Mode.UNKNOWN)
    radius = mission.sensor.range
    try:
        mission.sense()
        while not mission.at_target():
            leg = mission.plan(
                horizon=Horizon(mission.pos, radius), failure=RunFailure.REPLAN_FAILED
            )
            if mission.trace.initial_path is None:
                mission.trace.initial_path = leg
            end = leg.waypoints[-1]
            if distance(end, mission.target) > GOAL_EPS:
                mission.note_event(EventKind.MAX_RANGE_WAYPOINT, end, {})
            mission.follow(leg.waypoints[1:], until_change=True)
    except _Abort as exc:
        return mission.finish(RunStatus.FAILED, exc.reason, exc.detail)
    return mission.finish(RunStatus.REACHED)


def run_dynamic(scenario: Scenario, mode: Union[Mode, str]) -> ExecutionTrace:
    mode = Mode(mode)
    if mode is Mode.PARTIAL:
        return plan_dynamic_partial(scenario)
    return plan_dynamic_unknown(scenario)


__all__ = [
    "EventKind",
    "ExecutionTrace",
    "LOOP_REVISITS",
    "MAX_MOVES",
    "Mode",
    "RunFailure",
    "RunStatus",
    "TraceEvent",
    "executed_from_events",
    "plan_dynamic_partial",
    "plan_dynamic_unknown",
    "read_trace",
    "run_dynamic",
]
