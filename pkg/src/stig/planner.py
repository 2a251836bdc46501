"""
Static tangent intersection guidance search.

The search keeps three sets: ``current_set`` (candidate waypoints ordered by
their heuristic value, first-in first-out on ties), ``closed_set`` (waypoints
already expanded) and ``treated_set`` (tangent points whose waypoints were
already handed out).  Expanding a node N runs an inner exploration queue that
starts from the target: a lead with a clear, not-too-sharp segment from N
becomes a candidate; a blocked lead is replaced by the two virtual-ellipse
waypoints of the first obstacle in its way.  Every lead processed across the
whole search is charged to one shared `WorkBudget`.

`TangentPlanner` also serves the sensor-limited planner: given a `Horizon`,
candidates beyond the sensing circle are pulled back onto its perimeter and a
node on the perimeter ends the search.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from heapq import heappop, heappush
from typing import Deque, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from geometry import (
    Ellipse,
    NoIntersection,
    ObstacleIndex,
    Point2,
    PointInsideObstacle,
    clamp_to_range,
    count_collisions,
    distance,
    ellipse_value,
    first_collided_obstacle,
    tangent_points,
    virtual_waypoint,
)
from world import PlannerParams, Scenario

logger = logging.getLogger(__name__)

GOAL_EPS = 1e-6
QUANTUM = 1e-6
# Leads one whole search may process, in multiples of the expansion limit.
WORK_BUDGET_FACTOR = 4

TreatedKey = Tuple[int, int, int]
PositionKey = Tuple[int, int]


class PlanningError(RuntimeError):
    """Raised when planning cannot start or its bookkeeping is inconsistent."""

    def __init__(self, message: str, position: Optional[Sequence[float]] = None):
        loc = ""
        if position is not None:
            loc = f" (at {position[0]:.6f}, {position[1]:.6f})"
        super().__init__(f"{message}{loc}")
        self.position = position


class StartOrTargetBlocked(PlanningError):
    """The start or the target lies inside an inflated obstacle."""


class ExpansionOverflow(PlanningError):
    """The exploration queue or the whole search processed more leads than allowed."""


class InternalError(PlanningError):
    """The closed set does not hold a valid parent chain."""


class PlanStatus(str, Enum):
    SUCCESS = "Success"
    FAILURE = "Failure"


class FailureReason(str, Enum):
    NO_PATH = "NoPath"
    EXPANSION_LIMIT = "ExpansionLimit"
    START_OR_TARGET_BLOCKED = "StartOrTargetBlocked"


@dataclass(frozen=True)
class PlannedPath:
    waypoints: Tuple[Point2, ...]
    expansions: int
    status: PlanStatus
    reason: Optional[FailureReason] = None
    detail: str = ""

    @property
    def succeeded(self) -> bool:
        return self.status is PlanStatus.SUCCESS

    @property
    def status_label(self) -> str:
        if self.succeeded:
            return PlanStatus.SUCCESS.value
        reason = self.reason.value if self.reason else "Unknown"
        return f"{PlanStatus.FAILURE.value}({reason})"

    @classmethod
    def failure(cls, reason: FailureReason, expansions: int = 0, detail: str = "") -> "PlannedPath":
        return cls((), expansions, PlanStatus.FAILURE, reason, detail)


@dataclass(frozen=True)
class SearchNode:
    position: Point2
    parent: Optional[int]
    h_value: float
    insertion_order: int


@dataclass(frozen=True)
class Horizon:
    """Sensing circle that bounds a sub-environment search."""

    center: Point2
    radius: float

    def contains(self, p: Sequence[float]) -> bool:
        return distance(self.center, p) <= self.radius + 1e-9

    def on_perimeter(self, p: Sequence[float]) -> bool:
        return distance(self.center, p) >= self.radius - GOAL_EPS


def quantize(p: Sequence[float]) -> PositionKey:
    return (int(round(p[0] / QUANTUM)), int(round(p[1] / QUANTUM)))


@dataclass
class SearchState:
    """Per-plan bookkeeping; nothing here outlives a single search."""

    current_set: List[Tuple[float, int]] = field(default_factory=list)
    closed_set: Dict[int, SearchNode] = field(default_factory=dict)
    treated_set: Set[TreatedKey] = field(default_factory=set)
    nodes: Dict[int, SearchNode] = field(default_factory=dict)
    _open_keys: Dict[PositionKey, int] = field(default_factory=dict)
    _closed_keys: Set[PositionKey] = field(default_factory=set)
    _counter: int = 0

    def push(self, position: Point2, parent: Optional[int], h_value: float) -> Optional[SearchNode]:
        """
        Insert a candidate.  Candidates on an expanded position are dropped; a
        candidate on an open position replaces it only with a smaller value.
        """
        key = quantize(position)
        if key in self._closed_keys:
            return None
        existing = self._open_keys.get(key)
        if existing is not None:
            if self.nodes[existing].h_value <= h_value:
                return None
            del self.nodes[existing]
        node = SearchNode(position, parent, h_value, self._counter)
        self._counter += 1
        self.nodes[node.insertion_order] = node
        self._open_keys[key] = node.insertion_order
        heappush(self.current_set, (h_value, node.insertion_order))
        return node

    def pop(self) -> Optional[SearchNode]:
        while self.current_set:
            _, node_id = heappop(self.current_set)
            node = self.nodes.get(node_id)
            if node is None or node_id in self.closed_set:
                continue
            self._open_keys.pop(quantize(node.position), None)
            return node
        return None

    def close(self, node: SearchNode) -> None:
        self.closed_set[node.insertion_order] = node
        self._closed_keys.add(quantize(node.position))


@dataclass
class WorkBudget:
    """Lead allowance shared by every expansion of one search."""

    limit: int
    used: int = 0

    def spend(self, origin: Sequence[float]) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ExpansionOverflow(
                f"search processed more than {self.limit} leads in total", position=origin
            )


@dataclass(frozen=True)
class _Lead:
    position: Point2
    obstacle_id: Optional[int] = None
    treated_key: Optional[TreatedKey] = None


# ---------------------------------------------------------------- heuristics


def heuristic(
    n: Sequence[float],
    w: Sequence[float],
    t: Sequence[float],
    obstacles: Sequence[Ellipse],
    alpha_weight: float,
    *,
    index: Optional[ObstacleIndex] = None,
) -> float:
    """``D(n, w) + alpha * P + D(w, t)``; P counts obstacles the segment n -> w crosses."""
    if distance(n, w) == 0.0:
        crossings = 0
    elif index is not None:
        crossings = index.count_collisions(n, w)
    else:
        crossings = count_collisions(n, w, obstacles)
    return distance(n, w) + alpha_weight * crossings + distance(w, t)


def turning(direction: Optional[Tuple[float, float]], origin: Sequence[float], p: Sequence[float]) -> float:
    """Heading change between ``direction`` and ``origin -> p`` (0 with no direction)."""
    if direction is None:
        return 0.0
    vx, vy = p[0] - origin[0], p[1] - origin[1]
    cross = direction[0] * vy - direction[1] * vx
    dot = direction[0] * vx + direction[1] * vy
    return abs(math.atan2(cross, dot))


def unit(p: Sequence[float], q: Sequence[float]) -> Optional[Tuple[float, float]]:
    length = distance(p, q)
    if length == 0.0:
        return None
    return ((q[0] - p[0]) / length, (q[1] - p[1]) / length)


def collect_waypoints(
    n: SearchNode,
    t: Point2,
    obstacles: Sequence[Ellipse],
    params: PlannerParams,
    incoming_dir: Optional[Tuple[float, float]] = None,
    *,
    treated_set: Optional[Set[TreatedKey]] = None,
    index: Optional[ObstacleIndex] = None,
    budget: Optional[WorkBudget] = None,
) -> List[Point2]:
    """
    Candidate waypoints reachable from ``n`` by a clear straight segment.

    Raises:
        ExpansionOverflow: More than ``params.max_expansions`` leads were processed,
            or ``budget`` ran out.
    """
    treated = treated_set if treated_set is not None else set()
    limit = params.expansion_limit(len(obstacles))
    origin = n.position
    to_explore: Deque[_Lead] = deque([_Lead(Point2(*t))])
    explored: Set[PositionKey] = set()
    candidates: List[Point2] = []
    processed = 0

    while to_explore:
        lead = to_explore.popleft()
        key = quantize(lead.position)
        if key in explored:
            continue
        explored.add(key)
        processed += 1
        if processed > limit:
            raise ExpansionOverflow(
                f"exploration processed more than {limit} leads", position=origin
            )
        if budget is not None:
            budget.spend(origin)
        if distance(origin, lead.position) <= GOAL_EPS:
            continue

        if index is not None:
            collided = index.first_collided(origin, lead.position)
        else:
            collided = first_collided_obstacle(origin, lead.position, obstacles)
        if collided is None:
            if turning(incoming_dir, origin, lead.position) > params.theta_max:
                continue
            if lead.treated_key is not None:
                if lead.treated_key in treated:
                    continue
                treated.add(lead.treated_key)
            candidates.append(lead.position)
            continue

        hit_id, _ = collided
        obstacle = obstacles[hit_id]
        try:
            touch_points = tangent_points(origin, obstacle)
        except PointInsideObstacle:
            logger.debug("node %s sits on obstacle %d; no tangents", origin, hit_id)
            continue
        for touch in touch_points:
            try:
                waypoint = virtual_waypoint(origin, obstacle, touch, params.d_vir)
            except NoIntersection:
                logger.debug("tangent of obstacle %d missed its virtual ellipse", hit_id)
                continue
            tq = quantize(touch)
            to_explore.append(_Lead(waypoint, hit_id, (hit_id, tq[0], tq[1])))

    return candidates


def extract_path(closed_set: Mapping[int, SearchNode], target_node: SearchNode) -> List[Point2]:
    """Walk parent links from ``target_node`` back to the root and return them start-first."""
    chain: List[Point2] = []
    node = target_node
    steps = 0
    while True:
        chain.append(node.position)
        if node.parent is None:
            break
        parent = closed_set.get(node.parent)
        if parent is None:
            raise InternalError(
                f"node {node.insertion_order} points to missing parent {node.parent}",
                position=node.position,
            )
        node = parent
        steps += 1
        if steps > len(closed_set):
            raise InternalError("parent chain contains a cycle", position=node.position)
    chain.reverse()
    return chain


# ------------------------------------------------------------------ planner


class TangentPlanner:
    """Best-first tangent search over a fixed obstacle set."""

    def __init__(
        self,
        obstacles: Sequence[Ellipse],
        params: PlannerParams,
        *,
        bounds: Optional[Tuple[float, float]] = None,
        horizon: Optional[Horizon] = None,
    ) -> None:
        self.obstacles = tuple(obstacles)
        self.index = ObstacleIndex(self.obstacles)
        self.params = params
        self.bounds = bounds
        self.horizon = horizon
        self.diagnostics: List[str] = []
        self.clamped: Set[PositionKey] = set()

    def _note(self, message: str) -> None:
        self.diagnostics.append(message)
        logger.debug(message)

    def _in_bounds(self, p: Sequence[float]) -> bool:
        if self.bounds is None:
            return True
        width, height = self.bounds
        return -1e-9 <= p[0] <= width + 1e-9 and -1e-9 <= p[1] <= height + 1e-9

    def check_endpoints(self, start: Sequence[float], target: Sequence[float]) -> None:
        for label, point in (("start", start), ("target", target)):
            for index, e in enumerate(self.obstacles):
                if ellipse_value(point, e) <= 1.0:
                    raise StartOrTargetBlocked(
                        f"{label} lies inside inflated obstacle {index}", position=point
                    )

    def plan(
        self,
        start: Sequence[float],
        target: Sequence[float],
        incoming_dir: Optional[Tuple[float, float]] = None,
    ) -> PlannedPath:
        """
        Search from ``start`` towards ``target``.

        Raises:
            StartOrTargetBlocked: Either endpoint lies inside an inflated obstacle.
        """
        start, target = Point2(*start), Point2(*target)
        self.check_endpoints(start, target)
        limit = self.params.expansion_limit(len(self.obstacles))
        state = SearchState()
        budget = WorkBudget(WORK_BUDGET_FACTOR * limit)
        state.push(start, None, distance(start, target))
        expansions = 0

        while True:
            node = state.pop()
            if node is None:
                self._note(f"current set exhausted after {expansions} expansions")
                return PlannedPath.failure(FailureReason.NO_PATH, expansions, "candidates exhausted")
            state.close(node)

            reached = distance(node.position, target) <= GOAL_EPS
            if reached or (
                self.horizon is not None
                and node.parent is not None
                and self.horizon.on_perimeter(node.position)
            ):
                waypoints = extract_path(state.closed_set, node)
                if reached:
                    waypoints[-1] = target
                logger.debug("search finished: %d waypoints, %d expansions", len(waypoints), expansions)
                return PlannedPath(tuple(waypoints), expansions, PlanStatus.SUCCESS)

            expansions += 1
            if expansions > limit:
                self._note(f"expansion limit {limit} reached")
                return PlannedPath.failure(FailureReason.EXPANSION_LIMIT, expansions - 1, "outer loop")

            if node.parent is None:
                heading = incoming_dir
            else:
                heading = unit(state.closed_set[node.parent].position, node.position)
            try:
                candidates = collect_waypoints(
                    node,
                    target,
                    self.obstacles,
                    self.params,
                    heading,
                    treated_set=state.treated_set,
                    index=self.index,
                    budget=budget,
                )
            except ExpansionOverflow as exc:
                self._note(str(exc))
                return PlannedPath.failure(FailureReason.EXPANSION_LIMIT, expansions, str(exc))

            for candidate in candidates:
                if not self._in_bounds(candidate):
                    continue
                if self.horizon is not None and not self.horizon.contains(candidate):
                    candidate = clamp_to_range(
                        self.horizon.center, self.horizon.radius, node.position, candidate
                    )
                    self.clamped.add(quantize(candidate))
                h_value = heuristic(
                    node.position,
                    candidate,
                    target,
                    self.obstacles,
                    self.params.alpha_weight,
                    index=self.index,
                )
                state.push(candidate, node.insertion_order, h_value)


def plan_path(
    start: Sequence[float],
    target: Sequence[float],
    obstacles: Sequence[Ellipse],
    params: PlannerParams,
    *,
    bounds: Optional[Tuple[float, float]] = None,
    incoming_dir: Optional[Tuple[float, float]] = None,
) -> PlannedPath:
    planner = TangentPlanner(obstacles, params, bounds=bounds)
    return planner.plan(start, target, incoming_dir)


def plan_static(s: Scenario) -> PlannedPath:
    """
    Plan over the scenario's known obstacles; hidden obstacles are ignored.

    Raises:
        StartOrTargetBlocked: S or T lies inside an inflated obstacle.
    """
    path = plan_path(s.start, s.target, s.obstacles, s.params, bounds=(s.width, s.height))
    logger.info("static plan %s: %d waypoints, %d expansions", path.status_label, len(path.waypoints), path.expansions)
    return path


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
