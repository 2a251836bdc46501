"""
Quadratic Bezier corner smoothing with a collision fallback.

Arcs are evaluated in Bernstein form over a ``np.linspace`` parameter grid;
samples are checked against every inflated obstacle with `ellipse_values` and
the chords between them with the obstacle broad phase.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry import Ellipse, ObstacleIndex, Point2, distance, ellipse_values
from stig import PlannedPath
from world import PlannerParams

logger = logging.getLogger(__name__)

SAMPLE_SPACING = 0.25
MAX_HALVINGS = 6
CLEARANCE_EPS = 1e-6
MERGE_EPS = 1e-9


@dataclass(frozen=True)
class SmoothedPath:
    polyline: Tuple[Point2, ...]
    source: Optional[PlannedPath]
    corner_offsets: Tuple[float, ...]


def bezier_point(p0: Sequence[float], p1: Sequence[float], p2: Sequence[float], t: float) -> Point2:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"bezier parameter must be in [0, 1], got {t}")
    u = 1.0 - t
    return Point2(
        u * u * p0[0] + 2.0 * u * t * p1[0] + t * t * p2[0],
        u * u * p0[1] + 2.0 * u * t * p1[1] + t * t * p2[1],
    )


def _toward(a: Sequence[float], b: Sequence[float], offset: float) -> Point2:
    length = distance(a, b)
    step = min(offset, length / 2.0)
    return Point2(a[0] + (b[0] - a[0]) * step / length, a[1] + (b[1] - a[1]) * step / length)


def control_points(
    prev: Sequence[float], a: Sequence[float], next: Sequence[float], offset: float
) -> Tuple[Point2, Point2]:
    """Temporary waypoints before and after ``a``, each capped at half its segment."""
    if offset <= 0.0:
        raise ValueError(f"corner offset must be > 0, got {offset}")
    if distance(prev, a) == 0.0 or distance(a, next) == 0.0:
        raise ValueError("corner has a zero-length adjacent segment")
    return _toward(a, prev, offset), _toward(a, next, offset)


def sample_arc(p0: Point2, p1: Point2, p2: Point2, spacing: float = SAMPLE_SPACING) -> List[Point2]:
    # curve speed never exceeds twice the longer control leg
    bound = 2.0 * max(distance(p0, p1), distance(p1, p2))
    count = max(2, math.ceil(bound / spacing))
    t = np.linspace(0.0, 1.0, count + 1)[:, np.newaxis]
    u = 1.0 - t
    controls = np.asarray([p0, p1, p2], dtype=float)
    curve = u * u * controls[0] + 2.0 * u * t * controls[1] + t * t * controls[2]
    curve[0], curve[-1] = controls[0], controls[2]
    return [Point2(float(x), float(y)) for x, y in curve]


def _clear(points: Sequence[Point2], index: ObstacleIndex) -> bool:
    samples = np.asarray(points, dtype=float)
    for e in index.obstacles:
        if np.any(ellipse_values(samples, e) < 1.0 - CLEARANCE_EPS):
            return False
    for p, q in zip(points, points[1:]):
        if distance(p, q) > 0.0 and index.first_collided(p, q) is not None:
            return False
    return True


def _append(polyline: List[Point2], p: Sequence[float]) -> None:
    p = Point2(*p)
    if not polyline or distance(polyline[-1], p) > MERGE_EPS:
        polyline.append(p)


def smooth_polyline(
    points: Sequence[Sequence[float]],
    obstacles: Sequence[Ellipse],
    offset: float,
) -> Tuple[List[Point2], List[float]]:
    """Smooth every interior corner; returns the polyline and the offset used at each corner."""
    waypoints = [Point2(*p) for p in points]
    if len(waypoints) < 3:
        return list(waypoints), []

    index = ObstacleIndex(obstacles)
    polyline: List[Point2] = []
    used: List[float] = []
    _append(polyline, waypoints[0])
    for prev, a, nxt in zip(waypoints, waypoints[1:], waypoints[2:]):
        arc: Optional[List[Point2]] = None
        current = offset
        if distance(prev, a) > 0.0 and distance(a, nxt) > 0.0:
            for _ in range(MAX_HALVINGS + 1):
                before, after = control_points(prev, a, nxt, current)
                candidate = sample_arc(before, a, after)
                if _clear(candidate, index):
                    arc = candidate
                    break
                current /= 2.0
        if arc is None:
            logger.debug("keeping sharp corner at (%.3f, %.3f)", a.x, a.y)
            used.append(0.0)
            _append(polyline, a)
            continue
        used.append(current)
        for p in arc:
            _append(polyline, p)
    _append(polyline, waypoints[-1])
    return polyline, used


def smooth_path(
    path: PlannedPath,
    obstacles: Sequence[Ellipse],
    params: PlannerParams,
    offset: Optional[float] = None,
) -> SmoothedPath:
    """
    Replace each interior waypoint by a quadratic arc through its temporary waypoints.

    The default corner offset is ``d_vir + r_safe``.  A corner whose arc would
    cut into an inflated obstacle has its offset halved, and after the last
    halving the corner stays sharp, so a collision-free input stays
    collision-free.
    """
    if not path.succeeded:
        raise ValueError(f"cannot smooth a failed plan ({path.status_label})")
    if offset is None:
        offset = params.d_vir + params.r_safe
    if offset <= 0.0:
        polyline = [Point2(*p) for p in path.waypoints]
        return SmoothedPath(tuple(polyline), path, tuple(0.0 for _ in path.waypoints[1:-1]))
    polyline, used = smooth_polyline(path.waypoints, obstacles, offset)
    return SmoothedPath(tuple(polyline), path, tuple(used))


__all__ = [
    "MAX_HALVINGS",
    "SAMPLE_SPACING",
    "SmoothedPath",
    "bezier_point",
    "control_points",
    "sample_arc",
    "smooth_path",
    "smooth_polyline",
]
