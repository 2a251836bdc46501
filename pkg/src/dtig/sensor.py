"""Circular-range sensor model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from geometry import Ellipse, Point2, boundary_points, clamp_to_range, distance, ellipse_value

BOUNDARY_SAMPLES = 1024
RANGE_TOLERANCE = 1e-3


def in_range(e: Ellipse, pos: Sequence[float], r: float) -> bool:
    """True when the inflated boundary comes within ``r`` of ``pos`` (or ``pos`` is inside)."""
    gap = distance(e.center, pos) - max(e.semi_axes)
    if gap > r + RANGE_TOLERANCE:
        return False
    if ellipse_value(pos, e) <= 1.0:
        return True
    samples = boundary_points(e, BOUNDARY_SAMPLES)
    nearest = float(np.min(np.hypot(samples[:, 0] - pos[0], samples[:, 1] - pos[1])))
    return nearest <= r + RANGE_TOLERANCE


def sense(
    obstacles: Sequence[Ellipse],
    hidden_obstacles: Sequence[Ellipse],
    pos: Sequence[float],
    r: float,
) -> List[int]:
    """
    Ids of obstacles within sensing range of ``pos``.

    Ids index the concatenation ``obstacles + hidden_obstacles``.  The result is
    a snapshot; remembering what was seen is up to the caller.
    """
    if r <= 0.0:
        raise ValueError(f"sensor range must be > 0, got {r}")
    everything = list(obstacles) + list(hidden_obstacles)
    return [index for index, e in enumerate(everything) if in_range(e, pos, r)]


def max_range_waypoint(pos: Sequence[float], aim: Sequence[float], r: float) -> Point2:
    """Point on ``pos -> aim`` exactly ``r`` away from ``pos``."""
    return clamp_to_range(pos, r, pos, aim)


@dataclass(frozen=True)
class SensorModel:
    range: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.range) and self.range > 0.0):
            raise ValueError(f"sensor range must be a positive number, got {self.range}")

    def scan(self, world: Sequence[Ellipse], pos: Sequence[float]) -> List[int]:
        return sense(world, (), pos, self.range)

    def sees(self, e: Ellipse, pos: Sequence[float]) -> bool:
        return in_range(e, pos, self.range)


__all__ = [
    "BOUNDARY_SAMPLES",
    "RANGE_TOLERANCE",
    "SensorModel",
    "in_range",
    "max_range_waypoint",
    "sense",
]
