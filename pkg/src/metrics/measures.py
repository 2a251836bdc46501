"""Path length and turning-angle measures."""

from __future__ import annotations

import math
from typing import Sequence

from geometry import distance


class DegenerateVertex(ValueError):
    """A turning angle was requested at a vertex with a zero-length adjacent segment."""


def path_length(points: Sequence[Sequence[float]]) -> float:
    if len(points) < 2:
        raise ValueError("path_length needs at least two points")
    return math.fsum(distance(p, q) for p, q in zip(points, points[1:]))


def turning_angle(p_prev: Sequence[float], p: Sequence[float], p_next: Sequence[float]) -> float:
    """Absolute heading change at ``p`` in [0, pi], via atan2(cross, dot)."""
    ux, uy = p[0] - p_prev[0], p[1] - p_prev[1]
    vx, vy = p_next[0] - p[0], p_next[1] - p[1]
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise DegenerateVertex(f"zero-length segment at ({p[0]}, {p[1]})")
    return abs(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))


def slope_turning_angle(p_prev: Sequence[float], p: Sequence[float], p_next: Sequence[float]) -> float:
    """Slope-difference form of the turning angle; undefined for vertical segments."""
    m1 = (p[1] - p_prev[1]) / (p[0] - p_prev[0])
    m2 = (p_next[1] - p[1]) / (p_next[0] - p[0])
    return abs(math.atan((m1 - m2) / (1.0 + m1 * m2)))


def total_turning(points: Sequence[Sequence[float]]) -> float:
    if len(points) < 2:
        raise ValueError("total_turning needs at least two points")
    return math.fsum(turning_angle(a, b, c) for a, b, c in zip(points, points[1:], points[2:]))


def max_heading_change(points: Sequence[Sequence[float]]) -> float:
    if len(points) < 3:
        return 0.0
    return max(turning_angle(a, b, c) for a, b, c in zip(points, points[1:], points[2:]))


__all__ = [
    "DegenerateVertex",
    "max_heading_change",
    "path_length",
    "slope_turning_angle",
    "total_turning",
    "turning_angle",
]
