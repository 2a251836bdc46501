"""
Planar primitives for rotated, safety-inflated elliptic obstacles.

Every query is answered in the ellipse-local frame, where the inflated ellipse
becomes the unit circle: translate by the centre, rotate by ``-theta`` and
scale the axes by ``1 / (a + r_safe)`` and ``1 / (b + r_safe)``.  The map is
affine, so segment parameters, tangency and incidence survive the round trip
and the closed-form circle answers can be mapped straight back to the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

# Tangency threshold on the discriminant of the monic segment quadratic.
TANGENCY_EPS = 1e-9
# Point-on-boundary tolerance, in ellipse_value units.
BOUNDARY_EPS = 1e-6
# Segment parameters closer than this to 0 or 1 are treated as the endpoints.
PARAM_EPS = 1e-9


class GeometryError(RuntimeError):
    """Base class for geometric precondition failures."""


class PointInsideObstacle(GeometryError):
    """Raised when a tangent is requested from a point that is not outside."""


class NoIntersection(GeometryError):
    """Raised when a tangent line misses the virtual ellipse."""


class InvalidClamp(GeometryError):
    """Raised when clamp preconditions (inside -> outside) do not hold."""


class DegenerateSegment(GeometryError):
    """Raised when a segment collapses to a point."""


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Ellipse:
    """Rotated ellipse ``(cx, cy, a, b, theta)`` grown by ``r_safe`` on both axes."""

    cx: float
    cy: float
    a: float
    b: float
    theta: float = 0.0
    r_safe: float = 0.0

    @classmethod
    def create(
        cls,
        cx: float,
        cy: float,
        a: float,
        b: float,
        theta: float = 0.0,
        r_safe: float = 0.0,
    ) -> "Ellipse":
        """Build an ellipse with ``a >= b`` and ``theta`` folded into ``[0, pi)``."""
        if b > a:
            a, b = b, a
            theta += math.pi / 2.0
        theta = math.fmod(theta, math.pi)
        if theta < 0.0:
            theta += math.pi
        if a == b or theta >= math.pi:
            theta = 0.0
        return cls(float(cx), float(cy), float(a), float(b), float(theta), float(r_safe))

    @property
    def center(self) -> Point2:
        return Point2(self.cx, self.cy)

    @property
    def semi_axes(self) -> Tuple[float, float]:
        """Semi-axes of the collision boundary (raw axes plus ``r_safe``)."""
        return self.a + self.r_safe, self.b + self.r_safe

    def grown(self, extra: float) -> "Ellipse":
        """Same ellipse with ``extra`` metres added to the safety inflation."""
        return replace(self, r_safe=self.r_safe + extra)

    def with_inflation(self, r_safe: float) -> "Ellipse":
        return replace(self, r_safe=r_safe)

    def violations(self) -> List[str]:
        issues: List[str] = []
        values = (self.cx, self.cy, self.a, self.b, self.theta, self.r_safe)
        if not all(math.isfinite(v) for v in values):
            issues.append("non-finite ellipse parameter")
            return issues
        if self.a <= 0.0:
            issues.append(f"semi-major axis a={self.a} must be > 0")
        if self.b <= 0.0:
            issues.append(f"semi-minor axis b={self.b} must be > 0")
        if self.a < self.b:
            issues.append(f"semi-major axis a={self.a} is smaller than b={self.b}")
        if self.r_safe < 0.0:
            issues.append(f"r_safe={self.r_safe} must be >= 0")
        if not 0.0 <= self.theta < math.pi:
            issues.append(f"theta={self.theta} outside [0, pi)")
        return issues


class SegmentHit(NamedTuple):
    t: float
    point: Point2
    obstacle_id: int


# ---------------------------------------------------------------- frames


def _to_local(e: Ellipse, x: float, y: float) -> Tuple[float, float]:
    big_a, big_b = e.semi_axes
    c, s = math.cos(e.theta), math.sin(e.theta)
    dx, dy = x - e.cx, y - e.cy
    return (dx * c + dy * s) / big_a, (-dx * s + dy * c) / big_b


def _dir_to_local(e: Ellipse, dx: float, dy: float) -> Tuple[float, float]:
    big_a, big_b = e.semi_axes
    c, s = math.cos(e.theta), math.sin(e.theta)
    return (dx * c + dy * s) / big_a, (-dx * s + dy * c) / big_b


def _from_local(e: Ellipse, u: float, v: float) -> Point2:
    big_a, big_b = e.semi_axes
    c, s = math.cos(e.theta), math.sin(e.theta)
    lx, ly = u * big_a, v * big_b
    return Point2(e.cx + lx * c - ly * s, e.cy + lx * s + ly * c)


def _monic_quadratic(
    e: Ellipse, origin: Sequence[float], direction: Sequence[float]
) -> Optional[Tuple[float, float]]:
    """
    Coefficients ``(beta, gamma)`` of ``t^2 + 2*beta*t + gamma = 0`` whose roots
    are the parameters where ``origin + t*direction`` meets the inflated boundary.
    """
    qx, qy = _to_local(e, origin[0], origin[1])
    dx, dy = _dir_to_local(e, direction[0], direction[1])
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return None
    beta = (qx * dx + qy * dy) / dd
    gamma = (qx * qx + qy * qy - 1.0) / dd
    return beta, gamma


# ------------------------------------------------------------- operations


def ellipse_value(p: Sequence[float], e: Ellipse) -> float:
    """Left-hand side of the inflated ellipse equation; < 1 inside, 1 on, > 1 outside."""
    u, v = _to_local(e, p[0], p[1])
    return u * u + v * v


def segment_ellipse_intersections(
    p0: Sequence[float], p1: Sequence[float], e: Ellipse, obstacle_id: int = 0
) -> List[SegmentHit]:
    """Boundary crossings of segment ``p0 -> p1`` with ``t`` in ``[0, 1]``, sorted by ``t``."""
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    coefficients = _monic_quadratic(e, p0, (dx, dy))
    if coefficients is None:
        raise DegenerateSegment(f"segment collapses to the point {tuple(p0)}")
    beta, gamma = coefficients
    disc = beta * beta - gamma
    if abs(disc) < TANGENCY_EPS:
        roots = [-beta]
    elif disc < 0.0:
        return []
    else:
        root = math.sqrt(disc)
        roots = [-beta - root, -beta + root]

    hits: List[SegmentHit] = []
    for t in roots:
        if -PARAM_EPS <= t <= 1.0 + PARAM_EPS:
            t = min(max(t, 0.0), 1.0)
            hits.append(SegmentHit(t, Point2(p0[0] + t * dx, p0[1] + t * dy), obstacle_id))
    return hits


def crossing_interval(
    p0: Sequence[float], p1: Sequence[float], e: Ellipse
) -> Optional[Tuple[float, float]]:
    """
    Parameter interval ``(t_in, t_out)`` of the chord through the interior of the
    inflated ellipse, clipped to the segment, or ``None`` when the segment stays
    on the closed outside (misses, grazes, or only touches at an endpoint).
    """
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    coefficients = _monic_quadratic(e, p0, (dx, dy))
    if coefficients is None:
        return None
    beta, gamma = coefficients
    disc = beta * beta - gamma
    if disc < TANGENCY_EPS:
        return None
    root = math.sqrt(disc)
    t_in, t_out = -beta - root, -beta + root
    if t_out <= PARAM_EPS or t_in >= 1.0 - PARAM_EPS:
        return None
    return max(t_in, 0.0), min(t_out, 1.0)


def _may_touch(p0: Sequence[float], p1: Sequence[float], e: Ellipse) -> bool:
    """Cheap reject: segment distance to the centre against the circumscribed radius."""
    radius = max(e.semi_axes)
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    fx, fy = e.cx - p0[0], e.cy - p0[1]
    length2 = dx * dx + dy * dy
    t = 0.0 if length2 == 0.0 else min(max((fx * dx + fy * dy) / length2, 0.0), 1.0)
    ox, oy = fx - t * dx, fy - t * dy
    return ox * ox + oy * oy <= radius * radius * (1.0 + 1e-9) + 1e-12


def segment_collides(p0: Sequence[float], p1: Sequence[float], e: Ellipse) -> bool:
    return _may_touch(p0, p1, e) and crossing_interval(p0, p1, e) is not None


def count_collisions(
    p0: Sequence[float], p1: Sequence[float], obstacles: Sequence[Ellipse]
) -> int:
    return sum(1 for e in obstacles if segment_collides(p0, p1, e))


def segment_is_clear(
    p0: Sequence[float], p1: Sequence[float], obstacles: Sequence[Ellipse]
) -> bool:
    return not any(segment_collides(p0, p1, e) for e in obstacles)


def first_collided_obstacle(
    p0: Sequence[float], p1: Sequence[float], obstacles: Sequence[Ellipse]
) -> Optional[Tuple[int, SegmentHit]]:
    """
    The obstacle whose interior the segment enters first, with its entry hit.

    Grazing contacts are not collisions.  Equal entry parameters resolve to the
    lower obstacle index.
    """
    return _first_hit(p0, p1, obstacles, range(len(obstacles)))


def _first_hit(
    p0: Sequence[float],
    p1: Sequence[float],
    obstacles: Sequence[Ellipse],
    indices: Iterable[int],
) -> Optional[Tuple[int, SegmentHit]]:
    best: Optional[Tuple[float, int]] = None
    for index in indices:
        e = obstacles[index]
        if not _may_touch(p0, p1, e):
            continue
        interval = crossing_interval(p0, p1, e)
        if interval is None:
            continue
        key = (interval[0], index)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    t, index = best
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    return index, SegmentHit(t, Point2(p0[0] + t * dx, p0[1] + t * dy), index)


class ObstacleIndex:
    """
    Circumscribed-circle broad phase over a fixed obstacle tuple.

    Only obstacles whose bounding circle reaches a segment go through the exact
    crossing test.
    """

    def __init__(self, obstacles: Sequence[Ellipse]) -> None:
        self.obstacles = tuple(obstacles)
        self._cx = np.array([e.cx for e in self.obstacles], dtype=float)
        self._cy = np.array([e.cy for e in self.obstacles], dtype=float)
        radius = np.array([max(e.semi_axes) for e in self.obstacles], dtype=float)
        self._reach2 = radius * radius * (1.0 + 1e-9) + 1e-12

    def __len__(self) -> int:
        return len(self.obstacles)

    def near_segment(self, p0: Sequence[float], p1: Sequence[float]) -> np.ndarray:
        """Ascending indices of obstacles whose bounding circle meets ``p0 -> p1``."""
        if not self.obstacles:
            return np.empty(0, dtype=int)
        dx, dy = p1[0] - p0[0], p1[1] - p0[1]
        fx, fy = self._cx - p0[0], self._cy - p0[1]
        length2 = dx * dx + dy * dy
        if length2 == 0.0:
            t = np.zeros_like(fx)
        else:
            t = np.clip((fx * dx + fy * dy) / length2, 0.0, 1.0)
        ox, oy = fx - t * dx, fy - t * dy
        return np.flatnonzero(ox * ox + oy * oy <= self._reach2)

    def first_collided(
        self, p0: Sequence[float], p1: Sequence[float]
    ) -> Optional[Tuple[int, SegmentHit]]:
        return _first_hit(p0, p1, self.obstacles, self.near_segment(p0, p1).tolist())

    def count_collisions(self, p0: Sequence[float], p1: Sequence[float]) -> int:
        return sum(
            1
            for i in self.near_segment(p0, p1).tolist()
            if crossing_interval(p0, p1, self.obstacles[i]) is not None
        )


def tangent_points(p: Sequence[float], e: Ellipse) -> Tuple[Point2, Point2]:
    """
    The two points where lines through ``p`` touch the inflated ellipse.

    The first point lies counterclockwise of the ray from the ellipse centre
    towards ``p``; the second lies clockwise of it.
    """
    value = ellipse_value(p, e)
    if value <= 1.0:
        raise PointInsideObstacle(
            f"point ({p[0]:.6f}, {p[1]:.6f}) is not outside the inflated ellipse "
            f"(value {value:.9f})"
        )
    qx, qy = _to_local(e, p[0], p[1])
    distance = math.sqrt(value)
    heading = math.atan2(qy, qx)
    spread = math.acos(1.0 / distance)
    ccw = _from_local(e, math.cos(heading + spread), math.sin(heading + spread))
    cw = _from_local(e, math.cos(heading - spread), math.sin(heading - spread))
    return ccw, cw


def virtual_waypoint(
    p: Sequence[float], e: Ellipse, tangent_pt: Sequence[float], d_vir: float
) -> Point2:
    """
    Far intersection of the tangent line ``p -> tangent_pt`` with the virtual
    ellipse, whose semi-axes are ``a + r_safe + d_vir`` and ``b + r_safe + d_vir``.
    """
    if d_vir <= 0.0:
        raise ValueError(f"d_vir must be > 0, got {d_vir}")
    dx, dy = tangent_pt[0] - p[0], tangent_pt[1] - p[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        raise DegenerateSegment("tangent point coincides with the current point")
    ux, uy = dx / norm, dy / norm
    coefficients = _monic_quadratic(e.grown(d_vir), p, (ux, uy))
    if coefficients is None:
        raise NoIntersection("degenerate tangent direction")
    beta, gamma = coefficients
    disc = beta * beta - gamma
    if disc < 0.0:
        raise NoIntersection(
            f"tangent line from ({p[0]:.6f}, {p[1]:.6f}) misses the virtual ellipse"
        )
    s = -beta + math.sqrt(disc)
    return Point2(p[0] + s * ux, p[1] + s * uy)


def clamp_to_range(
    center: Sequence[float], r: float, p0: Sequence[float], p1: Sequence[float]
) -> Point2:
    """Point of segment ``p0 -> p1`` at distance exactly ``r`` from ``center``."""
    d0 = math.hypot(p0[0] - center[0], p0[1] - center[1])
    d1 = math.hypot(p1[0] - center[0], p1[1] - center[1])
    if d0 > r + 1e-9 or d1 <= r:
        raise InvalidClamp(
            f"clamp needs |p0 - c| <= r < |p1 - c| (got {d0:.9f}, {d1:.9f}, r={r})"
        )
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    fx, fy = p0[0] - center[0], p0[1] - center[1]
    aa = dx * dx + dy * dy
    bb = fx * dx + fy * dy
    cc = fx * fx + fy * fy - r * r
    disc = max(bb * bb - aa * cc, 0.0)
    t = (-bb + math.sqrt(disc)) / aa
    t = min(max(t, 0.0), 1.0)
    return Point2(p0[0] + t * dx, p0[1] + t * dy)


def boundary_points(e: Ellipse, count: int = 1024) -> np.ndarray:
    """``count`` points of the inflated boundary at evenly spaced parametric angles."""
    big_a, big_b = e.semi_axes
    angles = np.arange(count) * (2.0 * np.pi / count)
    lx, ly = big_a * np.cos(angles), big_b * np.sin(angles)
    c, s = math.cos(e.theta), math.sin(e.theta)
    return np.column_stack((e.cx + lx * c - ly * s, e.cy + lx * s + ly * c))


def ellipse_values(points: np.ndarray, e: Ellipse) -> np.ndarray:
    """Vectorised ellipse_value over an ``(n, 2)`` array of points."""
    big_a, big_b = e.semi_axes
    c, s = math.cos(e.theta), math.sin(e.theta)
    dx = points[..., 0] - e.cx
    dy = points[..., 1] - e.cy
    u = (dx * c + dy * s) / big_a
    v = (-dx * s + dy * c) / big_b
    return u * u + v * v


def distance(p: Sequence[float], q: Sequence[float]) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


__all__ = [
    "BOUNDARY_EPS",
    "DegenerateSegment",
    "Ellipse",
    "GeometryError",
    "InvalidClamp",
    "NoIntersection",
    "ObstacleIndex",
    "PARAM_EPS",
    "Point2",
    "PointInsideObstacle",
    "SegmentHit",
    "TANGENCY_EPS",
    "boundary_points",
    "clamp_to_range",
    "count_collisions",
    "crossing_interval",
    "distance",
    "ellipse_value",
    "ellipse_values",
    "first_collided_obstacle",
    "segment_collides",
    "segment_ellipse_intersections",
    "segment_is_clear",
    "tangent_points",
    "virtual_waypoint",
]
