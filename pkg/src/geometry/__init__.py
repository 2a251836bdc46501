"""Rotated-ellipse geometry: membership, crossings, tangents and range clamping."""

from .ellipse import (
    BOUNDARY_EPS,
    DegenerateSegment,
    Ellipse,
    GeometryError,
    InvalidClamp,
    NoIntersection,
    ObstacleIndex,
    PARAM_EPS,
    Point2,
    PointInsideObstacle,
    SegmentHit,
    TANGENCY_EPS,
    boundary_points,
    clamp_to_range,
    count_collisions,
    crossing_interval,
    distance,
    ellipse_value,
    ellipse_values,
    first_collided_obstacle,
    segment_collides,
    segment_ellipse_intersections,
    segment_is_clear,
    tangent_points,
    virtual_waypoint,
)

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
