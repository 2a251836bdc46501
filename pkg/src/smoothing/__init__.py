"""Collision-aware corner smoothing of planned polylines."""

from .bezier import (
    MAX_HALVINGS,
    SAMPLE_SPACING,
    SmoothedPath,
    bezier_point,
    control_points,
    sample_arc,
    smooth_path,
    smooth_polyline,
)

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
