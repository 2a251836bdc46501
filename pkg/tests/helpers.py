"""Shared scenario builders and clearance oracle for the test suite."""

import math

from geometry import Ellipse, Point2, ellipse_value
from world import PlannerParams, Scenario


def build_scenario(obstacles, start, target, *, size=(100.0, 100.0), hidden=(), relocations=(), **params):
    """Raw ``(cx, cy, a, b[, theta])`` tuples in, an inflated scenario out."""
    width, height = size
    scenario = Scenario(
        width=width,
        height=height,
        start=Point2(*start),
        target=Point2(*target),
        obstacles=tuple(Ellipse.create(*o) for o in obstacles),
        hidden_obstacles=tuple(Ellipse.create(*o) for o in hidden),
        relocations=tuple(relocations),
    )
    return scenario.with_params(PlannerParams(**params))


def min_clearance(points, obstacles, step=0.1):
    """Smallest ellipse value seen sampling every segment at ``step`` metres."""
    lowest = math.inf
    for p, q in zip(points, points[1:]):
        count = max(1, math.ceil(math.dist(p, q) / step))
        for k in range(count + 1):
            t = k / count
            sample = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            for e in obstacles:
                lowest = min(lowest, ellipse_value(sample, e))
    return lowest


def assert_clear(points, obstacles, step=0.1):
    assert min_clearance(points, obstacles, step) >= 1.0 - 1e-6
