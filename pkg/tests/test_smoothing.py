import math

import pytest

from geometry import Ellipse, Point2
from metrics import max_heading_change, path_length
from smoothing import SAMPLE_SPACING, bezier_point, control_points, sample_arc, smooth_path
from stig import PlannedPath, PlanStatus, plan_static
from world import PlannerParams

from helpers import assert_clear, build_scenario


def _planned(points):
    return PlannedPath(tuple(Point2(*p) for p in points), 0, PlanStatus.SUCCESS)


def test_bezier_point_known_values():
    assert bezier_point((0, 0), (1, 0), (1, 1), 0.5) == pytest.approx((0.75, 0.25))
    assert bezier_point((3, 4), (7, 1), (9, 9), 0.0) == (3, 4)
    assert bezier_point((3, 4), (7, 1), (9, 9), 1.0) == (9, 9)
    with pytest.raises(ValueError):
        bezier_point((0, 0), (1, 0), (1, 1), 1.5)


def test_control_points_known_values():
    before, after = control_points((0, 0), (10, 0), (10, 10), 2.0)
    assert before == pytest.approx((8.0, 0.0))
    assert after == pytest.approx((10.0, 2.0))
    before, after = control_points((0, 0), (3, 0), (6, 0), 10.0)
    assert before == pytest.approx((1.5, 0.0))
    assert after == pytest.approx((4.5, 0.0))
    with pytest.raises(ValueError):
        control_points((0, 0), (3, 0), (6, 0), 0.0)


def test_collinear_corner_stays_straight():
    before, after = control_points((0, 0), (3, 0), (6, 0), 1.0)
    for p in sample_arc(before, Point2(3.0, 0.0), after):
        assert p.y == pytest.approx(0.0)


def test_arc_samples_are_dense_and_inside_hull():
    p0, p1, p2 = Point2(8.0, 0.0), Point2(10.0, 0.0), Point2(10.0, 2.0)
    samples = sample_arc(p0, p1, p2)
    assert samples[0] == p0 and samples[-1] == p2
    for a, b in zip(samples, samples[1:]):
        assert math.dist(a, b) <= SAMPLE_SPACING + 1e-12
    for p in samples:
        assert 8.0 - 1e-9 <= p.x <= 10.0 + 1e-9
        assert -1e-9 <= p.y <= 2.0 + 1e-9
        assert p.y <= p.x - 8.0 + 1e-9


def test_arc_samples_match_bezier_point():
    p0, p1, p2 = Point2(0.0, 0.0), Point2(4.0, 3.0), Point2(9.0, -1.0)
    samples = sample_arc(p0, p1, p2, spacing=0.5)
    count = len(samples) - 1
    assert count == math.ceil(2.0 * math.dist(p1, p2) / 0.5)
    for k, p in enumerate(samples):
        expected = bezier_point(p0, p1, p2, k / count)
        assert p.x == pytest.approx(expected.x, abs=1e-12)
        assert p.y == pytest.approx(expected.y, abs=1e-12)


def test_two_point_path_unchanged():
    smoothed = smooth_path(_planned([(0, 0), (10, 0)]), [], PlannerParams())
    assert smoothed.polyline == ((0, 0), (10, 0))
    assert smoothed.corner_offsets == ()


def test_right_angle_is_rounded():
    source = [(0, 0), (10, 0), (10, 10)]
    smoothed = smooth_path(_planned(source), [], PlannerParams(r_safe=0.0, d_vir=2.0))
    assert smoothed.corner_offsets == (2.0,)
    assert path_length(smoothed.polyline) < 20.0
    assert max_heading_change(smoothed.polyline) < math.pi / 2
    assert smoothed.polyline[0] == (0, 0)
    assert smoothed.polyline[-1] == (10, 10)


def test_corner_next_to_obstacle_halves_offset():
    hazard = Ellipse(9.0, 1.0, 0.9, 0.9)
    source = [(0, 0), (10, 0), (10, 10)]
    smoothed = smooth_path(_planned(source), [hazard], PlannerParams(r_safe=0.0, d_vir=2.0))
    assert smoothed.corner_offsets == (1.0,)
    assert_clear(smoothed.polyline, [hazard], step=0.05)


def test_unsmoothable_corner_stays_sharp():
    # thin sliver along the corner bisector: every arc crosses it, the legs do not
    near, far = 0.005, 0.8
    middle = (near + far) / 2 / math.sqrt(2)
    hazard = Ellipse.create(10.0 - middle, middle, (far - near) / 2, 0.004, 3 * math.pi / 4)
    source = [(0, 0), (10, 0), (10, 10)]
    smoothed = smooth_path(_planned(source), [hazard], PlannerParams(r_safe=0.0, d_vir=2.0))
    assert smoothed.corner_offsets == (0.0,)
    assert Point2(10.0, 0.0) in smoothed.polyline
    assert_clear(smoothed.polyline, [hazard], step=0.01)


def test_failed_plan_is_rejected():
    with pytest.raises(ValueError):
        smooth_path(PlannedPath((), 0, PlanStatus.FAILURE), [], PlannerParams())


def test_smoothing_planned_paths_keeps_guarantees():
    layouts = [
        [(100.0, 50.0, 10.0, 10.0), (180.0, 40.0, 12.0, 12.0), (240.0, 60.0, 8.0, 8.0)],
        [(80.0, 45.0, 20.0, 8.0, 0.7), (150.0, 60.0, 15.0, 15.0), (220.0, 40.0, 25.0, 6.0, 2.0)],
    ]
    for layout in layouts:
        s = build_scenario(layout, (10.0, 50.0), (290.0, 50.0), size=(300.0, 100.0))
        path = plan_static(s)
        assert path.succeeded
        smoothed = smooth_path(path, s.obstacles, s.params)
        assert smoothed.polyline[0] == s.start
        assert smoothed.polyline[-1] == s.target
        assert path_length(smoothed.polyline) <= path_length(path.waypoints) + 1e-6
        assert max_heading_change(smoothed.polyline) <= max_heading_change(path.waypoints) + 1e-9
        assert_clear(smoothed.polyline, s.obstacles)
