import math

import numpy as np
import pytest

from geometry import (
    DegenerateSegment,
    Ellipse,
    InvalidClamp,
    ObstacleIndex,
    Point2,
    PointInsideObstacle,
    clamp_to_range,
    count_collisions,
    ellipse_value,
    first_collided_obstacle,
    segment_collides,
    segment_ellipse_intersections,
    tangent_points,
    virtual_waypoint,
)

UNIT = Ellipse(0.0, 0.0, 1.0, 1.0)
FLAT = Ellipse(0.0, 0.0, 2.0, 1.0)


def _random_case(rng):
    a = rng.uniform(0.5, 20.0)
    b = rng.uniform(0.3, a)
    e = Ellipse.create(rng.uniform(-50, 50), rng.uniform(-50, 50), a, b, rng.uniform(0, math.pi), rng.uniform(0, 3))
    angle = rng.uniform(0, 2 * math.pi)
    reach = max(e.semi_axes) * rng.uniform(1.05, 6.0)
    p = Point2(e.cx + reach * math.cos(angle), e.cy + reach * math.sin(angle))
    return p, e


def _bearing_extremes(p, e, samples=200_000):
    big_a, big_b = e.semi_axes
    angles = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    lx, ly = big_a * np.cos(angles), big_b * np.sin(angles)
    c, s = math.cos(e.theta), math.sin(e.theta)
    xs, ys = e.cx + lx * c - ly * s, e.cy + lx * s + ly * c
    centre_bearing = math.atan2(e.cy - p[1], e.cx - p[0])
    rel = np.angle(np.exp(1j * (np.arctan2(ys - p[1], xs - p[0]) - centre_bearing)))
    lo, hi = int(np.argmin(rel)), int(np.argmax(rel))
    return Point2(xs[lo], ys[lo]), Point2(xs[hi], ys[hi])


@pytest.mark.parametrize(
    "point, e, expected",
    [
        ((0.0, 0.0), FLAT, 0.0),
        ((2.0, 0.0), FLAT, 1.0),
        ((3.0, 0.0), Ellipse(0.0, 0.0, 2.0, 1.0, 0.0, 1.0), 1.0),
    ],
)
def test_ellipse_value_known_values(point, e, expected):
    assert ellipse_value(point, e) == pytest.approx(expected, abs=1e-12)


def test_create_normalises_axes_and_rotation():
    e = Ellipse.create(1.0, 2.0, 1.0, 3.0, 0.0)
    assert (e.a, e.b) == (3.0, 1.0)
    assert e.theta == pytest.approx(math.pi / 2)
    assert Ellipse.create(0.0, 0.0, 2.0, 2.0, 1.2).theta == 0.0
    assert Ellipse.create(0.0, 0.0, 2.0, 1.0, -0.5).theta == pytest.approx(math.pi - 0.5)
    assert not e.violations()
    assert Ellipse(0.0, 0.0, 0.0, 1.0).violations()


def test_segment_crossing_hits():
    hits = segment_ellipse_intersections((-3, 0), (3, 0), FLAT)
    assert [h.t for h in hits] == pytest.approx([1 / 6, 5 / 6])
    assert hits[0].point == pytest.approx((-2.0, 0.0))
    assert hits[1].point == pytest.approx((2.0, 0.0))


def test_segment_miss_and_tangency():
    assert segment_ellipse_intersections((-3, 2), (3, 2), FLAT) == []
    (hit,) = segment_ellipse_intersections((-3, 1), (3, 1), FLAT)
    assert hit.point == pytest.approx((0.0, 1.0), abs=1e-9)
    assert not segment_collides((-3, 1), (3, 1), FLAT)
    assert segment_collides((-3, 0.5), (3, 0.5), FLAT)


def test_segment_reversal_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p, e = _random_case(rng)
        q = Point2(2 * e.cx - p.x, 2 * e.cy - p.y)
        forward = segment_ellipse_intersections(p, q, e)
        backward = segment_ellipse_intersections(q, p, e)
        assert len(forward) == len(backward)
        for hit, mirrored in zip(forward, reversed(backward)):
            assert hit.t == pytest.approx(1.0 - mirrored.t, abs=1e-9)
            assert hit.point == pytest.approx(mirrored.point, abs=1e-9)


def test_degenerate_segment_rejected():
    with pytest.raises(DegenerateSegment):
        segment_ellipse_intersections((1, 1), (1, 1), FLAT)


def test_tangent_points_unit_circle():
    first, second = tangent_points((2.0, 0.0), UNIT)
    assert first == pytest.approx((0.5, math.sqrt(3) / 2))
    assert second == pytest.approx((0.5, -math.sqrt(3) / 2))


def test_tangent_points_rotated_ellipse_symmetric():
    e = Ellipse(0.0, 0.0, 2.0, 1.0, math.pi / 2)
    first, second = tangent_points((4.0, 0.0), e)
    assert first.x == pytest.approx(second.x)
    assert first.y == pytest.approx(-second.y)
    assert first.y > 0


def test_tangent_point_inside_raises():
    with pytest.raises(PointInsideObstacle):
        tangent_points((0.5, 0.0), UNIT)


def test_tangent_points_match_bearing_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p, e = _random_case(rng)
        oracle = _bearing_extremes(p, e)
        found = tangent_points(p, e)
        for point in found:
            nearest = min(math.dist(point, o) for o in oracle)
            assert nearest < 1e-3 * max(e.semi_axes)


def test_tangency_oracle_suite():
    rng = np.random.default_rng(2024)
    ts = np.linspace(0.0, 1.0, 1000)[:-1]
    for _ in range(1000):
        p, e = _random_case(rng)
        for touch in tangent_points(p, e):
            assert abs(ellipse_value(touch, e) - 1.0) <= 1e-6
            samples = np.column_stack((p.x + ts * (touch.x - p.x), p.y + ts * (touch.y - p.y)))
            u = (samples[:, 0] - e.cx) * math.cos(e.theta) + (samples[:, 1] - e.cy) * math.sin(e.theta)
            v = -(samples[:, 0] - e.cx) * math.sin(e.theta) + (samples[:, 1] - e.cy) * math.cos(e.theta)
            big_a, big_b = e.semi_axes
            assert np.min((u / big_a) ** 2 + (v / big_b) ** 2) >= 1.0 - 1e-6
            w = virtual_waypoint(p, e, touch, 0.5)
            assert ellipse_value(w, e) > 1.0


def test_virtual_waypoint_known_values():
    upper = virtual_waypoint((2.0, 0.0), UNIT, (0.5, math.sqrt(3) / 2), 0.2)
    lower = virtual_waypoint((2.0, 0.0), UNIT, (0.5, -math.sqrt(3) / 2), 0.2)
    assert upper == pytest.approx((-0.0745, 1.1977), abs=1e-3)
    assert lower == pytest.approx((-0.0745, -1.1977), abs=1e-3)
    assert math.hypot(*upper) == pytest.approx(1.2)
    with pytest.raises(ValueError):
        virtual_waypoint((2.0, 0.0), UNIT, (0.5, math.sqrt(3) / 2), 0.0)


def test_first_collided_obstacle_known_values():
    circles = [Ellipse(2.0, 0.0, 1.0, 1.0), Ellipse(5.0, 0.0, 1.0, 1.0)]
    index, hit = first_collided_obstacle((0, 0), (8, 0), circles)
    assert index == 0
    assert hit.t == pytest.approx(1 / 8)
    assert hit.point == pytest.approx((1.0, 0.0))
    assert first_collided_obstacle((0, 0), (8, 8), circles) is None
    twins = [Ellipse(3.0, 0.0, 1.0, 1.0), Ellipse(3.0, 0.0, 1.0, 1.0)]
    assert first_collided_obstacle((0, 0), (8, 0), twins)[0] == 0
    assert first_collided_obstacle((0, 0), (8, 0), list(reversed(circles)))[0] == 1


def test_obstacle_index_agrees_with_linear_scan():
    rng = np.random.default_rng(11)
    obstacles = []
    for _ in range(40):
        cx, cy = rng.uniform(0, 100, 2)
        b, a = sorted(rng.uniform(1, 15, 2))
        obstacles.append(Ellipse.create(cx, cy, a, b, rng.uniform(0, math.pi), 2.0))
    index = ObstacleIndex(obstacles)
    assert len(index) == 40
    for _ in range(300):
        p0, p1 = rng.uniform(0, 100, 2), rng.uniform(0, 100, 2)
        expected = first_collided_obstacle(p0, p1, obstacles)
        found = index.first_collided(p0, p1)
        if expected is None:
            assert found is None
        else:
            assert found[0] == expected[0]
            assert found[1].t == expected[1].t
        assert index.count_collisions(p0, p1) == count_collisions(p0, p1, obstacles)
    assert ObstacleIndex([]).first_collided((0, 0), (1, 1)) is None


@pytest.mark.parametrize(
    "center, r, p0, p1, expected",
    [
        ((0, 0), 60.0, (0, 0), (100, 0), (60.0, 0.0)),
        ((0, 0), 60.0, (0, 0), (0, -80), (0.0, -60.0)),
        ((10, 0), 5.0, (10, 0), (10, 7), (10.0, 5.0)),
    ],
)
def test_clamp_to_range_known_values(center, r, p0, p1, expected):
    assert clamp_to_range(center, r, p0, p1) == pytest.approx(expected, abs=1e-9)


def test_clamp_to_range_rejects_bad_inputs():
    with pytest.raises(InvalidClamp):
        clamp_to_range((0, 0), 10.0, (0, 0), (5, 0))
    with pytest.raises(InvalidClamp):
        clamp_to_range((0, 0), 10.0, (20, 0), (30, 0))
