"""
Seeded random maps for the short / large / sparse / dense families.

Randomness comes from numpy's PCG64 bit generator.  The map seed feeds a
``SeedSequence`` that is split into independent child streams for endpoint
placement, obstacle proposals, the coverage sample lattice and the reserved
S-T corridor, so changing how many draws one stage consumes never shifts
another stage.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geometry import Ellipse, Point2, ellipse_value, ellipse_values, segment_collides

from .scenario import PlannerParams, Scenario, ScenarioError

logger = logging.getLogger(__name__)

FAMILIES = ("short", "large", "sparse", "dense")
FAMILY_DEFAULTS = {
    "short": (500.0, 0.20),
    "large": (1000.0, 0.20),
    "sparse": (500.0, 0.10),
    "dense": (500.0, 0.60),
}

SEMI_MAJOR_RANGE = (10.0, 60.0)
SEMI_MINOR_MIN = 5.0
MAX_ROUNDS = 100_000
# Above this the S/T approach corridors cannot stay free.
MAX_COVERAGE = 0.90
COVERAGE_SLACK = 0.01
LATTICE = 400
# Endpoints keep this much extra room beyond the inflated boundary.
ENDPOINT_MARGIN = 1.0
# Free corridor kept open between S and T so every map is solvable.
CORRIDOR_BENDS = 3
CORRIDOR_SWAY = 0.15
CORRIDOR_MARGIN = 3.0


class GenerationFailed(ScenarioError):
    """Raised when the requested coverage cannot be reached."""


@dataclass(frozen=True)
class MapSpec:
    family: str
    size: float
    coverage: float
    seed: int

    @classmethod
    def for_family(
        cls,
        family: str,
        seed: int,
        *,
        size: Optional[float] = None,
        coverage: Optional[float] = None,
    ) -> "MapSpec":
        if family not in FAMILY_DEFAULTS:
            raise ValueError(f"unknown map family '{family}' (expected one of {FAMILIES})")
        default_size, default_coverage = FAMILY_DEFAULTS[family]
        return cls(
            family=family,
            size=float(size if size is not None else default_size),
            coverage=float(coverage if coverage is not None else default_coverage),
            seed=int(seed),
        )

    def violations(self) -> List[str]:
        issues: List[str] = []
        if self.family not in FAMILY_DEFAULTS:
            issues.append(f"unknown family '{self.family}'")
            return issues
        if not 0.0 < self.coverage < 1.0:
            issues.append(f"coverage={self.coverage} must lie in (0, 1)")
        if self.size <= 0.0:
            issues.append(f"size={self.size} must be > 0")
        if self.family == "sparse" and not math.isclose(self.coverage, 0.10):
            issues.append("sparse maps have 10% coverage")
        if self.family == "dense" and self.coverage < 0.60:
            issues.append("dense maps have at least 60% coverage")
        if self.family == "short" and self.size != 500.0:
            issues.append("short maps measure 500 m")
        if self.family == "large" and self.size != 1000.0:
            issues.append("large maps measure 1000 m")
        if not 0 <= self.seed < 2**64:
            issues.append(f"seed={self.seed} must be a 64-bit unsigned integer")
        return issues


class _CoverageLattice:
    """Jittered sample lattice tracking which samples the obstacle union covers."""

    def __init__(self, size: float, rng: np.random.Generator, n: int = LATTICE) -> None:
        self.size = size
        self.n = n
        self.cell = size / n
        base = (np.arange(n) + 0.0) * self.cell
        jitter = rng.random((2, n, n)) * self.cell
        self.xs = base[np.newaxis, :] + jitter[0]
        self.ys = base[:, np.newaxis] + jitter[1]
        self.covered = np.zeros((n, n), dtype=bool)
        self.count = 0

    @property
    def fraction(self) -> float:
        return self.count / float(self.n * self.n)

    def _window(self, e: Ellipse) -> Tuple[slice, slice]:
        c, s = math.cos(e.theta), math.sin(e.theta)
        half_x = math.hypot(e.a * c, e.b * s)
        half_y = math.hypot(e.a * s, e.b * c)
        i0 = max(int((e.cx - half_x) / self.cell), 0)
        i1 = min(int((e.cx + half_x) / self.cell) + 1, self.n)
        j0 = max(int((e.cy - half_y) / self.cell), 0)
        j1 = min(int((e.cy + half_y) / self.cell) + 1, self.n)
        return slice(j0, max(j1, j0)), slice(i0, max(i1, i0))

    def gain(self, e: Ellipse) -> Tuple[int, Tuple[slice, slice], np.ndarray]:
        rows, cols = self._window(e)
        points = np.stack((self.xs[rows, cols], self.ys[rows, cols]), axis=-1)
        inside = ellipse_values(points, e) < 1.0
        fresh = inside & ~self.covered[rows, cols]
        return int(fresh.sum()), (rows, cols), fresh

    def commit(self, window: Tuple[slice, slice], fresh: np.ndarray, gained: int) -> None:
        rows, cols = window
        self.covered[rows, cols] |= fresh
        self.count += gained


def _corner_point(rng: np.random.Generator, low: float, high: float) -> Point2:
    x, y = rng.uniform(low, high, size=2)
    return Point2(float(round(x)), float(round(y)))


def _blocks(e: Ellipse, point: Point2) -> bool:
    return ellipse_value(point, e.grown(ENDPOINT_MARGIN)) <= 1.0


def _corridor(
    rng: np.random.Generator, start: Point2, target: Point2, size: float
) -> Tuple[Point2, ...]:
    """Polyline from S to T whose bends sway sideways off the straight line."""
    dx, dy = target.x - start.x, target.y - start.y
    length = math.hypot(dx, dy)
    nx, ny = -dy / length, dx / length
    fractions = np.arange(1, CORRIDOR_BENDS + 1) / (CORRIDOR_BENDS + 1.0)
    sway = rng.uniform(-CORRIDOR_SWAY, CORRIDOR_SWAY, size=CORRIDOR_BENDS) * size
    xs = np.clip(start.x + fractions * dx + sway * nx, 0.05 * size, 0.95 * size)
    ys = np.clip(start.y + fractions * dy + sway * ny, 0.05 * size, 0.95 * size)
    bends = [Point2(float(x), float(y)) for x, y in zip(xs, ys)]
    return (start, *bends, target)


def _closes_corridor(e: Ellipse, corridor: Sequence[Point2]) -> bool:
    wide = e.grown(CORRIDOR_MARGIN)
    return any(segment_collides(p, q, wide) for p, q in zip(corridor, corridor[1:]))


def generate_map(spec: MapSpec, params: Optional[PlannerParams] = None) -> Scenario:
    """
    Build a deterministic random scenario for ``spec``.

    S is drawn in the lower-left corner region and T in the upper-right one,
    both on whole metres.  Ellipses are then proposed one at a time and kept
    unless they would swallow S or T (with ``r_safe`` applied), cut into the
    reserved S-T corridor, or push the estimated union coverage more than one
    point past the target.  Proposals stop as soon as the target coverage is
    reached.
    """
    problems = spec.violations()
    if problems:
        raise ValueError("; ".join(problems))
    if spec.coverage > MAX_COVERAGE:
        raise GenerationFailed(
            f"coverage {spec.coverage:.2f} is unreachable (ceiling {MAX_COVERAGE:.2f})"
        )
    base = params or PlannerParams()
    children = np.random.SeedSequence(spec.seed).spawn(4)
    endpoints_seq, obstacles_seq, lattice_seq, corridor_seq = children
    endpoint_rng = np.random.Generator(np.random.PCG64(endpoints_seq))
    obstacle_rng = np.random.Generator(np.random.PCG64(obstacles_seq))
    lattice = _CoverageLattice(spec.size, np.random.Generator(np.random.PCG64(lattice_seq)))

    size = spec.size
    start = _corner_point(endpoint_rng, 0.02 * size, 0.10 * size)
    target = _corner_point(endpoint_rng, 0.90 * size, 0.98 * size)
    corridor = _corridor(np.random.Generator(np.random.PCG64(corridor_seq)), start, target, size)

    obstacles: List[Ellipse] = []
    ceiling = spec.coverage + COVERAGE_SLACK
    rounds = 0
    while lattice.fraction < spec.coverage:
        rounds += 1
        if rounds > MAX_ROUNDS:
            raise GenerationFailed(
                f"coverage stalled at {lattice.fraction:.3f} after {MAX_ROUNDS} rounds "
                f"(target {spec.coverage:.3f})"
            )
        a = obstacle_rng.uniform(*SEMI_MAJOR_RANGE)
        b = obstacle_rng.uniform(SEMI_MINOR_MIN, a)
        theta = obstacle_rng.uniform(0.0, math.pi)
        cx, cy = obstacle_rng.uniform(0.0, size, size=2)
        raw = Ellipse.create(cx, cy, a, b, theta)
        inflated = raw.with_inflation(base.r_safe)
        if _blocks(inflated, start) or _blocks(inflated, target):
            continue
        if _closes_corridor(inflated, corridor):
            continue
        gained, window, fresh = lattice.gain(raw)
        if gained == 0:
            continue
        if (lattice.count + gained) / float(lattice.n * lattice.n) > ceiling:
            continue
        lattice.commit(window, fresh, gained)
        obstacles.append(inflated)

    logger.info(
        "generated %s map seed=%d: %d obstacles, coverage %.4f after %d rounds",
        spec.family,
        spec.seed,
        len(obstacles),
        lattice.fraction,
        rounds,
    )
    return Scenario(
        width=size,
        height=size,
        start=start,
        target=target,
        obstacles=tuple(obstacles),
        hidden_obstacles=(),
        params=base.resolved(len(obstacles)),
    )


def estimate_coverage(
    scenario: Scenario, samples: int = 100_000, seed: int = 0, *, include_hidden: bool = True
) -> float:
    """Monte-Carlo estimate of the raw (uninflated) obstacle union over the map area."""
    rng = np.random.Generator(np.random.PCG64(seed))
    points = np.column_stack(
        (rng.uniform(0.0, scenario.width, samples), rng.uniform(0.0, scenario.height, samples))
    )
    items = scenario.all_obstacles if include_hidden else scenario.obstacles
    covered = np.zeros(samples, dtype=bool)
    for e in items:
        covered |= ellipse_values(points, e.with_inflation(0.0)) < 1.0
    return float(covered.mean())


__all__ = [
    "FAMILIES",
    "FAMILY_DEFAULTS",
    "GenerationFailed",
    "MAX_COVERAGE",
    "MapSpec",
    "estimate_coverage",
    "generate_map",
]
