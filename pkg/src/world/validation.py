"""
Invariant checks for scenarios.

`validate` never raises: it walks the scenario once and returns every
violation it finds, each with a stable code and the offending field path, so
callers can print them all or decide to stop on the first.
"""

from __future__ import annotations

import math
from typing import List, Sequence

from geometry import Ellipse, Point2, ellipse_value

from .scenario import Scenario, Violation


class _ScenarioValidator:
    def __init__(self, scenario: Scenario) -> None:
        self._scenario = scenario
        self._issues: List[Violation] = []

    def run(self) -> List[Violation]:
        s = self._scenario
        self._check_bounds()
        for message in s.params.violations():
            self._add_issue("INVALID_PARAMS", message, "params")

        groups = (
            ("obstacles", s.obstacles),
            ("hidden_obstacles", s.hidden_obstacles),
            ("relocated_obstacles", tuple(r.obstacle for r in s.relocations)),
        )
        sound: List[tuple] = []
        for name, items in groups:
            for index, e in enumerate(items):
                problems = e.violations()
                if problems:
                    self._add_issue("INVALID_OBSTACLE", "; ".join(problems), f"{name}[{index}]")
                else:
                    sound.append((name, index, e))

        for index, relocation in enumerate(s.relocations):
            if not 0 <= relocation.index < len(s.obstacles):
                self._add_issue(
                    "BAD_RELOCATION",
                    f"index {relocation.index} does not name a known obstacle",
                    f"relocated_obstacles[{index}].index",
                )

        for label, point in (("start", s.start), ("target", s.target)):
            if not self._finite(point):
                continue
            for name, index, e in sound:
                self._check_clear(label, point, name, index, e)
        return self._issues

    # ------------------------------------------------------------------ helpers

    def _add_issue(self, code: str, message: str, field: str) -> None:
        self._issues.append(Violation(code=code, message=message, field=field))

    @staticmethod
    def _finite(point: Sequence[float]) -> bool:
        return all(math.isfinite(v) for v in point)

    def _check_bounds(self) -> None:
        s = self._scenario
        if not (math.isfinite(s.width) and s.width > 0.0):
            self._add_issue("BAD_BOUNDS", f"width={s.width} must be a positive number", "width")
        if not (math.isfinite(s.height) and s.height > 0.0):
            self._add_issue("BAD_BOUNDS", f"height={s.height} must be a positive number", "height")
        for label, point in (("start", s.start), ("target", s.target)):
            if not self._finite(point):
                self._add_issue("NON_FINITE", f"{label} has non-finite coordinates", label)
            elif not s.contains(point, tolerance=0.0):
                self._add_issue(
                    "OUT_OF_BOUNDS",
                    f"{label} ({point[0]}, {point[1]}) lies outside "
                    f"[0, {s.width}] x [0, {s.height}]",
                    label,
                )

    def _check_clear(self, label: str, point: Point2, name: str, index: int, e: Ellipse) -> None:
        value = ellipse_value(point, e)
        if value <= 1.0:
            self._add_issue(
                "BLOCKED_ENDPOINT",
                f"{label} lies inside inflated obstacle {name}[{index}] (value {value:.6f})",
                label,
            )


def validate(scenario: Scenario) -> List[Violation]:
    """Return every violated scenario invariant; an empty list means valid."""
    try:
        return _ScenarioValidator(scenario).run()
    except Exception as exc:  # noqa: BLE001 - validate must not raise
        return [Violation(code="INTERNAL", message=str(exc), field="<scenario>")]


__all__ = ["validate"]
