"""
Scenario model and its JSON persistence.

A scenario is the full planning problem: map bounds, start S and target T, the
obstacles known before take-off, the obstacles only an onboard sensor can
reveal, optional relocations of known obstacles, and the planner parameters.
Obstacles are stored with ``r_safe`` already applied from the parameters, so
the geometry helpers can treat every ellipse as its own collision boundary.

`load_scenario` / `parse_scenario` report schema problems as `ParseError`
(with the offending line or field) and invariant problems as
`ValidationError` carrying every violation found.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from geometry import Ellipse, Point2

DEFAULT_THETA_MAX = 3.0 * math.pi / 4.0


class ScenarioError(RuntimeError):
    """Base class for scenario loading and generation failures."""


class ParseError(ScenarioError):
    """Raised when scenario text does not follow the JSON schema."""

    def __init__(self, message: str, *, line: Optional[int] = None, field: Optional[str] = None):
        loc = ""
        if field is not None:
            loc += f" (field '{field}')"
        if line is not None:
            loc += f" (line {line})"
        super().__init__(f"{message}{loc}")
        self.line = line
        self.field = field


class ValidationError(ScenarioError):
    """Raised when a parsed scenario violates one or more invariants."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} invariant violation(s): {lines}")


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    field: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.field}: {self.message}"


@dataclass(frozen=True)
class PlannerParams:
    """Knobs shared by the static and dynamic planners."""

    r_safe: float = 2.0
    d_vir: float = 1.0
    alpha_weight: float = 10.0
    theta_max: float = DEFAULT_THETA_MAX
    sensor_range: float = 60.0
    max_expansions: Optional[int] = None

    @classmethod
    def for_obstacles(cls, obstacle_count: int, **overrides: Any) -> "PlannerParams":
        params = cls(**overrides)
        return params.resolved(obstacle_count)

    def resolved(self, obstacle_count: int) -> "PlannerParams":
        """Fill in the derived expansion limit ``10 * max(N, 10)`` when unset."""
        if self.max_expansions is not None:
            return self
        return replace(self, max_expansions=10 * max(obstacle_count, 10))

    def expansion_limit(self, obstacle_count: int) -> int:
        if self.max_expansions is not None:
            return self.max_expansions
        return 10 * max(obstacle_count, 10)

    def violations(self) -> List[str]:
        issues: List[str] = []
        for name in ("r_safe", "d_vir", "alpha_weight", "theta_max", "sensor_range"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                issues.append(f"{name} must be a finite number")
        if issues:
            return issues
        if self.r_safe < 0.0:
            issues.append(f"r_safe={self.r_safe} must be >= 0")
        if self.d_vir <= 0.0:
            issues.append(f"d_vir={self.d_vir} must be > 0")
        if self.alpha_weight <= 0.0:
            issues.append(f"alpha_weight={self.alpha_weight} must be > 0")
        if not 0.0 < self.theta_max <= math.pi:
            issues.append(f"theta_max={self.theta_max} must lie in (0, pi]")
        if self.sensor_range <= 0.0:
            issues.append(f"sensor_range={self.sensor_range} must be > 0")
        if self.max_expansions is not None and self.max_expansions <= 0:
            issues.append(f"max_expansions={self.max_expansions} must be > 0")
        return issues


@dataclass(frozen=True)
class Relocation:
    """A known obstacle whose true geometry differs from the prior map."""

    index: int
    obstacle: Ellipse


@dataclass(frozen=True)
class Scenario:
    width: float
    height: float
    start: Point2
    target: Point2
    obstacles: Tuple[Ellipse, ...] = ()
    hidden_obstacles: Tuple[Ellipse, ...] = ()
    params: PlannerParams = field(default_factory=PlannerParams)
    relocations: Tuple[Relocation, ...] = ()

    def __post_init__(self) -> None:
        if self.params.max_expansions is None:
            count = len(self.obstacles) + len(self.hidden_obstacles)
            object.__setattr__(self, "params", self.params.resolved(count))

    @property
    def all_obstacles(self) -> Tuple[Ellipse, ...]:
        """Visible obstacles followed by hidden ones; dynamic runs index into this."""
        return self.obstacles + self.hidden_obstacles

    def true_obstacles(self) -> Tuple[Ellipse, ...]:
        """The world as it really is: relocations applied, hidden obstacles included."""
        actual = list(self.obstacles)
        for relocation in self.relocations:
            if 0 <= relocation.index < len(actual):
                actual[relocation.index] = relocation.obstacle
        return tuple(actual) + self.hidden_obstacles

    def contains(self, p: Sequence[float], tolerance: float = 1e-9) -> bool:
        return (
            -tolerance <= p[0] <= self.width + tolerance
            and -tolerance <= p[1] <= self.height + tolerance
        )

    def with_params(self, params: PlannerParams) -> "Scenario":
        """Swap the parameters and re-inflate every obstacle with the new ``r_safe``."""

        def inflate(items: Sequence[Ellipse]) -> Tuple[Ellipse, ...]:
            return tuple(e.with_inflation(params.r_safe) for e in items)

        return replace(
            self,
            params=params,
            obstacles=inflate(self.obstacles),
            hidden_obstacles=inflate(self.hidden_obstacles),
            relocations=tuple(
                Relocation(r.index, r.obstacle.with_inflation(params.r_safe))
                for r in self.relocations
            ),
        )

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "width": self.width,
            "height": self.height,
            "start": [self.start.x, self.start.y],
            "target": [self.target.x, self.target.y],
            "obstacles": [_ellipse_to_dict(e) for e in self.obstacles],
            "hidden_obstacles": [_ellipse_to_dict(e) for e in self.hidden_obstacles],
            "params": {
                "r_safe": self.params.r_safe,
                "d_vir": self.params.d_vir,
                "alpha_weight": self.params.alpha_weight,
                "theta_max": self.params.theta_max,
                "sensor_range": self.params.sensor_range,
                "max_expansions": self.params.max_expansions,
            },
        }
        if self.relocations:
            payload["relocated_obstacles"] = [
                {"index": r.index, **_ellipse_to_dict(r.obstacle)} for r in self.relocations
            ]
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# ------------------------------------------------------------ JSON helpers


def _ellipse_to_dict(e: Ellipse) -> Dict[str, float]:
    return {"cx": e.cx, "cy": e.cy, "a": e.a, "b": e.b, "theta": e.theta}


def _require(mapping: Dict[str, Any], key: str, path: str) -> Any:
    if not isinstance(mapping, dict):
        raise ParseError("expected a JSON object", field=path or "<root>")
    if key not in mapping:
        raise ParseError("missing required field", field=f"{path}{key}")
    return mapping[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {type(value).__name__}", field=path)
    return float(value)


def _point(value: Any, path: str) -> Point2:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError("expected [x, y]", field=path)
    return Point2(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _ellipse(value: Any, path: str, r_safe: float) -> Ellipse:
    # Kept literal (no axis swapping) so that validate() can report bad input.
    fields = [_number(_require(value, key, f"{path}."), f"{path}.{key}") for key in ("cx", "cy", "a", "b", "theta")]
    cx, cy, a, b, theta = fields
    if a >= b > 0.0 and 0.0 <= theta < math.pi:
        return Ellipse.create(cx, cy, a, b, theta, r_safe)
    return Ellipse(cx, cy, a, b, theta, r_safe)


def _ellipse_list(value: Any, path: str, r_safe: float) -> Tuple[Ellipse, ...]:
    if not isinstance(value, list):
        raise ParseError("expected a list of ellipses", field=path)
    return tuple(_ellipse(item, f"{path}[{i}]", r_safe) for i, item in enumerate(value))


def _params(value: Any) -> PlannerParams:
    def get(key: str) -> float:
        return _number(_require(value, key, "params."), f"params.{key}")

    raw_limit = _require(value, "max_expansions", "params.")
    # null means "derive from the obstacle count"
    if raw_limit is not None and (isinstance(raw_limit, bool) or not isinstance(raw_limit, int)):
        if isinstance(raw_limit, float) and raw_limit.is_integer():
            raw_limit = int(raw_limit)
        else:
            raise ParseError("expected an integer", field="params.max_expansions")
    return PlannerParams(
        r_safe=get("r_safe"),
        d_vir=get("d_vir"),
        alpha_weight=get("alpha_weight"),
        theta_max=get("theta_max"),
        sensor_range=get("sensor_range"),
        max_expansions=raw_limit,
    )


def scenario_from_dict(payload: Any) -> Scenario:
    """Build a scenario from decoded JSON; schema errors raise `ParseError`."""
    params = _params(_require(payload, "params", ""))
    relocations: List[Relocation] = []
    raw_relocations = payload.get("relocated_obstacles", [])
    if not isinstance(raw_relocations, list):
        raise ParseError("expected a list", field="relocated_obstacles")
    for i, item in enumerate(raw_relocations):
        path = f"relocated_obstacles[{i}]"
        index = _require(item, "index", f"{path}.")
        if isinstance(index, bool) or not isinstance(index, int):
            raise ParseError("expected an integer", field=f"{path}.index")
        relocations.append(Relocation(index, _ellipse(item, path, params.r_safe)))

    return Scenario(
        width=_number(_require(payload, "width", ""), "width"),
        height=_number(_require(payload, "height", ""), "height"),
        start=_point(_require(payload, "start", ""), "start"),
        target=_point(_require(payload, "target", ""), "target"),
        obstacles=_ellipse_list(_require(payload, "obstacles", ""), "obstacles", params.r_safe),
        hidden_obstacles=_ellipse_list(
            payload.get("hidden_obstacles", []), "hidden_obstacles", params.r_safe
        ),
        params=params,
        relocations=tuple(relocations),
    )


def parse_scenario(text: str, *, source_name: str = "<input>", check: bool = True) -> Scenario:
    """
    Parse scenario JSON text.

    Args:
        text: Raw UTF-8 JSON.
        source_name: Label used in diagnostics.
        check: When True, run `validate` and raise `ValidationError` on violations.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source_name}: invalid JSON: {exc.msg}", line=exc.lineno) from exc
    scenario = scenario_from_dict(payload)
    if check:
        from .validation import validate

        violations = validate(scenario)
        if violations:
            raise ValidationError(violations)
    return scenario


def load_scenario(path: Union[str, Path], *, check: bool = True) -> Scenario:
    source = Path(path)
    return parse_scenario(source.read_text(encoding="utf-8"), source_name=str(source), check=check)


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(scenario.to_json(), encoding="utf-8")


__all__ = [
    "DEFAULT_THETA_MAX",
    "ParseError",
    "PlannerParams",
    "Relocation",
    "Scenario",
    "ScenarioError",
    "ValidationError",
    "Violation",
    "load_scenario",
    "parse_scenario",
    "save_scenario",
    "scenario_from_dict",
]
