"""Scenario model, persistence, validation and random map generation."""

from .generator import (
    FAMILIES,
    FAMILY_DEFAULTS,
    MAX_COVERAGE,
    GenerationFailed,
    MapSpec,
    estimate_coverage,
    generate_map,
)
from .scenario import (
    DEFAULT_THETA_MAX,
    ParseError,
    PlannerParams,
    Relocation,
    Scenario,
    ScenarioError,
    ValidationError,
    Violation,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_from_dict,
)
from .validation import validate

__all__ = [
    "DEFAULT_THETA_MAX",
    "FAMILIES",
    "FAMILY_DEFAULTS",
    "GenerationFailed",
    "MAX_COVERAGE",
    "MapSpec",
    "ParseError",
    "PlannerParams",
    "Relocation",
    "Scenario",
    "ScenarioError",
    "ValidationError",
    "Violation",
    "estimate_coverage",
    "generate_map",
    "load_scenario",
    "parse_scenario",
    "save_scenario",
    "scenario_from_dict",
    "validate",
]
