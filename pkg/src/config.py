"""
Run configuration assembled from command-line arguments.

`build_run_config` flattens an argparse namespace into a frozen `RunConfig`;
planner parameter overrides are applied to a scenario's parameters with
`RunConfig.apply_overrides`, which rejects values outside the planner's
invariants.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Tuple

from world import PlannerParams

COMMANDS = ("gen", "plan", "simulate", "bench", "render", "report")
ALGORITHMS = ("stig", "astar")
MODES = ("static", "partial", "unknown")

# flag destination -> PlannerParams field
_OVERRIDE_FLAGS = {
    "rsafe": "r_safe",
    "dvir": "d_vir",
    "alpha": "alpha_weight",
    "theta_max": "theta_max",
    "range": "sensor_range",
}


class ConfigError(ValueError):
    """Raised when command-line settings are inconsistent."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario_path: Optional[Path] = None
    algorithm: str = "stig"
    mode: str = "static"
    seed: int = 0
    out_path: Optional[Path] = None
    svg_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    trace_path: Optional[Path] = None
    workers: int = 1
    verbosity: int = 0
    smooth: bool = True
    overrides: Dict[str, float] = field(default_factory=dict)

    @property
    def log_level(self) -> int:
        return (logging.WARNING, logging.INFO, logging.DEBUG)[min(self.verbosity, 2)]

    def apply_overrides(self, params: PlannerParams) -> PlannerParams:
        if not self.overrides:
            return params
        updated = replace(params, **self.overrides)
        problems = updated.violations()
        if problems:
            raise ConfigError("invalid planner parameters: " + "; ".join(problems))
        return updated

    def check_inputs(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{self.algorithm}'")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode '{self.mode}'")
        if self.scenario_path is not None and not self.scenario_path.exists():
            raise ConfigError(f"scenario file not found: {self.scenario_path}")
        if self.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {self.workers}")


def _path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value else None


def _int(value: Optional[int], default: int) -> int:
    return default if value is None else int(value)


def _overrides(args: argparse.Namespace) -> Tuple[Tuple[str, float], ...]:
    found = []
    for flag, name in _OVERRIDE_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            found.append((name, float(value)))
    return tuple(found)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        ConfigError: when a referenced input file is missing or a setting is out of range.
    """
    config = RunConfig(
        command=args.command,
        scenario_path=_path(getattr(args, "scenario", None)),
        algorithm=getattr(args, "algo", None) or "stig",
        mode=getattr(args, "mode", None) or "static",
        seed=_int(getattr(args, "seed", None), 0),
        out_path=_path(getattr(args, "out", None)),
        svg_path=_path(getattr(args, "svg", None)),
        csv_path=_path(getattr(args, "csv", None)),
        trace_path=_path(getattr(args, "trace", None)),
        workers=_int(getattr(args, "workers", None), 1),
        verbosity=int(getattr(args, "verbose", 0) or 0),
        smooth=not getattr(args, "no_smooth", False),
        overrides=dict(_overrides(args)),
    )
    config.check_inputs()
    return config


__all__ = ["ALGORITHMS", "COMMANDS", "ConfigError", "MODES", "RunConfig", "build_run_config"]
