"""Seeded benchmark runs over generated map families."""

from .pipeline import (
    ALGOS,
    DYNAMIC_ALGOS,
    STATIC_ALGOS,
    BenchCase,
    make_cases,
    plan_scenario,
    run_bench,
    run_case,
)

__all__ = [
    "ALGOS",
    "BenchCase",
    "DYNAMIC_ALGOS",
    "STATIC_ALGOS",
    "make_cases",
    "plan_scenario",
    "run_bench",
    "run_case",
]
