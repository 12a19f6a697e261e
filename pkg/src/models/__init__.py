"""Data models for plansim."""

from .graph import DualGraph, Precinct, WeightKind
from .plan import (
    Plan,
    PlanViolation,
    ViolationKind,
    district_weights,
    population_deviation,
    require_valid_plan,
    validate_plan,
)

__all__ = [
    "DualGraph",
    "Precinct",
    "WeightKind",
    "Plan",
    "PlanViolation",
    "ViolationKind",
    "validate_plan",
    "require_valid_plan",
    "district_weights",
    "population_deviation",
]
