"""Utility modules for plansim."""

from .exceptions import (
    AssignmentError,
    GenerationError,
    GraphValidationError,
    PlansimConfigError,
    PlansimException,
    PlansimFileError,
    PlanValidationError,
    SummaryError,
    SynthError,
    UsageError,
)

__all__ = [
    "PlansimException",
    "GraphValidationError",
    "PlanValidationError",
    "AssignmentError",
    "GenerationError",
    "SummaryError",
    "SynthError",
    "PlansimConfigError",
    "PlansimFileError",
    "UsageError",
]
