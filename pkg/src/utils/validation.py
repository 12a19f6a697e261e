"""Shared validation utilities for plansim.

Consolidates the weight, seed and label checks used across the graph model,
run configuration and file handling modules.
"""

import math
from typing import Iterable, List

UINT64_MAX = 2**64 - 1


def validate_area(area: float, node_id: str) -> float:
    """Validate a precinct area.

    Args:
        area: Area value (square units, unit-agnostic)
        node_id: Precinct id, used in the error message

    Returns:
        The area as a float

    Raises:
        TypeError: If area is not a real number
        ValueError: If area is negative or not finite
    """
    if isinstance(area, bool) or not isinstance(area, (int, float)):
        raise TypeError(f"Area of precinct '{node_id}' must be a number, got {type(area)}")
    if not math.isfinite(area) or area < 0:
        raise ValueError(f"Area of precinct '{node_id}' must be finite and >= 0, got {area}")
    return float(area)


def validate_population(population: int, node_id: str) -> int:
    """Validate a precinct population count.

    Raises:
        TypeError: If population is not an integer
        ValueError: If population is negative
    """
    if isinstance(population, bool) or not isinstance(population, int):
        raise TypeError(
            f"Population of precinct '{node_id}' must be an integer, got {type(population)}"
        )
    if population < 0:
        raise ValueError(f"Population of precinct '{node_id}' must be >= 0, got {population}")
    return population


def validate_seed(seed: int) -> int:
    """Validate a 64-bit unsigned RNG seed.

    Raises:
        TypeError: If seed is not an integer
        ValueError: If seed is outside [0, 2**64 - 1]
    """
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise TypeError(f"Seed must be an integer, got {type(seed)}")
    if not 0 <= seed <= UINT64_MAX:
        raise ValueError(f"Seed must be between 0 and {UINT64_MAX}, got {seed}")
    return seed


def _is_int_label(label: str) -> bool:
    try:
        int(label)
    except ValueError:
        return False
    return True


def sort_district_labels(labels: Iterable[str]) -> List[str]:
    """Order external district labels for densification.

    Numeric order when every label parses as an integer, lexicographic order
    otherwise.
    """
    unique = sorted(set(labels))
    if unique and all(_is_int_label(label) for label in unique):
        return sorted(unique, key=lambda label: (int(label), label))
    return unique


def extend_labels(labels: List[str], count: int) -> List[str]:
    """Extend a label list to `count` entries with fresh, unused labels.

    Integer label sets continue from their maximum; other sets get the
    smallest unused non-negative integers as strings.
    """
    result = list(labels)
    used = set(result)
    if result and all(_is_int_label(label) for label in result):
        nxt = max(int(label) for label in result) + 1
    else:
        nxt = 0
    while len(result) < count:
        candidate = str(nxt)
        nxt += 1
        if candidate in used:
            continue
        result.append(candidate)
        used.add(candidate)
    return result
