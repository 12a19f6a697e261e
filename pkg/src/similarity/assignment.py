"""Maximum-weight rectangular assignment on intersection matrices.

solve_assignment finds an injective row -> column map maximizing the total
matched weight using scipy's linear_sum_assignment. Among equal-weight
optima it returns the lexicographically smallest mapping vector: rows are
fixed one at a time to the smallest column that still admits an optimal
completion. brute_force_assignment is the factorial oracle used in tests.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from src.config.settings import get_settings
from src.similarity.intersection import IntersectionMatrix
from src.utils.exceptions import AssignmentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Assignment:
    """Optimal matching of plan-1 districts to plan-2 districts.

    Attributes:
        mapping: mapping[i] is the plan-2 district matched to plan-1 district i
        matched_weight: Sum of weights[i, mapping[i]]
        num_columns: k, the number of plan-2 districts
    """

    mapping: Tuple[int, ...]
    matched_weight: float
    num_columns: int

    def __post_init__(self) -> None:
        mapping = tuple(int(j) for j in self.mapping)
        if len(set(mapping)) != len(mapping):
            raise AssignmentError(f"Assignment is not injective: {mapping}")
        if any(not 0 <= j < self.num_columns for j in mapping):
            raise AssignmentError(
                f"Assignment {mapping} references a column outside 0..{self.num_columns - 1}"
            )
        object.__setattr__(self, "mapping", mapping)

    @property
    def num_rows(self) -> int:
        return len(self.mapping)

    def unmatched_columns(self) -> List[int]:
        """Plan-2 districts no row is assigned to, ascending."""
        used = set(self.mapping)
        return [j for j in range(self.num_columns) if j not in used]

    def as_dict(self) -> dict:
        return {i: j for i, j in enumerate(self.mapping)}


def _checked_weights(mtx: IntersectionMatrix) -> np.ndarray:
    weights = mtx.weights
    if np.isnan(weights).any():
        row, col = np.argwhere(np.isnan(weights))[0]
        raise AssignmentError(
            "Intersection matrix contains NaN", details={"row": int(row), "column": int(col)}
        )
    if not np.isfinite(weights).all():
        row, col = np.argwhere(~np.isfinite(weights))[0]
        raise AssignmentError(
            "Intersection matrix contains an infinite entry",
            details={"row": int(row), "column": int(col)},
        )
    if (weights < 0).any():
        row, col = np.argwhere(weights < 0)[0]
        raise AssignmentError(
            "Intersection matrix contains a negative entry",
            details={"row": int(row), "column": int(col), "value": float(weights[row, col])},
        )
    return weights


def matched_weight(weights: np.ndarray, mapping: Sequence[int]) -> float:
    """Exactly rounded sum of weights[i, mapping[i]] over rows."""
    return math.fsum(float(weights[i, j]) for i, j in enumerate(mapping))


def _optimal_columns(weights: np.ndarray) -> List[int]:
    """Column per row of a maximum-weight assignment (rows <= columns)."""
    if weights.shape[0] == 0:
        return []
    rows, cols = linear_sum_assignment(weights, maximize=True)
    mapping = [0] * weights.shape[0]
    for r, c in zip(rows, cols):
        mapping[int(r)] = int(c)
    return mapping


def _lexicographic_optimum(
    weights: np.ndarray, mapping: List[int], best: float, tolerance: float
) -> List[int]:
    n, k = weights.shape
    fixed: List[int] = []
    for row in range(n):
        used = set(fixed)
        for col in range(mapping[row]):
            if col in used:
                continue
            rest_rows = list(range(row + 1, n))
            rest_cols = [c for c in range(k) if c not in used and c != col]
            rest = _optimal_columns(weights[np.ix_(rest_rows, rest_cols)]) if rest_rows else []
            candidate = fixed + [col] + [rest_cols[c] for c in rest]
            if matched_weight(weights, candidate) >= best - tolerance:
                mapping = candidate
                break
        fixed.append(mapping[row])
    return mapping


def solve_assignment(
    mtx: IntersectionMatrix,
    tie_break: bool = True,
    tie_tolerance: Optional[float] = None,
) -> Assignment:
    """Maximum-weight injective assignment of rows to columns.

    Args:
        mtx: Intersection matrix with n <= k
        tie_break: Return the lexicographically smallest optimal mapping.
            Similarity scoring only needs the weight and skips this.
        tie_tolerance: Relative tolerance for "equal weight" (settings default)

    Raises:
        AssignmentError: On NaN, infinite or negative entries
    """
    weights = _checked_weights(mtx)
    mapping = _optimal_columns(weights)
    best = matched_weight(weights, mapping)

    if tie_break:
        if tie_tolerance is None:
            tie_tolerance = get_settings().tie_tolerance
        mapping = _lexicographic_optimum(
            weights, mapping, best, tie_tolerance * max(1.0, abs(best))
        )

    return Assignment(
        mapping=tuple(mapping),
        matched_weight=matched_weight(weights, mapping),
        num_columns=weights.shape[1],
    )


def brute_force_assignment(
    mtx: IntersectionMatrix,
    max_columns: Optional[int] = None,
    tie_tolerance: Optional[float] = None,
) -> Assignment:
    """Exhaustive maximum over all injective row -> column maps.

    Permutations are visited in lexicographic order and a later one replaces
    the incumbent only when strictly heavier, so ties resolve to the
    lexicographically smallest mapping.

    Raises:
        AssignmentError: If k exceeds max_columns (settings default 9) or
            the matrix has NaN/negative entries
    """
    settings = get_settings()
    if max_columns is None:
        max_columns = settings.brute_force_max_columns
    if tie_tolerance is None:
        tie_tolerance = settings.tie_tolerance

    weights = _checked_weights(mtx)
    n, k = weights.shape
    if k > max_columns:
        raise AssignmentError(
            f"Brute-force assignment supports at most {max_columns} columns, got {k}"
        )

    best_mapping: Optional[Tuple[int, ...]] = None
    best_weight = -math.inf
    for mapping in itertools.permutations(range(k), n):
        total = matched_weight(weights, mapping)
        if best_mapping is None or total > best_weight + tie_tolerance * max(1.0, abs(best_weight)):
            best_mapping, best_weight = mapping, total

    assert best_mapping is not None
    return Assignment(mapping=best_mapping, matched_weight=best_weight, num_columns=k)
