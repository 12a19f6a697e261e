"""District intersection matrices between two plans.

Entry (i, j) is the total weight (area or population) of the precincts that
plan 1 puts in district i and plan 2 puts in district j. The matrix is built
in a single pass over precincts by encoding each precinct's label pair as
i * k + j and summing weights with numpy.bincount.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from src.models.graph import DualGraph, WeightKind
from src.models.plan import Plan, require_valid_plan
from src.utils.exceptions import AssignmentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntersectionMatrix:
    """Shared weight between the districts of two plans.

    Attributes:
        weights: n x k matrix (n <= k), rows are plan-1 districts
        kind: Which precinct quantity was summed
        total: State total for that quantity (positive)
    """

    weights: np.ndarray
    kind: WeightKind
    total: float

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 2 or 0 in weights.shape:
            raise AssignmentError(
                f"Intersection matrix must be a nonempty 2-D array, got shape {weights.shape}"
            )
        n, k = weights.shape
        if n > k:
            raise AssignmentError(
                f"Intersection matrix has more rows than columns ({n} > {k}); "
                "orient the plan with fewer districts first",
                details={"rows": n, "columns": k},
            )
        if not self.total > 0:
            raise AssignmentError(f"Intersection total must be positive, got {self.total}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "kind", WeightKind.parse(self.kind))
        object.__setattr__(self, "total", float(self.total))

    @classmethod
    def from_weights(
        cls,
        weights: "np.ndarray | list",
        kind: "WeightKind | str" = WeightKind.AREA,
        total: Optional[float] = None,
    ) -> "IntersectionMatrix":
        """Wrap a raw matrix; total defaults to the entry sum (1.0 if that is zero)."""
        array = np.asarray(weights, dtype=np.float64)
        if total is None:
            entry_sum = float(np.nansum(array)) if array.size else 0.0
            total = entry_sum if entry_sum > 0 else 1.0
        return cls(weights=array, kind=WeightKind.parse(kind), total=total)

    @property
    def shape(self) -> tuple:
        return self.weights.shape

    def row_sums(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def column_sums(self) -> np.ndarray:
        return self.weights.sum(axis=0)


def intersection_from_labels(
    labels_1: np.ndarray,
    labels_2: np.ndarray,
    rows: int,
    columns: int,
    weights_by_kind: Dict[WeightKind, np.ndarray],
    totals: Dict[WeightKind, float],
) -> Dict[WeightKind, IntersectionMatrix]:
    """Intersection matrices for precomputed graph-order label vectors.

    The label-pair codes are computed once and reused for every kind.
    """
    codes = labels_1 * columns + labels_2
    result: Dict[WeightKind, IntersectionMatrix] = {}
    for kind, weights in weights_by_kind.items():
        summed = np.bincount(codes, weights=weights, minlength=rows * columns)
        result[kind] = IntersectionMatrix(
            weights=summed.reshape(rows, columns), kind=kind, total=totals[kind]
        )
    return result


def intersection_matrices(
    g: DualGraph,
    p1: Plan,
    p2: Plan,
    kinds: Iterable["WeightKind | str"] = (WeightKind.AREA, WeightKind.POPULATION),
    validate: bool = True,
) -> Dict[WeightKind, IntersectionMatrix]:
    """Intersection matrices of several weight kinds in one pass.

    Raises:
        AssignmentError: If p1 has more districts than p2
        PlanValidationError: If either plan is invalid on g
    """
    if p1.num_districts > p2.num_districts:
        raise AssignmentError(
            f"First plan has more districts than the second "
            f"({p1.num_districts} > {p2.num_districts}); swap the plans before calling"
        )
    if validate:
        require_valid_plan(g, p1)
        require_valid_plan(g, p2)

    kind_list = [WeightKind.parse(kind) for kind in kinds]
    for kind in kind_list:
        if not g.total(kind) > 0:
            raise AssignmentError(f"Graph total {kind.value} is zero; similarity is undefined")

    return intersection_from_labels(
        g.labels_array(p1.assignment),
        g.labels_array(p2.assignment),
        p1.num_districts,
        p2.num_districts,
        {kind: g.weights(kind).astype(np.float64) for kind in kind_list},
        {kind: g.total(kind) for kind in kind_list},
    )


def intersection_matrix(
    g: DualGraph,
    p1: Plan,
    p2: Plan,
    kind: "WeightKind | str",
    validate: bool = True,
) -> IntersectionMatrix:
    """Intersection matrix of plan 1 (rows) against plan 2 (columns).

    Row sums equal the district weights of p1, column sums those of p2.
    """
    kind = WeightKind.parse(kind)
    return intersection_matrices(g, p1, p2, (kind,), validate=validate)[kind]
