"""Similarity score and relabeling between districting plans.

The score is the largest fraction of the state (by area or population) that
can keep its district number between two plans, over all renumberings.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List

from src.models.graph import DualGraph, WeightKind
from src.models.plan import Plan
from src.similarity.assignment import Assignment, solve_assignment
from src.similarity.intersection import IntersectionMatrix, intersection_matrices
from src.utils.exceptions import AssignmentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimilarityScore:
    """Normalized matched weight between two plans.

    Attributes:
        value: matched_weight / total, in [0, 1]
        kind: area or population
        matched_weight: Weight kept in the same district under the best matching
        total: State total for kind
    """

    value: float
    kind: WeightKind
    matched_weight: float
    total: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"Similarity value must be within [0, 1], got {self.value}")

    @property
    def displaced_weight(self) -> float:
        """Weight that changes district under the best matching."""
        return max(0.0, self.total - self.matched_weight)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "matched_weight": self.matched_weight,
            "total": self.total,
            "displaced_weight": self.displaced_weight,
        }


def score_matrix(mtx: IntersectionMatrix) -> SimilarityScore:
    """Similarity score of an intersection matrix."""
    assignment = solve_assignment(mtx, tie_break=False)
    value = min(1.0, max(0.0, assignment.matched_weight / mtx.total))
    return SimilarityScore(
        value=value,
        kind=mtx.kind,
        matched_weight=assignment.matched_weight,
        total=mtx.total,
    )


def similarity_scores(
    g: DualGraph,
    p1: Plan,
    p2: Plan,
    kinds: Iterable["WeightKind | str"] = (WeightKind.AREA,),
    validate: bool = True,
) -> Dict[WeightKind, SimilarityScore]:
    """Similarity scores of several kinds from one shared intersection pass.

    The plan with fewer districts is put on the rows, so the result is
    symmetric in (p1, p2).
    """
    if p1.num_districts > p2.num_districts:
        p1, p2 = p2, p1
    matrices = intersection_matrices(g, p1, p2, kinds, validate=validate)
    return {kind: score_matrix(mtx) for kind, mtx in matrices.items()}


def similarity_score(
    g: DualGraph,
    p1: Plan,
    p2: Plan,
    kind: "WeightKind | str" = WeightKind.AREA,
    validate: bool = True,
) -> SimilarityScore:
    """Relabeling-invariant similarity between two plans on the same graph.

    Raises:
        PlanValidationError: If either plan is invalid on g
        AssignmentError: If the graph total for kind is zero
    """
    kind = WeightKind.parse(kind)
    return similarity_scores(g, p1, p2, (kind,), validate=validate)[kind]


class FallbackPolicy(Enum):
    """How relabel_plan numbers plan-2 districts no plan-1 district matched."""

    ASCENDING = "ascending"
    STRICT = "strict"


def relabel_plan(
    p2: Plan,
    a: Assignment,
    fallback: "FallbackPolicy | str" = FallbackPolicy.ASCENDING,
) -> Plan:
    """Renumber p2 so that its district mapping[i] becomes district i.

    Unmatched p2 districts (k > n) receive indices n, n+1, ... in ascending
    order of their old index under the ASCENDING policy; STRICT refuses them.
    Precinct membership is unchanged.

    Raises:
        AssignmentError: If the assignment's column count differs from p2's
            district count, or STRICT finds unmatched districts
    """
    fallback = FallbackPolicy(fallback) if isinstance(fallback, str) else fallback
    if a.num_columns != p2.num_districts:
        raise AssignmentError(
            f"Assignment has {a.num_columns} columns but the plan has "
            f"{p2.num_districts} districts"
        )

    unmatched = a.unmatched_columns()
    if unmatched and fallback is FallbackPolicy.STRICT:
        raise AssignmentError(
            f"{len(unmatched)} district(s) have no match under the strict relabel policy",
            details={"unmatched": unmatched},
        )

    new_index: List[int] = [0] * p2.num_districts
    for i, j in enumerate(a.mapping):
        new_index[j] = i
    for offset, j in enumerate(unmatched):
        new_index[j] = a.num_rows + offset

    logger.debug("Relabeling plan with %s", new_index)
    return p2.renumbered(new_index)
