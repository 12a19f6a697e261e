"""Plan similarity: intersection matrices, optimal matching, scores, relabeling."""

from .assignment import Assignment, brute_force_assignment, matched_weight, solve_assignment
from .intersection import (
    IntersectionMatrix,
    intersection_from_labels,
    intersection_matrices,
    intersection_matrix,
)
from .score import (
    FallbackPolicy,
    SimilarityScore,
    relabel_plan,
    score_matrix,
    similarity_score,
    similarity_scores,
)

__all__ = [
    "Assignment",
    "IntersectionMatrix",
    "SimilarityScore",
    "FallbackPolicy",
    "intersection_matrix",
    "intersection_matrices",
    "intersection_from_labels",
    "solve_assignment",
    "brute_force_assignment",
    "matched_weight",
    "score_matrix",
    "similarity_score",
    "similarity_scores",
    "relabel_plan",
]
