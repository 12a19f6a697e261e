"""Ensembles of seeded chains and their pairwise similarity distribution."""

from .pairwise import (
    PairScore,
    PairwiseScores,
    pairwise_similarities,
    pairwise_similarities_async,
    pairwise_similarity,
    pairwise_similarity_async,
    reference_similarity,
)
from .runner import (
    EnsembleConfig,
    EnsembleResult,
    WorkerPool,
    run_ensemble,
    run_ensemble_async,
    run_ensemble_detailed,
    run_ensemble_detailed_async,
)
from .summary import ScoreSummary, summarize

__all__ = [
    "EnsembleConfig",
    "EnsembleResult",
    "WorkerPool",
    "PairScore",
    "PairwiseScores",
    "ScoreSummary",
    "run_ensemble",
    "run_ensemble_async",
    "run_ensemble_detailed",
    "run_ensemble_detailed_async",
    "pairwise_similarity",
    "pairwise_similarity_async",
    "pairwise_similarities",
    "pairwise_similarities_async",
    "reference_similarity",
    "summarize",
]
