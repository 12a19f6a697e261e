"""All-pairs similarity over an ensemble of plans."""

import asyncio
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.ensemble.runner import ProgressCallback, WorkerPool
from src.models.graph import DualGraph, WeightKind
from src.models.plan import Plan, require_valid_plan
from src.similarity.intersection import intersection_from_labels
from src.similarity.score import SimilarityScore, score_matrix, similarity_scores

logger = logging.getLogger(__name__)


class PairScore(NamedTuple):
    """Score of plans i < j."""

    i: int
    j: int
    value: float


@dataclass(frozen=True)
class PairwiseScores:
    """Similarity of every unordered plan pair, sorted by (i, j).

    Attributes:
        scores: One entry per pair i < j
        kind: area or population
    """

    scores: List[PairScore]
    kind: WeightKind
    num_plans: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for entry in self.scores:
            if not 0.0 <= entry.value <= 1.0:
                raise ValueError(f"Pair ({entry.i}, {entry.j}) score {entry.value} outside [0, 1]")
        if self.num_plans is not None:
            expected = self.num_plans * (self.num_plans - 1) // 2
            if len(self.scores) != expected:
                raise ValueError(
                    f"{self.num_plans} plans need {expected} pair scores, got {len(self.scores)}"
                )

    def __len__(self) -> int:
        return len(self.scores)

    def values(self) -> np.ndarray:
        return np.array([entry.value for entry in self.scores], dtype=np.float64)


def _pair_chunk_worker(
    labels: List[np.ndarray],
    districts: List[int],
    weights_by_kind: Dict[WeightKind, np.ndarray],
    totals: Dict[WeightKind, float],
    pairs: List[Tuple[int, int]],
) -> List[Tuple[int, int, Dict[WeightKind, float]]]:
    """Score a chunk of pairs from precomputed label vectors (picklable)."""
    results = []
    for i, j in pairs:
        a, b = (i, j) if districts[i] <= districts[j] else (j, i)
        matrices = intersection_from_labels(
            labels[a], labels[b], districts[a], districts[b], weights_by_kind, totals
        )
        results.append((i, j, {kind: score_matrix(mtx).value for kind, mtx in matrices.items()}))
    return results


def _chunks(pairs: List[Tuple[int, int]], count: int) -> List[List[Tuple[int, int]]]:
    size = max(1, -(-len(pairs) // count))
    return [pairs[start : start + size] for start in range(0, len(pairs), size)]


async def pairwise_similarities_async(
    g: DualGraph,
    plans: Sequence[Plan],
    kinds: Iterable["WeightKind | str"] = (WeightKind.AREA,),
    parallelism: int = 1,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> Dict[WeightKind, PairwiseScores]:
    """Pairwise scores of several kinds, sharing one intersection pass per pair.

    Raises:
        PlanValidationError: If any plan is invalid on g
    """
    kind_list = list(dict.fromkeys(WeightKind.parse(kind) for kind in kinds))
    for plan in plans:
        require_valid_plan(g, plan)

    labels = [g.labels_array(plan.assignment) for plan in plans]
    districts = [plan.num_districts for plan in plans]
    weights_by_kind = {kind: g.weights(kind).astype(np.float64) for kind in kind_list}
    totals = {kind: g.total(kind) for kind in kind_list}

    pairs = [(i, j) for i in range(len(plans)) for j in range(i + 1, len(plans))]
    chunks = _chunks(pairs, parallelism * 4) if pairs else []
    logger.info("Scoring %d plan pairs in %d chunk(s)", len(pairs), len(chunks))

    pool = WorkerPool(parallelism, executor_kind)
    items = [(labels, districts, weights_by_kind, totals, chunk) for chunk in chunks]
    chunk_results = await pool.map(_pair_chunk_worker, items, progress_callback)

    collected: Dict[WeightKind, List[PairScore]] = {kind: [] for kind in kind_list}
    for chunk in chunk_results:
        for i, j, values in chunk:
            for kind in kind_list:
                collected[kind].append(PairScore(i, j, values[kind]))

    return {
        kind: PairwiseScores(
            scores=sorted(entries, key=lambda e: (e.i, e.j)), kind=kind, num_plans=len(plans)
        )
        for kind, entries in collected.items()
    }


def pairwise_similarities(
    g: DualGraph,
    plans: Sequence[Plan],
    kinds: Iterable["WeightKind | str"] = (WeightKind.AREA,),
    parallelism: int = 1,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> Dict[WeightKind, PairwiseScores]:
    return asyncio.run(
        pairwise_similarities_async(
            g, plans, kinds, parallelism, progress_callback, executor_kind
        )
    )


def pairwise_similarity(
    g: DualGraph,
    plans: Sequence[Plan],
    kind: "WeightKind | str" = WeightKind.AREA,
    parallelism: int = 1,
) -> PairwiseScores:
    """Similarity score of every unordered pair of plans, sorted by (i, j)."""
    kind = WeightKind.parse(kind)
    return pairwise_similarities(g, plans, (kind,), parallelism)[kind]


def reference_similarity(
    g: DualGraph,
    reference: Plan,
    plans: Sequence[Plan],
    kind: "WeightKind | str" = WeightKind.AREA,
) -> List[SimilarityScore]:
    """Score an existing plan against every plan of an ensemble."""
    kind = WeightKind.parse(kind)
    require_valid_plan(g, reference)
    return [similarity_scores(g, reference, plan, (kind,))[kind] for plan in plans]


async def pairwise_similarity_async(
    g: DualGraph,
    plans: Sequence[Plan],
    kind: "WeightKind | str" = WeightKind.AREA,
    parallelism: int = 1,
    progress_callback: Optional[ProgressCallback] = None,
) -> PairwiseScores:
    kind = WeightKind.parse(kind)
    scores = await pairwise_similarities_async(g, plans, (kind,), parallelism, progress_callback)
    return scores[kind]
