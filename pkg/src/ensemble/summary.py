"""Summary statistics of pairwise similarity scores."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from src.config.settings import get_settings
from src.ensemble.pairwise import PairwiseScores
from src.models.graph import WeightKind
from src.utils.exceptions import SummaryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoreSummary:
    """Distribution summary of a set of scores.

    Histogram bins are uniform over [0, 1], right-open except the last.
    """

    kind: Optional[WeightKind]
    count: int
    mean: float
    sd: float
    min: float
    max: float
    bin_edges: List[float]
    counts: List[int]

    @property
    def bins(self) -> int:
        return len(self.counts)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value if self.kind is not None else None,
            "count": self.count,
            "mean": self.mean,
            "sd": self.sd,
            "min": self.min,
            "max": self.max,
            "bins": self.bins,
            "bin_edges": self.bin_edges,
            "counts": self.counts,
        }


def summarize(
    s: Union[PairwiseScores, Sequence[float]],
    bins: Optional[int] = None,
    kind: Optional[WeightKind] = None,
) -> ScoreSummary:
    """Mean, population standard deviation, range and histogram of scores.

    Raises:
        SummaryError: If there are no scores or bins is not positive
    """
    if isinstance(s, PairwiseScores):
        values = s.values()
        kind = s.kind
    else:
        values = np.asarray(list(s), dtype=np.float64)
    if values.size == 0:
        raise SummaryError("Cannot summarize an empty score list")

    if bins is None:
        bins = get_settings().histogram_bins
    if bins < 1:
        raise SummaryError(f"Bin count must be positive, got {bins}")

    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(np.clip(values, 0.0, 1.0), bins=edges)

    mean = float(np.mean(values))
    low, high = float(np.min(values)), float(np.max(values))
    summary = ScoreSummary(
        kind=kind,
        count=int(values.size),
        mean=min(max(mean, low), high),
        sd=float(np.std(values)),
        min=low,
        max=high,
        bin_edges=[float(e) for e in edges],
        counts=[int(c) for c in counts],
    )
    logger.debug("Summarized %d scores: mean %.6f sd %.6f", summary.count, summary.mean, summary.sd)
    return summary
