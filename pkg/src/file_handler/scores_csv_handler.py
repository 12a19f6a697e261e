"""
Scores CSV handler using pandas.

Pairwise files have header `i,j,kind,score`, rows sorted by (i, j) and then
kind. Reference comparison files have header `plan,kind,score`. Scores are
written at full precision.
"""
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Sequence

import pandas as pd

from src.ensemble.pairwise import PairScore, PairwiseScores
from src.models.graph import WeightKind
from src.similarity.score import SimilarityScore
from src.utils.exceptions import PlansimFileError

logger = logging.getLogger(__name__)


class ScoresCSVHandler:
    """Handler for pairwise and reference score CSV files."""

    PAIRWISE_COLUMNS = ["i", "j", "kind", "score"]
    REFERENCE_COLUMNS = ["plan", "kind", "score"]

    def _write(self, file_path: Path, df: pd.DataFrame, what: str) -> None:
        try:
            df.to_csv(file_path, index=False, encoding="utf-8", lineterminator="\n")
        except OSError as e:
            logger.error("Failed to write %s file '%s': %s", what, file_path, e)
            raise PlansimFileError(
                f"Failed to write {what} file: {e}",
                file_path=str(file_path),
                operation="write",
                original_exception=e,
            ) from e
        logger.info("Wrote %d %s rows to '%s'", len(df), what, file_path)

    def write_pairwise(self, file_path: Path, scores: Mapping[WeightKind, PairwiseScores]) -> None:
        """Write one or more kinds of pairwise scores to a single file."""
        kinds = [kind for kind in WeightKind if kind in scores]
        rows = []
        if kinds:
            for position in range(len(scores[kinds[0]].scores)):
                for kind in kinds:
                    entry = scores[kind].scores[position]
                    rows.append((entry.i, entry.j, kind.value, repr(float(entry.value))))
        df = pd.DataFrame(rows, columns=self.PAIRWISE_COLUMNS)
        self._write(file_path, df, "scores")

    def read_pairwise(self, file_path: Path) -> Dict[WeightKind, PairwiseScores]:
        """
        Read a pairwise scores file, grouped by kind.

        Raises:
            PlansimFileError: If the file is missing or malformed. A header-only
                file reads as no scores.
        """
        if not file_path.exists():
            raise PlansimFileError(
                f"Scores file not found: {file_path}", file_path=str(file_path), operation="read"
            )
        try:
            df = pd.read_csv(file_path, encoding="utf-8", dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError, OSError) as e:
            raise PlansimFileError(
                f"Failed to read scores file: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e

        missing = set(self.PAIRWISE_COLUMNS) - set(df.columns)
        if missing:
            raise PlansimFileError(
                f"Scores CSV missing required columns: {sorted(missing)}",
                file_path=str(file_path),
                operation="read",
            )
        if df.empty:
            logger.warning("Scores file '%s' has no data rows", file_path)
            return {}

        grouped: Dict[WeightKind, List[PairScore]] = {}
        for idx, row in enumerate(df.itertuples(index=False)):
            try:
                kind = WeightKind.parse(row.kind)
                entry = PairScore(int(row.i), int(row.j), float(row.score))
            except ValueError as e:
                raise PlansimFileError(
                    f"Invalid data in row {idx + 2}: {e}",
                    file_path=str(file_path),
                    operation="read",
                    original_exception=e,
                ) from e
            grouped.setdefault(kind, []).append(entry)

        try:
            result = {
                kind: PairwiseScores(scores=entries, kind=kind)
                for kind, entries in grouped.items()
            }
        except ValueError as e:
            raise PlansimFileError(
                str(e), file_path=str(file_path), operation="read", original_exception=e
            ) from e
        logger.info("Read %d score rows from '%s'", len(df), file_path)
        return result

    def write_reference(self, file_path: Path, scores: Sequence[SimilarityScore]) -> None:
        """Write reference-vs-ensemble scores; `plan` is the ensemble index."""
        rows = [(index, s.kind.value, repr(float(s.value))) for index, s in enumerate(scores)]
        df = pd.DataFrame(rows, columns=self.REFERENCE_COLUMNS)
        self._write(file_path, df, "comparison")
