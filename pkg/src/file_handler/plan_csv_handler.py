"""
Plan CSV handler using pandas.

Format: header `precinct_id,district`, one row per precinct. District labels
may be integers or arbitrary strings; they are densified on load and written
back unchanged.
"""
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import pandas as pd

from src.models.plan import Plan
from src.utils.exceptions import PlansimFileError, PlanValidationError

logger = logging.getLogger(__name__)


class PlanCSVHandler:
    """Handler for plan CSV files."""

    COLUMNS = ["precinct_id", "district"]

    def read_plan(self, file_path: Path) -> Plan:
        """
        Read a plan CSV file.

        Raises:
            PlansimFileError: If the file is missing or unreadable
            PlanValidationError: If columns are missing, a precinct repeats,
                or a label is empty
        """
        if not file_path.exists():
            raise PlansimFileError(
                f"Plan file not found: {file_path}", file_path=str(file_path), operation="read"
            )

        try:
            df = pd.read_csv(
                file_path,
                encoding="utf-8",
                dtype=str,
                keep_default_na=False,
            )
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError, OSError) as e:
            logger.error("Failed to read plan file '%s': %s", file_path, e)
            raise PlansimFileError(
                f"Failed to read plan file: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e

        missing = [col for col in self.COLUMNS if col not in df.columns]
        if missing:
            logger.warning("Plan '%s' missing required columns: %s", file_path, missing)
            raise PlanValidationError(
                f"Plan CSV missing required columns: {missing}. Expected: {self.COLUMNS}",
                details={"file_path": str(file_path)},
            )

        labeled: Dict[str, str] = {}
        for idx, (precinct_id, label) in enumerate(zip(df["precinct_id"], df["district"])):
            precinct_id, label = precinct_id.strip(), label.strip()
            if not precinct_id or not label:
                raise PlanValidationError(
                    f"Empty precinct id or district in row {idx + 2}",
                    details={"file_path": str(file_path)},
                )
            if precinct_id in labeled:
                raise PlanValidationError(
                    f"Precinct '{precinct_id}' appears more than once (row {idx + 2})",
                    details={"file_path": str(file_path), "precinct_id": precinct_id},
                )
            labeled[precinct_id] = label

        plan = Plan.from_labels(labeled)
        logger.info(
            "Read plan '%s': %d precincts, %d districts", file_path, len(plan), plan.num_districts
        )
        return plan

    def write_plan(self, file_path: Path, plan: Plan, order: Optional[Iterable[str]] = None) -> None:
        """
        Write a plan with its external labels.

        Args:
            file_path: Path to save CSV file
            plan: Plan to write
            order: Precinct id order for the rows (default: assignment order)

        Raises:
            PlansimFileError: If the file cannot be written
        """
        ids: List[str] = list(order) if order is not None else list(plan.assignment)
        external = plan.external_assignment()
        df = pd.DataFrame(
            {"precinct_id": ids, "district": [external[pid] for pid in ids]},
            columns=self.COLUMNS,
        )

        try:
            df.to_csv(file_path, index=False, encoding="utf-8", lineterminator="\n")
        except OSError as e:
            logger.error("Failed to write plan file '%s': %s", file_path, e)
            raise PlansimFileError(
                f"Failed to write plan file: {e}",
                file_path=str(file_path),
                operation="write",
                original_exception=e,
            ) from e
        logger.info("Wrote plan with %d precincts to '%s'", len(ids), file_path)
