"""
JSON handler for summary statistics and run manifests.
"""
import json
import logging
from pathlib import Path
from typing import Any, Mapping

from pydantic import ValidationError

from src.ensemble.summary import ScoreSummary
from src.models.graph import WeightKind
from src.utils.exceptions import PlansimConfigError, PlansimFileError

from .schema import RunManifest

logger = logging.getLogger(__name__)


class RunJSONHandler:
    """Handler for summary and manifest JSON files."""

    def _write_json(self, file_path: Path, document: Any, what: str) -> None:
        try:
            with open(file_path, "w", encoding="utf-8", newline="\n") as f:
                json.dump(document, f, indent=2, ensure_ascii=False)
                f.write("\n")
        except OSError as e:
            logger.error("Failed to write %s '%s': %s", what, file_path, e)
            raise PlansimFileError(
                f"Failed to write {what}: {e}",
                file_path=str(file_path),
                operation="write",
                original_exception=e,
            ) from e
        logger.info("Wrote %s to '%s'", what, file_path)

    def write_summary(self, file_path: Path, summaries: Mapping[WeightKind, ScoreSummary]) -> None:
        """
        Write a summary JSON.

        A single kind is written as one summary object; several kinds as an
        object mapping kind name to summary.
        """
        if len(summaries) == 1:
            document = next(iter(summaries.values())).to_dict()
        else:
            document = {
                kind.value: summaries[kind].to_dict() for kind in WeightKind if kind in summaries
            }
        self._write_json(file_path, document, "summary")

    def write_manifest(self, file_path: Path, manifest: RunManifest) -> None:
        self._write_json(file_path, manifest.model_dump(mode="json"), "manifest")

    def read_manifest(self, file_path: Path) -> RunManifest:
        """
        Read and validate a run manifest.

        Raises:
            PlansimFileError: If the file cannot be read or is not JSON
            PlansimConfigError: If the content does not describe a run
        """
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as e:
            raise PlansimFileError(
                f"Invalid JSON format: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e
        except OSError as e:
            raise PlansimFileError(
                f"Failed to read manifest: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e

        try:
            return RunManifest.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise PlansimConfigError(
                f"Invalid manifest at '{location}': {first['msg']}",
                details={"file_path": str(file_path)},
            ) from e
