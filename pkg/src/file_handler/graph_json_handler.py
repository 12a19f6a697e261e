"""
Graph JSON handler.

Format: {"nodes": [{"id", "area", "population"}, ...], "edges": [[id, id], ...]}
"""
import json
import logging
from pathlib import Path
from typing import BinaryIO, TextIO, Union

from pydantic import ValidationError

from src.models.graph import DualGraph
from src.utils.exceptions import GraphValidationError, PlansimFileError

from .schema import GraphFileSchema

logger = logging.getLogger(__name__)

GraphSource = Union[bytes, str, BinaryIO, TextIO]


class GraphJSONHandler:
    """Handler for graph JSON files."""

    def parse_graph(self, source: GraphSource) -> DualGraph:
        """
        Parse a graph from bytes, text, or an open stream.

        Raises:
            GraphValidationError: If the document is malformed or the graph invalid
        """
        if hasattr(source, "read"):
            source = source.read()
        if isinstance(source, bytes):
            try:
                source = source.decode("utf-8")
            except UnicodeDecodeError as e:
                raise GraphValidationError(f"Graph file is not valid UTF-8: {e}") from e

        try:
            raw = json.loads(source)
        except json.JSONDecodeError as e:
            raise GraphValidationError(f"Invalid JSON format: {e}") from e

        try:
            schema = GraphFileSchema.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise GraphValidationError(
                f"Malformed graph file at '{location}': {first['msg']}",
                details={"errors": e.error_count()},
            ) from e

        return schema.to_graph()

    def read_graph(self, file_path: Path) -> DualGraph:
        """
        Read and validate a graph file.

        Raises:
            PlansimFileError: If the file cannot be read
            GraphValidationError: If the content is malformed or invalid
        """
        try:
            content = file_path.read_bytes()
        except OSError as e:
            logger.error("Failed to read graph file '%s': %s", file_path, e)
            raise PlansimFileError(
                f"Failed to read graph file: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e

        g = self.parse_graph(content)
        logger.info(
            "Loaded graph '%s': %d precincts, %d edges", file_path, len(g), len(g.edges)
        )
        return g

    def write_graph(self, file_path: Path, g: DualGraph, pretty: bool = True) -> None:
        """
        Write a graph in the standard node-link format.

        Raises:
            PlansimFileError: If the file cannot be written
        """
        document = GraphFileSchema.from_graph(g).model_dump(mode="json")
        try:
            with open(file_path, "w", encoding="utf-8", newline="\n") as f:
                if pretty:
                    json.dump(document, f, indent=2, ensure_ascii=False)
                else:
                    json.dump(document, f, ensure_ascii=False)
                f.write("\n")
        except OSError as e:
            logger.error("Failed to write graph file '%s': %s", file_path, e)
            raise PlansimFileError(
                f"Failed to write graph file: {e}",
                file_path=str(file_path),
                operation="write",
                original_exception=e,
            ) from e
        logger.info("Wrote graph with %d precincts to '%s'", len(g), file_path)
