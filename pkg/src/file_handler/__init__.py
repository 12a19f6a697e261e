"""
File handling for graphs, plans, scores, summaries and run manifests.

Provides one facade over the per-format handlers.
"""
import hashlib
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.ensemble.pairwise import PairwiseScores
from src.ensemble.summary import ScoreSummary
from src.models.graph import DualGraph, WeightKind
from src.models.plan import Plan
from src.similarity.score import SimilarityScore
from src.utils.exceptions import PlansimFileError

from .graph_json_handler import GraphJSONHandler, GraphSource
from .plan_csv_handler import PlanCSVHandler
from .run_json_handler import RunJSONHandler
from .schema import GraphFileSchema, ManifestTimings, NodeSchema, RunManifest
from .scores_csv_handler import ScoresCSVHandler

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def plan_file_name(index: int, count: int) -> str:
    """Zero-padded plan file name, e.g. plan_007.csv (at least 3 digits)."""
    width = max(3, len(str(max(count - 1, 0))))
    return f"plan_{index:0{width}d}.csv"


class FileHandler:
    """
    Facade for every file format the tool reads or writes.

    - Graph JSON (node-link structure, pydantic-validated)
    - Plan CSV (`precinct_id,district`)
    - Scores CSV (`i,j,kind,score` and `plan,kind,score`)
    - Summary and manifest JSON
    """

    def __init__(self) -> None:
        self.graph_handler = GraphJSONHandler()
        self.plan_handler = PlanCSVHandler()
        self.scores_handler = ScoresCSVHandler()
        self.run_handler = RunJSONHandler()

    @staticmethod
    def _prepare_output(file_path: PathLike) -> Path:
        path = Path(file_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise PlansimFileError(
                f"Cannot create output directory: {e}",
                file_path=str(path),
                operation="mkdir",
                original_exception=e,
            ) from e
        return path

    def load_graph(self, file_path: PathLike) -> DualGraph:
        return self.graph_handler.read_graph(Path(file_path))

    def parse_graph(self, source: GraphSource) -> DualGraph:
        return self.graph_handler.parse_graph(source)

    def save_graph(self, file_path: PathLike, g: DualGraph) -> None:
        self.graph_handler.write_graph(self._prepare_output(file_path), g)

    def load_plan(self, file_path: PathLike) -> Plan:
        return self.plan_handler.read_plan(Path(file_path))

    def save_plan(
        self, file_path: PathLike, plan: Plan, g: Optional[DualGraph] = None
    ) -> None:
        """Save a plan; rows follow graph order when a graph is given."""
        order: Optional[Iterable[str]] = None
        if g is not None:
            order = [pid for pid in g.ids if pid in plan.assignment]
            order += [pid for pid in plan.assignment if pid not in g]
        self.plan_handler.write_plan(self._prepare_output(file_path), plan, order)

    def list_plan_files(self, directory: PathLike) -> List[Path]:
        """Plan CSV files of a directory, sorted by file name."""
        path = Path(directory)
        if not path.is_dir():
            raise PlansimFileError(
                f"Plan directory not found: {path}", file_path=str(path), operation="read"
            )
        return sorted(path.glob("*.csv"), key=lambda p: p.name)

    def load_plan_directory(self, directory: PathLike) -> Tuple[List[Path], List[Plan]]:
        """
        Load every `*.csv` plan of a directory, sorted by file name.

        Raises:
            PlansimFileError: If the directory is missing or holds no plans
        """
        files = self.list_plan_files(directory)
        if not files:
            raise PlansimFileError(
                f"No plan files found in {directory}", file_path=str(directory), operation="read"
            )
        plans = [self.load_plan(path) for path in files]
        logger.info("Loaded %d plans from '%s'", len(plans), directory)
        return files, plans

    def save_plan_directory(
        self, directory: PathLike, plans: Sequence[Plan], g: Optional[DualGraph] = None
    ) -> List[str]:
        """Write plans as plan_000.csv, plan_001.csv, ...; returns the file names."""
        names = [plan_file_name(i, len(plans)) for i in range(len(plans))]
        root = Path(directory)
        for name, plan in zip(names, plans):
            self.save_plan(root / name, plan, g)
        return names

    def save_scores(self, file_path: PathLike, scores: Mapping[WeightKind, PairwiseScores]) -> None:
        self.scores_handler.write_pairwise(self._prepare_output(file_path), scores)

    def load_scores(self, file_path: PathLike) -> Dict[WeightKind, PairwiseScores]:
        return self.scores_handler.read_pairwise(Path(file_path))

    def save_reference_scores(self, file_path: PathLike, scores: Sequence[SimilarityScore]) -> None:
        self.scores_handler.write_reference(self._prepare_output(file_path), scores)

    def save_summary(self, file_path: PathLike, summaries: Mapping[WeightKind, ScoreSummary]) -> None:
        self.run_handler.write_summary(self._prepare_output(file_path), summaries)

    def save_manifest(self, file_path: PathLike, manifest: RunManifest) -> None:
        self.run_handler.write_manifest(self._prepare_output(file_path), manifest)

    def load_manifest(self, file_path: PathLike) -> RunManifest:
        return self.run_handler.read_manifest(Path(file_path))

    @staticmethod
    def file_digest(file_path: PathLike) -> str:
        """SHA-256 hex digest of a file's bytes."""
        digest = hashlib.sha256()
        try:
            with open(file_path, "rb") as f:
                for block in iter(lambda: f.read(1 << 16), b""):
                    digest.update(block)
        except OSError as e:
            raise PlansimFileError(
                f"Failed to read file for hashing: {e}",
                file_path=str(file_path),
                operation="read",
                original_exception=e,
            ) from e
        return digest.hexdigest()


__all__ = [
    "FileHandler",
    "GraphJSONHandler",
    "PlanCSVHandler",
    "ScoresCSVHandler",
    "RunJSONHandler",
    "GraphFileSchema",
    "NodeSchema",
    "RunManifest",
    "ManifestTimings",
    "plan_file_name",
]
