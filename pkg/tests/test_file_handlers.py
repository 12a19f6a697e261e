"""Tests for graph, plan, score, summary and manifest file round-trips.

All file I/O is performed inside pytest's `tmp_path` fixture so tests are
completely self-contained and leave no artifacts on the filesystem.

Coverage targets:
- GraphJSONHandler: parse from bytes/text/streams, malformed documents
- PlanCSVHandler: label preservation, row order, malformed files
- ScoresCSVHandler: row order, full precision, reading back by kind
- RunJSONHandler: summary layout, manifest validation
- FileHandler: plan directories and digests
"""

import io
import json

import pytest

from src.ensemble import EnsembleConfig, PairScore, PairwiseScores, summarize
from src.file_handler import FileHandler, RunManifest, plan_file_name
from src.file_handler.schema import ManifestTimings
from src.models.graph import WeightKind
from src.models.plan import Plan
from src.similarity import similarity_score
from src.utils.exceptions import (
    GraphValidationError,
    PlansimConfigError,
    PlansimFileError,
    PlanValidationError,
)

from tests.conftest import plan_of

GRAPH_DOC = {
    "nodes": [
        {"id": "a", "area": 1.5, "population": 10},
        {"id": "b", "area": 2.0, "population": 20, "county": "X"},
        {"id": "c", "area": 0.5, "population": 5},
    ],
    "edges": [["a", "b"], ["b", "c"]],
}


@pytest.fixture()
def handler() -> FileHandler:
    return FileHandler()


def make_manifest(**overrides) -> RunManifest:
    values = dict(
        tool_version="1.0.0",
        created_at="2026-01-01T00:00:00+00:00",
        graph_path="state.json",
        graph_sha256="0" * 64,
        config=EnsembleConfig(num_chains=2, districts=2, base_seed=3, steps_per_chain=4),
        chain_seeds=[11, 12],
        plan_files=["plan_000.csv", "plan_001.csv"],
        timings=ManifestTimings(total_seconds=1.25, chains_seconds=[0.5, 0.75]),
    )
    values.update(overrides)
    return RunManifest(**values)


# ---------------------------------------------------------------------------
# Graph JSON
# ---------------------------------------------------------------------------


class TestGraphJSON:
    """Graph parsing and writing."""

    def test_parse_text(self, handler):
        g = handler.parse_graph(json.dumps(GRAPH_DOC))
        assert g.ids == ["a", "b", "c"]
        assert g.total_area == 4.0
        assert g.total_population == 35

    def test_parse_bytes_and_streams(self, handler):
        text = json.dumps(GRAPH_DOC)
        for source in (text.encode("utf-8"), io.StringIO(text), io.BytesIO(text.encode("utf-8"))):
            assert len(handler.parse_graph(source)) == 3

    def test_integer_ids_become_strings(self, handler):
        doc = {
            "nodes": [{"id": 1, "area": 1, "population": 1}, {"id": 2, "area": 1, "population": 1}],
            "edges": [[1, 2]],
        }
        assert handler.parse_graph(json.dumps(doc)).ids == ["1", "2"]

    def test_round_trip(self, handler, tmp_path, grid2):
        path = tmp_path / "nested" / "grid.json"
        handler.save_graph(path, grid2)
        loaded = handler.load_graph(path)
        assert loaded.ids == grid2.ids
        assert loaded.edges == grid2.edges
        assert path.read_text(encoding="utf-8").endswith("}\n")

    def test_invalid_json(self, handler):
        with pytest.raises(GraphValidationError, match="Invalid JSON"):
            handler.parse_graph("{not json")

    def test_invalid_utf8(self, handler):
        with pytest.raises(GraphValidationError):
            handler.parse_graph(b"\xff\xfe{}")

    def test_missing_nodes(self, handler):
        with pytest.raises(GraphValidationError, match="nodes"):
            handler.parse_graph(json.dumps({"edges": []}))

    def test_boolean_population(self, handler):
        doc = {"nodes": [{"id": "a", "area": 1.0, "population": True}], "edges": []}
        with pytest.raises(GraphValidationError):
            handler.parse_graph(json.dumps(doc))

    def test_negative_area_names_node(self, handler):
        doc = {"nodes": [{"id": "bad", "area": -1.0, "population": 1}], "edges": []}
        with pytest.raises(GraphValidationError) as exc_info:
            handler.parse_graph(json.dumps(doc))
        assert exc_info.value.node_id == "bad"

    def test_dangling_edge(self, handler):
        doc = dict(GRAPH_DOC, edges=[["a", "b"], ["b", "zz"]])
        with pytest.raises(GraphValidationError, match="zz"):
            handler.parse_graph(json.dumps(doc))

    def test_missing_file(self, handler, tmp_path):
        with pytest.raises(PlansimFileError):
            handler.load_graph(tmp_path / "absent.json")


# ---------------------------------------------------------------------------
# Plan CSV
# ---------------------------------------------------------------------------


class TestPlanCSV:
    """Plan files keep external labels and precinct ids."""

    def test_round_trip_preserves_labels(self, handler, tmp_path):
        plan = Plan.from_labels({"a": "north", "b": "south", "c": "north"})
        path = tmp_path / "plan.csv"
        handler.save_plan(path, plan)
        loaded = handler.load_plan(path)
        assert loaded == plan
        assert loaded.external_assignment() == {"a": "north", "b": "south", "c": "north"}

    def test_rows_follow_graph_order(self, handler, tmp_path, grid2):
        plan = Plan(
            assignment={"r01c01": 1, "r00c00": 0, "r01c00": 1, "r00c01": 0}, num_districts=2
        )
        path = tmp_path / "plan.csv"
        handler.save_plan(path, plan, grid2)
        assert path.read_text(encoding="utf-8").splitlines() == [
            "precinct_id,district",
            "r00c00,0",
            "r00c01,0",
            "r01c00,1",
            "r01c01,1",
        ]

    def test_leading_zeros_survive(self, handler, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("precinct_id,district\n007,01\n008,02\n", encoding="utf-8")
        plan = handler.load_plan(path)
        assert set(plan.assignment) == {"007", "008"}
        assert plan.labels == ("01", "02")

    def test_missing_column(self, handler, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("precinct_id,zone\na,1\n", encoding="utf-8")
        with pytest.raises(PlanValidationError, match="district"):
            handler.load_plan(path)

    def test_duplicate_precinct(self, handler, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("precinct_id,district\na,1\na,2\n", encoding="utf-8")
        with pytest.raises(PlanValidationError, match="more than once"):
            handler.load_plan(path)

    def test_empty_label(self, handler, tmp_path):
        path = tmp_path / "plan.csv"
        path.write_text("precinct_id,district\na,\n", encoding="utf-8")
        with pytest.raises(PlanValidationError):
            handler.load_plan(path)

    def test_missing_file(self, handler, tmp_path):
        with pytest.raises(PlansimFileError):
            handler.load_plan(tmp_path / "absent.csv")

    def test_plan_directory(self, handler, tmp_path, grid2, horizontal, vertical):
        names = handler.save_plan_directory(tmp_path / "plans", [horizontal, vertical], grid2)
        assert names == ["plan_000.csv", "plan_001.csv"]
        files, plans = handler.load_plan_directory(tmp_path / "plans")
        assert [f.name for f in files] == names
        assert plans == [horizontal, vertical]

    def test_empty_plan_directory(self, handler, tmp_path):
        with pytest.raises(PlansimFileError):
            handler.load_plan_directory(tmp_path)

    @pytest.mark.parametrize(
        "index,count,expected",
        [(0, 1, "plan_000.csv"), (7, 50, "plan_007.csv"), (42, 1001, "plan_0042.csv")],
    )
    def test_plan_file_name(self, index, count, expected):
        assert plan_file_name(index, count) == expected


# ---------------------------------------------------------------------------
# Scores CSV
# ---------------------------------------------------------------------------


class TestScoresCSV:
    def _scores(self):
        area = PairwiseScores(
            [PairScore(0, 1, 0.1), PairScore(0, 2, 1.0), PairScore(1, 2, 2 / 3)],
            WeightKind.AREA,
            num_plans=3,
        )
        population = PairwiseScores(
            [PairScore(0, 1, 0.2), PairScore(0, 2, 1.0), PairScore(1, 2, 0.5)],
            WeightKind.POPULATION,
            num_plans=3,
        )
        return {WeightKind.POPULATION: population, WeightKind.AREA: area}

    def test_rows_sorted_by_pair_then_kind(self, handler, tmp_path):
        path = tmp_path / "scores.csv"
        handler.save_scores(path, self._scores())
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "i,j,kind,score"
        assert lines[1:4] == ["0,1,area,0.1", "0,1,population,0.2", "0,2,area,1.0"]
        assert len(lines) == 7

    def test_full_precision_round_trip(self, handler, tmp_path):
        path = tmp_path / "scores.csv"
        scores = self._scores()
        handler.save_scores(path, scores)
        loaded = handler.load_scores(path)
        assert loaded[WeightKind.AREA].scores == scores[WeightKind.AREA].scores
        assert loaded[WeightKind.AREA].scores[2].value == 2 / 3

    def test_header_only_file_has_no_scores(self, handler, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("i,j,kind,score\n", encoding="utf-8")
        assert handler.load_scores(path) == {}

    def test_missing_columns(self, handler, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("i,j,score\n0,1,0.5\n", encoding="utf-8")
        with pytest.raises(PlansimFileError, match="missing required columns"):
            handler.load_scores(path)

    def test_unknown_kind(self, handler, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("i,j,kind,score\n0,1,votes,0.5\n", encoding="utf-8")
        with pytest.raises(PlansimFileError, match="row 2"):
            handler.load_scores(path)

    def test_reference_scores(self, handler, tmp_path, grid2, horizontal, vertical):
        path = tmp_path / "compare.csv"
        scores = [similarity_score(grid2, horizontal, p) for p in (horizontal, vertical)]
        handler.save_reference_scores(path, scores)
        assert path.read_text(encoding="utf-8").splitlines() == [
            "plan,kind,score",
            "0,area,1.0",
            "1,area,0.5",
        ]


# ---------------------------------------------------------------------------
# Summary and manifest JSON
# ---------------------------------------------------------------------------


class TestRunJSON:
    def test_single_kind_summary_is_flat(self, handler, tmp_path):
        path = tmp_path / "summary.json"
        handler.save_summary(path, {WeightKind.AREA: summarize([0.4, 0.6], bins=2, kind=WeightKind.AREA)})
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["kind"] == "area"
        assert document["counts"] == [1, 1]
        assert document["mean"] == pytest.approx(0.5)

    def test_two_kind_summary_is_keyed(self, handler, tmp_path):
        path = tmp_path / "summary.json"
        summaries = {
            WeightKind.POPULATION: summarize([0.5], kind=WeightKind.POPULATION),
            WeightKind.AREA: summarize([0.5], kind=WeightKind.AREA),
        }
        handler.save_summary(path, summaries)
        document = json.loads(path.read_text(encoding="utf-8"))
        assert list(document) == ["area", "population"]

    def test_manifest_round_trip(self, handler, tmp_path):
        path = tmp_path / "out" / "manifest.json"
        manifest = make_manifest()
        handler.save_manifest(path, manifest)
        loaded = handler.load_manifest(path)
        assert loaded == manifest
        assert loaded.config.chain_seeds() == manifest.config.chain_seeds()

    def test_manifest_rejects_repeated_seeds(self):
        with pytest.raises(ValueError):
            make_manifest(chain_seeds=[5, 5])

    def test_manifest_bad_content(self, handler, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"tool": "plansim"}), encoding="utf-8")
        with pytest.raises(PlansimConfigError):
            handler.load_manifest(path)

    def test_manifest_bad_json(self, handler, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(PlansimFileError):
            handler.load_manifest(path)


class TestFileDigest:
    def test_sha256_of_bytes(self, tmp_path):
        path = tmp_path / "blob"
        path.write_bytes(b"abc")
        assert FileHandler.file_digest(path) == (
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        )

    def test_missing_file(self, tmp_path):
        with pytest.raises(PlansimFileError):
            FileHandler.file_digest(tmp_path / "absent")


def test_plan_of_round_trip_through_directory(handler, tmp_path, grid2):
    plans = [plan_of([["r00c00"], ["r00c01"], ["r01c00", "r01c01"]])]
    handler.save_plan_directory(tmp_path, plans, grid2)
    assert handler.load_plan(tmp_path / "plan_000.csv") == plans[0]
