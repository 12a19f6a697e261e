"""Tests for the ensemble runner, pairwise scoring and score summaries.

Coverage targets:
- EnsembleConfig defaults and seed derivation
- run_ensemble determinism across parallelism levels and executors
- WorkerPool ordering and progress reporting
- pairwise_similarity counts, ordering and agreement with direct scores
- summarize statistics and histogram boundaries
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.ensemble import (
    EnsembleConfig,
    PairScore,
    PairwiseScores,
    WorkerPool,
    pairwise_similarities,
    pairwise_similarity,
    pairwise_similarity_async,
    reference_similarity,
    run_ensemble,
    run_ensemble_async,
    run_ensemble_detailed,
    summarize,
)
from src.generation import ChainConfig, make_rng, run_chain, seed_plan, split_seed
from src.models.graph import WeightKind
from src.models.plan import population_deviation, validate_plan
from src.similarity import similarity_score
from src.utils.exceptions import PlansimConfigError, PlanValidationError, SummaryError

from tests.conftest import plan_of, square_grid


def _square(x: int) -> int:
    return x * x


# ---------------------------------------------------------------------------
# EnsembleConfig
# ---------------------------------------------------------------------------


class TestEnsembleConfig:
    """Validation and defaults."""

    def test_steps_default_to_fifty_per_district(self):
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1)
        assert cfg.steps_per_chain == 200

    def test_steps_default_follows_settings(self, monkeypatch):
        monkeypatch.setenv("PLANSIM_STEPS_PER_DISTRICT", "10")
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1)
        assert cfg.steps_per_chain == 40

    def test_explicit_steps_kept(self):
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1, steps_per_chain=0)
        assert cfg.steps_per_chain == 0

    def test_trees_per_step_default_from_settings(self):
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1)
        assert cfg.trees_per_step == 8
        assert cfg.chain_config(0).trees_per_step == 8

    def test_trees_per_step_follows_settings(self, monkeypatch):
        monkeypatch.setenv("PLANSIM_ENSEMBLE_TREES_PER_STEP", "2")
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1)
        assert cfg.trees_per_step == 2

    def test_explicit_trees_per_step_kept(self):
        cfg = EnsembleConfig(num_chains=3, districts=4, base_seed=1, trees_per_step=1)
        assert cfg.trees_per_step == 1

    def test_chain_seeds_are_split_and_distinct(self):
        cfg = EnsembleConfig(num_chains=50, districts=2, base_seed=2024)
        seeds = cfg.chain_seeds()
        assert seeds[0] == split_seed(2024, 0)
        assert len(set(seeds)) == 50

    def test_chain_config_carries_options(self):
        cfg = EnsembleConfig(
            num_chains=2,
            districts=2,
            base_seed=5,
            steps_per_chain=7,
            trees_per_step=3,
            tree_sampler="uniform",
        )
        chain = cfg.chain_config(1)
        assert chain.steps == 7
        assert chain.trees_per_step == 3
        assert chain.rng_seed == split_seed(5, 1)
        assert chain.tree_sampler.value == "uniform"

    @pytest.mark.parametrize(
        "overrides",
        [
            {"num_chains": 0},
            {"districts": 0},
            {"base_seed": -1},
            {"base_seed": 2**64},
            {"parallelism": 0},
        ],
    )
    def test_rejects_out_of_range(self, overrides):
        values = {"num_chains": 2, "districts": 2, "base_seed": 1}
        values.update(overrides)
        with pytest.raises(ValidationError):
            EnsembleConfig(**values)


# ---------------------------------------------------------------------------
# WorkerPool
# ---------------------------------------------------------------------------


class TestWorkerPool:
    async def test_results_follow_item_order(self):
        pool = WorkerPool(4, executor_kind="thread")
        results = await pool.map(_square, [(i,) for i in range(20)])
        assert results == [i * i for i in range(20)]

    async def test_inline_when_single_worker(self):
        calls = []
        pool = WorkerPool(1, executor_kind="thread")
        results = await pool.map(_square, [(2,), (3,)], lambda d, t: calls.append((d, t)))
        assert results == [4, 9]
        assert calls == [(1, 2), (2, 2)]

    async def test_progress_reaches_total(self):
        calls = []
        pool = WorkerPool(3, executor_kind="thread")
        await pool.map(_square, [(i,) for i in range(7)], lambda d, t: calls.append((d, t)))
        assert [d for d, _ in calls] == list(range(1, 8))
        assert {t for _, t in calls} == {7}

    def test_rejects_unknown_executor(self):
        with pytest.raises(PlansimConfigError):
            WorkerPool(2, executor_kind="cluster")


# ---------------------------------------------------------------------------
# run_ensemble
# ---------------------------------------------------------------------------


class TestRunEnsemble:
    """Seeded chains, in chain index order."""

    def test_single_chain_matches_run_chain(self, grid10):
        cfg = EnsembleConfig(num_chains=1, districts=4, base_seed=42, steps_per_chain=20)
        [plan] = run_ensemble(grid10, cfg, executor_kind="thread")

        rng = make_rng(split_seed(42, 0))
        start = seed_plan(grid10, 4, rng)
        expected = run_chain(grid10, start, cfg.chain_config(0), rng)
        assert plan == expected

    def test_same_plans_at_any_parallelism(self, grid10):
        base = dict(num_chains=6, districts=3, base_seed=7, steps_per_chain=15)
        serial = run_ensemble(grid10, EnsembleConfig(**base, parallelism=1))
        threaded = run_ensemble(grid10, EnsembleConfig(**base, parallelism=4), executor_kind="thread")
        assert serial == threaded

    def test_process_pool_matches_serial(self, grid10):
        base = dict(num_chains=4, districts=2, base_seed=11, steps_per_chain=10)
        serial = run_ensemble(grid10, EnsembleConfig(**base, parallelism=1))
        processes = run_ensemble(
            grid10, EnsembleConfig(**base, parallelism=2), executor_kind="process"
        )
        assert serial == processes

    def test_chains_differ(self, grid10):
        cfg = EnsembleConfig(num_chains=5, districts=4, base_seed=3, steps_per_chain=20)
        plans = run_ensemble(grid10, cfg, executor_kind="thread")
        assert len({tuple(sorted(p.assignment.items())) for p in plans}) > 1

    def test_detailed_result_carries_seeds_and_timings(self, grid10):
        cfg = EnsembleConfig(num_chains=3, districts=2, base_seed=9, steps_per_chain=2)
        result = run_ensemble_detailed(grid10, cfg, executor_kind="thread")
        assert len(result.plans) == 3
        assert result.chain_seeds == cfg.chain_seeds()
        assert len(result.chain_seconds) == 3
        assert all(seconds >= 0 for seconds in result.chain_seconds)
        assert result.total_seconds >= 0

    def test_too_many_districts(self, path4):
        cfg = EnsembleConfig(num_chains=1, districts=5, base_seed=0, steps_per_chain=0)
        with pytest.raises(PlansimConfigError):
            run_ensemble(path4, cfg)

    async def test_async_runner_reports_progress(self, grid10):
        calls = []
        cfg = EnsembleConfig(num_chains=4, districts=2, base_seed=1, steps_per_chain=3, parallelism=2)
        plans = await run_ensemble_async(
            grid10, cfg, progress_callback=lambda d, t: calls.append(d), executor_kind="thread"
        )
        assert len(plans) == 4
        assert sorted(calls) == [1, 2, 3, 4]

    @pytest.mark.slow
    def test_twenty_chains_are_valid_and_balanced(self, grid10):
        cfg = EnsembleConfig(num_chains=20, districts=4, base_seed=2024, parallelism=4)
        plans = run_ensemble(grid10, cfg, executor_kind="thread")
        assert len(plans) == 20
        for plan in plans:
            assert validate_plan(grid10, plan) == []
            assert population_deviation(grid10, plan) <= 0.10


# ---------------------------------------------------------------------------
# pairwise_similarity
# ---------------------------------------------------------------------------


class TestPairwiseSimilarity:
    """All unordered pairs, sorted by (i, j)."""

    def test_identical_plans_score_one(self, grid2, horizontal):
        scores = pairwise_similarity(grid2, [horizontal, horizontal, horizontal])
        assert [(s.i, s.j) for s in scores.scores] == [(0, 1), (0, 2), (1, 2)]
        assert all(s.value == 1.0 for s in scores.scores)

    def test_two_plans_match_direct_score(self, grid2, horizontal, vertical):
        scores = pairwise_similarity(grid2, [horizontal, vertical], WeightKind.AREA)
        assert len(scores) == 1
        assert scores.scores[0].value == similarity_score(grid2, horizontal, vertical).value

    def test_single_plan_has_no_pairs(self, grid2, horizontal):
        assert len(pairwise_similarity(grid2, [horizontal])) == 0

    def test_both_kinds_in_one_pass(self, hot_corner_grid, horizontal, vertical):
        scores = pairwise_similarities(hot_corner_grid, [horizontal, vertical], ("area", "population"))
        assert scores[WeightKind.AREA].scores[0].value == pytest.approx(0.5)
        assert scores[WeightKind.POPULATION].scores[0].value == pytest.approx(11 / 13)

    def test_invalid_plan_rejected(self, grid2, horizontal):
        with pytest.raises(PlanValidationError):
            pairwise_similarity(grid2, [horizontal, plan_of([["r00c00"]])])

    def test_mixed_district_counts_are_symmetric(self, grid10):
        plans = [seed_plan(grid10, m, make_rng(m)) for m in (2, 5, 3)]
        scores = pairwise_similarity(grid10, plans)
        for entry in scores.scores:
            direct = similarity_score(grid10, plans[entry.j], plans[entry.i]).value
            assert entry.value == pytest.approx(direct, abs=1e-12)

    def test_parallel_scores_match_serial(self, grid10):
        cfg = EnsembleConfig(num_chains=6, districts=3, base_seed=21, steps_per_chain=5)
        plans = run_ensemble(grid10, cfg)
        serial = pairwise_similarities(grid10, plans, ("area", "population"))
        parallel = pairwise_similarities(
            grid10, plans, ("area", "population"), parallelism=3, executor_kind="thread"
        )
        assert serial == parallel

    async def test_async_variant(self, grid2, horizontal, vertical):
        scores = await pairwise_similarity_async(grid2, [horizontal, vertical, horizontal], "area")
        assert [s.value for s in scores.scores] == pytest.approx([0.5, 1.0, 0.5])

    @pytest.mark.slow
    def test_fifty_plan_ensemble_shape(self):
        g = square_grid(12, 12)
        cfg = EnsembleConfig(num_chains=50, districts=4, base_seed=1, parallelism=4)
        plans = run_ensemble(g, cfg, executor_kind="thread")
        scores = pairwise_similarity(g, plans, parallelism=4)
        values = scores.values()
        assert len(values) == 1225
        assert np.all(values >= 0.25 - 1e-12)
        assert np.all(values <= 1.0)
        summary = summarize(scores)
        assert 0.25 < summary.mean < 1.0

    @pytest.mark.slow
    def test_fewer_districts_are_more_similar(self):
        g = square_grid(12, 12)
        means = {}
        for m in (2, 8):
            cfg = EnsembleConfig(num_chains=30, districts=m, base_seed=5, parallelism=4)
            plans = run_ensemble(g, cfg, executor_kind="thread")
            means[m] = summarize(pairwise_similarity(g, plans)).mean
        assert means[2] > means[8]

    @pytest.mark.slow
    def test_area_and_population_scores_diverge_on_hotspot(self):
        g = square_grid(12, 12, pattern="hotspot", hotspot_fraction=0.5, hotspot_size=2)
        cfg = EnsembleConfig(num_chains=30, districts=4, base_seed=8, parallelism=4)
        plans = run_ensemble(g, cfg, executor_kind="thread")
        scores = pairwise_similarities(g, plans, ("area", "population"), parallelism=4)
        area = summarize(scores[WeightKind.AREA]).mean
        population = summarize(scores[WeightKind.POPULATION]).mean
        assert abs(area - population) > 0.01


class TestReferenceSimilarity:
    def test_scores_each_plan(self, grid2, horizontal, vertical):
        scores = reference_similarity(grid2, horizontal, [horizontal, vertical])
        assert [s.value for s in scores] == pytest.approx([1.0, 0.5])

    def test_invalid_reference(self, grid2, horizontal):
        with pytest.raises(PlanValidationError):
            reference_similarity(grid2, plan_of([["r00c00"]]), [horizontal])


class TestPairwiseScores:
    def test_rejects_out_of_range_value(self):
        with pytest.raises(ValueError):
            PairwiseScores([PairScore(0, 1, 1.5)], WeightKind.AREA)

    def test_rejects_wrong_pair_count(self):
        with pytest.raises(ValueError):
            PairwiseScores([PairScore(0, 1, 0.5)], WeightKind.AREA, num_plans=3)


# ---------------------------------------------------------------------------
# summarize
# ---------------------------------------------------------------------------


class TestSummarize:
    """Mean, population sd, range and histogram."""

    def test_identical_scores(self):
        summary = summarize([1.0, 1.0])
        assert summary.mean == 1.0
        assert summary.sd == 0.0

    def test_two_values(self):
        summary = summarize([0.4, 0.6])
        assert summary.mean == pytest.approx(0.5)
        assert summary.sd == pytest.approx(0.1)
        assert (summary.min, summary.max) == (0.4, 0.6)

    def test_one_lands_in_last_bin(self):
        summary = summarize([1.0], bins=4)
        assert summary.counts == [0, 0, 0, 1]

    def test_zero_lands_in_first_bin(self):
        summary = summarize([0.0, 0.5], bins=2)
        assert summary.counts == [1, 1]

    def test_default_bins_from_settings(self):
        summary = summarize([0.3])
        assert summary.bins == 40
        assert len(summary.bin_edges) == 41
        assert summary.bin_edges[0] == 0.0
        assert summary.bin_edges[-1] == 1.0

    def test_counts_sum_to_pairs(self, grid2, horizontal, vertical):
        scores = pairwise_similarity(grid2, [horizontal, vertical, vertical, horizontal])
        summary = summarize(scores, bins=10)
        assert sum(summary.counts) == 6
        assert summary.kind is WeightKind.AREA
        assert summary.min <= summary.mean <= summary.max

    def test_to_dict_keys(self):
        record = summarize([0.5], bins=2, kind=WeightKind.POPULATION).to_dict()
        assert record["kind"] == "population"
        assert record["bins"] == 2
        assert record["counts"] == [0, 1]

    def test_empty_rejected(self):
        with pytest.raises(SummaryError, match="empty"):
            summarize([])

    def test_empty_pairwise_rejected(self, grid2, horizontal):
        with pytest.raises(SummaryError):
            summarize(pairwise_similarity(grid2, [horizontal]))

    def test_bad_bins_rejected(self):
        with pytest.raises(ValueError):
            summarize([0.5], bins=0)
