"""Parallel ensemble runner.

Independent work items (chains, chunks of plan pairs) are dispatched through
asyncio.gather with a semaphore bounding how many are in flight, each item
running in a process or thread pool executor. Results are returned in item
order, never completion order, so output is identical at any parallelism.
"""

import asyncio
import logging
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config.settings import get_settings
from src.generation.recombination import ChainConfig, CutPolicy, run_chain
from src.generation.rng import make_rng, split_seed
from src.generation.seeding import seed_plan
from src.generation.spanning_tree import TreeSampler
from src.models.graph import DualGraph
from src.models.plan import Plan
from src.utils.exceptions import PlansimConfigError
from src.utils.validation import UINT64_MAX

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int], None]


class EnsembleConfig(BaseModel):
    """Configuration of an ensemble of independent chains.

    Chain i is seeded with split_seed(base_seed, i).
    """

    num_chains: int = Field(..., ge=1, le=100000, description="Number of chains N")
    districts: int = Field(..., ge=1, description="Districts per plan m")
    steps_per_chain: int = Field(default=0, ge=0, description="Recombination steps per chain")
    base_seed: int = Field(..., ge=0, le=UINT64_MAX, description="64-bit base seed")
    parallelism: int = Field(default=1, ge=1, le=512, description="Worker count")
    trees_per_step: int = Field(default=1, ge=1, le=1000, description="Spanning trees per step")
    tree_sampler: TreeSampler = Field(default=TreeSampler.MST)
    cut_policy: CutPolicy = Field(default=CutPolicy.BEST)
    epsilon: float = Field(default=0.05, gt=0.0, le=1.0)

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        """Fill omitted chain length and trees per step from settings.

        Chains run steps_per_district * m steps and draw
        ensemble_trees_per_step trees per step.
        """
        if not isinstance(data, dict):
            return data
        data = dict(data)
        settings = get_settings()
        districts = data.get("districts")
        if data.get("steps_per_chain") is None and isinstance(districts, int):
            data["steps_per_chain"] = settings.default_steps(districts)
        if data.get("trees_per_step") is None:
            data["trees_per_step"] = settings.ensemble_trees_per_step
        return data

    model_config = ConfigDict(frozen=True)

    def chain_seed(self, index: int) -> int:
        return split_seed(self.base_seed, index)

    def chain_seeds(self) -> List[int]:
        return [self.chain_seed(i) for i in range(self.num_chains)]

    def chain_config(self, index: int) -> ChainConfig:
        return ChainConfig(
            steps=self.steps_per_chain,
            rng_seed=self.chain_seed(index),
            trees_per_step=self.trees_per_step,
            tree_sampler=self.tree_sampler,
            cut_policy=self.cut_policy,
            epsilon=self.epsilon,
        )


@dataclass(frozen=True)
class EnsembleResult:
    """Plans of an ensemble run plus timing data for the run manifest."""

    plans: List[Plan]
    chain_seeds: List[int]
    chain_seconds: List[float]
    total_seconds: float


class WorkerPool:
    """Bounded, order-preserving executor for independent work items."""

    def __init__(self, parallelism: int, executor_kind: Optional[str] = None) -> None:
        if parallelism < 1:
            raise PlansimConfigError(f"Parallelism must be positive, got {parallelism}")
        self.parallelism = parallelism
        self.executor_kind = executor_kind or get_settings().ensemble_executor
        if self.executor_kind not in ("process", "thread"):
            raise PlansimConfigError(f"Unknown executor kind '{self.executor_kind}'")

    def _make_executor(self) -> Executor:
        if self.executor_kind == "thread":
            return ThreadPoolExecutor(max_workers=self.parallelism)
        return ProcessPoolExecutor(max_workers=self.parallelism)

    async def map(
        self,
        fn: Callable[..., Any],
        items: Sequence[Tuple[Any, ...]],
        progress_callback: Optional[ProgressCallback] = None,
    ) -> List[Any]:
        """Apply fn(*item) to every item; results follow item order."""
        total = len(items)
        completed = 0

        def _report() -> None:
            nonlocal completed
            completed += 1
            if progress_callback is not None:
                progress_callback(completed, total)

        if self.parallelism == 1 or total <= 1:
            results = []
            for item in items:
                results.append(fn(*item))
                _report()
            return results

        loop = asyncio.get_running_loop()
        semaphore = asyncio.Semaphore(self.parallelism)

        with self._make_executor() as executor:

            async def _run(item: Tuple[Any, ...]) -> Any:
                async with semaphore:
                    result = await loop.run_in_executor(executor, fn, *item)
                _report()
                return result

            return list(await asyncio.gather(*(_run(item) for item in items)))


def _chain_worker(g: DualGraph, districts: int, cfg: ChainConfig) -> Tuple[Plan, float]:
    """Seed and run one chain from its own rng (module level for pickling)."""
    started = time.perf_counter()
    rng = make_rng(cfg.rng_seed)
    start = seed_plan(g, districts, rng)
    plan = run_chain(g, start, cfg, rng, validate=False)
    return plan, time.perf_counter() - started


async def run_ensemble_detailed_async(
    g: DualGraph,
    cfg: EnsembleConfig,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> EnsembleResult:
    """Run cfg.num_chains seeded chains and collect plans with timings.

    Raises:
        PlansimConfigError: If m exceeds the precinct count
    """
    if cfg.districts > len(g):
        raise PlansimConfigError(
            f"District count {cfg.districts} exceeds precinct count {len(g)}"
        )
    logger.info(
        "Running %d chains (m=%d, %d steps each, parallelism %d)",
        cfg.num_chains,
        cfg.districts,
        cfg.steps_per_chain,
        cfg.parallelism,
    )
    started = time.perf_counter()
    pool = WorkerPool(cfg.parallelism, executor_kind)
    items = [(g, cfg.districts, cfg.chain_config(i)) for i in range(cfg.num_chains)]
    outputs = await pool.map(_chain_worker, items, progress_callback)
    total_seconds = time.perf_counter() - started
    logger.info("Ensemble finished in %.2f s", total_seconds)
    return EnsembleResult(
        plans=[plan for plan, _ in outputs],
        chain_seeds=cfg.chain_seeds(),
        chain_seconds=[seconds for _, seconds in outputs],
        total_seconds=total_seconds,
    )


async def run_ensemble_async(
    g: DualGraph,
    cfg: EnsembleConfig,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> List[Plan]:
    """Plans of cfg.num_chains independent chains, in chain index order."""
    result = await run_ensemble_detailed_async(g, cfg, progress_callback, executor_kind)
    return result.plans


def run_ensemble_detailed(
    g: DualGraph,
    cfg: EnsembleConfig,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> EnsembleResult:
    return asyncio.run(run_ensemble_detailed_async(g, cfg, progress_callback, executor_kind))


def run_ensemble(
    g: DualGraph,
    cfg: EnsembleConfig,
    progress_callback: Optional[ProgressCallback] = None,
    executor_kind: Optional[str] = None,
) -> List[Plan]:
    """Synchronous wrapper around run_ensemble_async."""
    return run_ensemble_detailed(g, cfg, progress_callback, executor_kind).plans
