"""Optimal recombination chain.

Each step picks a uniformly random pair of adjacent districts, merges them,
draws spanning tree(s) of the merged cluster and re-splits it along the tree
cut that best equalizes population. The step always takes its best proposal;
there is no accept/reject against the incumbent split.
"""

import logging
from enum import Enum
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.generation.rng import ChainRNG, make_rng
from src.generation.spanning_tree import (
    CutResult,
    SpanningTree,
    TreeSampler,
    best_cut,
    first_acceptable_cut,
    random_spanning_tree,
)
from src.models.graph import DualGraph
from src.models.plan import Plan, population_deviation, require_valid_plan
from src.utils.exceptions import GenerationError
from src.utils.validation import UINT64_MAX

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int], None]


class CutPolicy(Enum):
    """How a tree cut is chosen."""

    BEST = "best"  # evaluate every edge, keep the most equal split
    FIRST_ACCEPTABLE = "first_acceptable"  # first edge within epsilon, else best


class ChainConfig(BaseModel):
    """Configuration of one recombination chain."""

    steps: int = Field(default=1, ge=0, description="Number of recombination steps")
    rng_seed: int = Field(default=0, ge=0, le=UINT64_MAX, description="64-bit chain seed")
    trees_per_step: int = Field(
        default=1, ge=1, le=1000, description="Spanning trees drawn per step"
    )
    tree_sampler: TreeSampler = Field(default=TreeSampler.MST)
    cut_policy: CutPolicy = Field(default=CutPolicy.BEST)
    epsilon: float = Field(
        default=0.05,
        gt=0.0,
        le=1.0,
        description="Relative population tolerance of the first_acceptable cut policy",
    )

    model_config = ConfigDict(frozen=True)


def adjacent_district_pairs(g: DualGraph, p: Plan) -> List[Tuple[int, int]]:
    """Sorted (low, high) district pairs joined by at least one graph edge."""
    pairs = set()
    assignment = p.assignment
    for u, v in g.edges:
        du, dv = assignment[u], assignment[v]
        if du != dv:
            pairs.add((du, dv) if du < dv else (dv, du))
    return sorted(pairs)


def _choose_cut(
    g: DualGraph, nodes: List[str], cfg: ChainConfig, rng: ChainRNG
) -> Tuple[SpanningTree, CutResult]:
    chosen: Optional[Tuple[SpanningTree, CutResult]] = None
    for _ in range(cfg.trees_per_step):
        tree = random_spanning_tree(g, nodes, rng, cfg.tree_sampler)
        if cfg.cut_policy is CutPolicy.FIRST_ACCEPTABLE:
            acceptable = first_acceptable_cut(tree, cfg.epsilon)
            if acceptable is not None:
                return tree, acceptable
        cut = best_cut(tree, g)
        if chosen is None or cut.gap < chosen[1].gap:
            chosen = (tree, cut)
    assert chosen is not None
    return chosen


def recom_step(
    g: DualGraph, p: Plan, cfg: ChainConfig, rng: ChainRNG
) -> Plan:
    """One optimal-recombination step.

    The pair's labels are reused: the lower label goes to the side holding
    the lexicographically smallest precinct of the merged cluster. Precincts
    outside the pair keep their district.

    Raises:
        GenerationError: If no two districts are adjacent (m < 2)
    """
    pairs = adjacent_district_pairs(g, p)
    if not pairs:
        raise GenerationError(
            "No adjacent district pair to recombine", details={"districts": p.num_districts}
        )
    low, high = rng.choice(pairs)

    assignment = p.assignment
    merged = [pid for pid in g.ids if assignment[pid] == low or assignment[pid] == high]
    tree, cut = _choose_cut(g, merged, cfg, rng)

    side = tree.subtree(cut.child)
    side_label = low if min(merged) in side else high
    other_label = high if side_label == low else low

    new_assignment = dict(assignment)
    for pid in merged:
        new_assignment[pid] = side_label if pid in side else other_label

    logger.debug(
        "Recombined districts %d/%d: cut %s-%s, populations %d/%d",
        low,
        high,
        cut.parent,
        cut.child,
        cut.child_weight,
        cut.rest_weight,
    )
    return p.with_assignment(new_assignment)


def run_chain(
    g: DualGraph,
    start: Plan,
    cfg: ChainConfig,
    rng: Optional[ChainRNG] = None,
    validate: bool = True,
    progress_callback: Optional[ProgressCallback] = None,
) -> Plan:
    """Apply cfg.steps recombination steps to start.

    Args:
        g: Dual graph
        start: Valid starting plan
        cfg: Chain configuration
        rng: Generator to draw from (defaults to a fresh one seeded with
            cfg.rng_seed)
        validate: Validate the starting plan first
        progress_callback: Optional callback(step, total)

    Returns:
        The final plan; identical for identical (g, start, cfg, rng state)
    """
    if validate:
        require_valid_plan(g, start)
    if rng is None:
        rng = make_rng(cfg.rng_seed)

    plan = start
    for step in range(cfg.steps):
        plan = recom_step(g, plan, cfg, rng)
        if progress_callback is not None:
            progress_callback(step + 1, cfg.steps)

    if logger.isEnabledFor(logging.DEBUG) and cfg.steps:
        logger.debug(
            "Chain seed %d finished %d steps, deviation %.6f",
            cfg.rng_seed,
            cfg.steps,
            population_deviation(g, plan, validate=False),
        )
    return plan
