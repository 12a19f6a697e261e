"""Plan generation: seeding, spanning trees and the recombination chain."""

from .recombination import (
    ChainConfig,
    CutPolicy,
    adjacent_district_pairs,
    recom_step,
    run_chain,
)
from .rng import ChainRNG, make_rng, split_seed, splitmix64
from .seeding import seed_plan
from .spanning_tree import (
    CutResult,
    SpanningTree,
    TreeSampler,
    all_cuts,
    best_cut,
    build_tree,
    first_acceptable_cut,
    random_spanning_tree,
)

__all__ = [
    "ChainConfig",
    "CutPolicy",
    "ChainRNG",
    "CutResult",
    "SpanningTree",
    "TreeSampler",
    "adjacent_district_pairs",
    "all_cuts",
    "best_cut",
    "build_tree",
    "first_acceptable_cut",
    "make_rng",
    "random_spanning_tree",
    "recom_step",
    "run_chain",
    "seed_plan",
    "split_seed",
    "splitmix64",
]
