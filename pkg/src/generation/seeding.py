"""Recursive-merge seeding of initial plans.

Every precinct starts as its own cluster. The lowest-population cluster is
repeatedly merged into its lowest-population neighbouring cluster (ties by
lowest cluster id) until m clusters remain. Merging adjacent clusters keeps
every cluster connected.
"""

import heapq
import logging
from typing import Dict, List, Optional, Set

from src.generation.rng import ChainRNG
from src.models.graph import DualGraph
from src.models.plan import Plan
from src.utils.exceptions import GenerationError

logger = logging.getLogger(__name__)


def seed_plan(g: DualGraph, m: int, rng: Optional[ChainRNG] = None) -> Plan:
    """Build a contiguous m-district plan by recursive cluster merging.

    Args:
        g: Connected dual graph
        m: Number of districts, 1 <= m <= number of precincts
        rng: Accepted so every generator shares one call shape. The merge
            rule is deterministic: cluster ids are graph-order positions and
            chains diverge in the recombination steps that follow

    Raises:
        GenerationError: If m is outside 1..len(g)
    """
    n = len(g)
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m <= n:
        raise GenerationError(
            f"District count must be between 1 and the precinct count {n}, got {m}"
        )

    ids = g.ids

    members: Dict[int, List[str]] = {}
    population: Dict[int, int] = {}
    neighbors: Dict[int, Set[int]] = {}
    cluster_of: Dict[str, int] = {}
    for position, precinct_id in enumerate(ids):
        members[position] = [precinct_id]
        population[position] = g.population_of(precinct_id)
        cluster_of[precinct_id] = position
    for precinct_id in ids:
        neighbors[cluster_of[precinct_id]] = {
            cluster_of[other] for other in g.neighbors(precinct_id)
        }

    heap = [(population[cid], cid) for cid in members]
    heapq.heapify(heap)

    while len(members) > m:
        pop, cid = heapq.heappop(heap)
        if cid not in members or population[cid] != pop:
            continue  # stale
        target = min(neighbors[cid], key=lambda other: (population[other], other))

        # Merged cluster keeps the lower id.
        keep, gone = (cid, target) if cid < target else (target, cid)
        members[keep].extend(members.pop(gone))
        population[keep] += population.pop(gone)
        merged_neighbors = (neighbors[keep] | neighbors.pop(gone)) - {keep, gone}
        neighbors[keep] = merged_neighbors
        for other in merged_neighbors:
            neighbors[other].discard(gone)
            neighbors[other].add(keep)
        heapq.heappush(heap, (population[keep], keep))

    # Dense district index by the graph position of each cluster's first precinct.
    first_position = {
        cid: min(g.position(pid) for pid in nodes) for cid, nodes in members.items()
    }
    ordered = sorted(members, key=lambda cid: first_position[cid])
    plan = Plan.from_districts([members[cid] for cid in ordered])
    plan = plan.with_assignment({pid: plan.assignment[pid] for pid in ids})

    logger.debug("Seeded %d-district plan over %d precincts", m, n)
    return plan
