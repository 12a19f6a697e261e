"""A disc cut into equal radial wedges, and radial plans on it.

The disc is a cycle of wedges: each wedge touches only its two angular
neighbours.
"""

import logging

from src.models.graph import DualGraph, Precinct
from src.models.plan import Plan
from src.utils.exceptions import SynthError

logger = logging.getLogger(__name__)


def wedge_id(index: int, wedges: int) -> str:
    """Zero-padded wedge id, e.g. w007 for wedge 7 of 360."""
    width = max(3, len(str(wedges - 1)))
    return f"w{index:0{width}d}"


def circle_state(wedges: int) -> DualGraph:
    """Cycle of `wedges` nodes, each with area 1/wedges and population 1.

    Raises:
        SynthError: If wedges < 3
    """
    if isinstance(wedges, bool) or not isinstance(wedges, int) or wedges < 3:
        raise SynthError(f"A circle needs at least 3 wedges, got {wedges}")
    precincts = [
        Precinct(id=wedge_id(i, wedges), area=1.0 / wedges, population=1) for i in range(wedges)
    ]
    edges = [(wedge_id(i, wedges), wedge_id((i + 1) % wedges, wedges)) for i in range(wedges)]
    return DualGraph(precincts, edges)


def radial_plan(wedges: int, districts: int, offset: int = 0) -> Plan:
    """Split the circle into `districts` equal arcs starting at `offset`.

    District i holds wedges offset + i*L .. offset + (i+1)*L - 1 (mod wedges)
    where L = wedges / districts.

    Raises:
        SynthError: If districts does not divide wedges or offset is out of range
    """
    if wedges < 3:
        raise SynthError(f"A circle needs at least 3 wedges, got {wedges}")
    if districts < 1 or wedges % districts != 0:
        raise SynthError(f"District count {districts} does not divide {wedges} wedges")
    if not 0 <= offset < wedges:
        raise SynthError(f"Offset {offset} outside 0..{wedges - 1}")

    arc = wedges // districts
    assignment = {
        wedge_id((offset + k) % wedges, wedges): k // arc for k in range(wedges)
    }
    logger.debug("Radial plan: %d arcs of %d wedges at offset %d", districts, arc, offset)
    return Plan(assignment=assignment, num_districts=districts)


def radial_similarity(wedges: int, districts: int, offset_a: int, offset_b: int) -> float:
    """Closed-form area similarity of two radial plans.

    1 - m * d / wedges, where d is the circular distance between the offsets
    folded into [0, wedges / (2m)].
    """
    if districts < 1 or wedges % districts != 0:
        raise SynthError(f"District count {districts} does not divide {wedges} wedges")
    arc = wedges // districts
    shift = abs(offset_a - offset_b) % arc
    distance = min(shift, arc - shift)
    return 1.0 - districts * distance / wedges
