"""Synthetic geometries: grid states and the radially cut disc."""

from .circle import circle_state, radial_plan, radial_similarity, wedge_id
from .grid import GridSpec, PopulationPattern, grid_state

__all__ = [
    "GridSpec",
    "PopulationPattern",
    "grid_state",
    "circle_state",
    "radial_plan",
    "radial_similarity",
    "wedge_id",
]
