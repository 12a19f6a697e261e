"""Rectangular grid states with rook adjacency."""

import logging
from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.graph import DualGraph, Precinct

logger = logging.getLogger(__name__)


class PopulationPattern(Enum):
    """Per-cell population rule of a grid."""

    UNIFORM = "uniform"
    HOTSPOT = "hotspot"


class GridSpec(BaseModel):
    """Shape and population rule of a synthetic grid state.

    The hotspot pattern puts round(hotspot_fraction * total) people into the
    hotspot_size x hotspot_size block at the top-left corner and spreads the
    rest over the remaining cells; the grand total stays
    rows * cols * population_per_cell.
    """

    rows: int = Field(..., ge=1, le=10000)
    cols: int = Field(..., ge=1, le=10000)
    pattern: PopulationPattern = Field(default=PopulationPattern.UNIFORM)
    population_per_cell: int = Field(default=100, ge=0)
    hotspot_fraction: float = Field(default=0.5, ge=0.0, le=1.0)
    hotspot_size: int = Field(default=2, ge=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_hotspot(self) -> "GridSpec":
        if self.pattern is PopulationPattern.HOTSPOT:
            if self.hotspot_size > min(self.rows, self.cols):
                raise ValueError(
                    f"Hotspot block {self.hotspot_size}x{self.hotspot_size} does not fit "
                    f"a {self.rows}x{self.cols} grid"
                )
            if self.hotspot_size**2 == self.rows * self.cols and self.hotspot_fraction < 1.0:
                raise ValueError("Hotspot covers the whole grid; hotspot_fraction must be 1")
        return self

    @property
    def total_population(self) -> int:
        return self.rows * self.cols * self.population_per_cell

    def cell_id(self, row: int, col: int) -> str:
        """Zero-padded cell id, e.g. r03c07, so string order is row-major."""
        row_width = max(2, len(str(self.rows - 1)))
        col_width = max(2, len(str(self.cols - 1)))
        return f"r{row:0{row_width}d}c{col:0{col_width}d}"

    def populations(self) -> List[List[int]]:
        """Population of every cell, indexed [row][col]."""
        if self.pattern is PopulationPattern.UNIFORM:
            return [[self.population_per_cell] * self.cols for _ in range(self.rows)]

        total = self.total_population
        size = self.hotspot_size
        inside_cells = size * size
        outside_cells = self.rows * self.cols - inside_cells
        inside_total = int(round(self.hotspot_fraction * total))
        outside_total = total - inside_total

        grid = [[0] * self.cols for _ in range(self.rows)]
        inside_seen = outside_seen = 0
        for row in range(self.rows):
            for col in range(self.cols):
                if row < size and col < size:
                    share, extra = divmod(inside_total, inside_cells)
                    grid[row][col] = share + (1 if inside_seen < extra else 0)
                    inside_seen += 1
                else:
                    share, extra = divmod(outside_total, outside_cells)
                    grid[row][col] = share + (1 if outside_seen < extra else 0)
                    outside_seen += 1
        return grid


def grid_state(spec: GridSpec) -> DualGraph:
    """Build a rows x cols grid of unit-area cells with rook adjacency."""
    populations = spec.populations()
    precincts = []
    edges = []
    for row in range(spec.rows):
        for col in range(spec.cols):
            cell = spec.cell_id(row, col)
            precincts.append(Precinct(id=cell, area=1.0, population=populations[row][col]))
            if col + 1 < spec.cols:
                edges.append((cell, spec.cell_id(row, col + 1)))
            if row + 1 < spec.rows:
                edges.append((cell, spec.cell_id(row + 1, col)))
    logger.info("Built %dx%d %s grid", spec.rows, spec.cols, spec.pattern.value)
    return DualGraph(precincts, edges)
