"""Shared pytest fixtures for the plansim test suite.

Provides small hand-checkable graphs (paths, stars, 2x2 grids), the plans
used across the similarity and generation tests, and a settings reset so
environment overrides never leak between tests.
"""

from typing import Dict, Sequence

import pytest

import src.config.settings as settings_module
from src.models.graph import DualGraph, Precinct
from src.models.plan import Plan
from src.synth.grid import GridSpec, grid_state


# Tell pytest-asyncio to load so async tests run in auto mode.
pytest_plugins = ("pytest_asyncio",)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def path_graph(populations: Sequence[int], areas: Sequence[float] = ()) -> DualGraph:
    """Path p0 - p1 - ... with the given populations (unit areas by default)."""
    areas = list(areas) or [1.0] * len(populations)
    precincts = [
        Precinct(id=f"p{i}", area=areas[i], population=pop) for i, pop in enumerate(populations)
    ]
    edges = [(f"p{i}", f"p{i + 1}") for i in range(len(populations) - 1)]
    return DualGraph(precincts, edges)


def plan_of(groups: Sequence[Sequence[str]]) -> Plan:
    return Plan.from_districts([list(group) for group in groups])


def square_grid(rows: int, cols: int, **kwargs) -> DualGraph:
    return grid_state(GridSpec(rows=rows, cols=cols, **kwargs))


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Reset the cached settings before and after every test."""
    monkeypatch.setattr(settings_module, "_settings", None)
    yield
    settings_module._settings = None


# ---------------------------------------------------------------------------
# Graph fixtures
# ---------------------------------------------------------------------------


@pytest.fixture()
def grid2() -> DualGraph:
    """2x2 unit grid, population 1 per cell.

    r00c00 r00c01
    r01c00 r01c01
    """
    return square_grid(2, 2, population_per_cell=1)


@pytest.fixture()
def horizontal(grid2) -> Plan:
    """Top row district 0, bottom row district 1."""
    return plan_of([["r00c00", "r00c01"], ["r01c00", "r01c01"]])


@pytest.fixture()
def vertical(grid2) -> Plan:
    """Left column district 0, right column district 1."""
    return plan_of([["r00c00", "r01c00"], ["r00c01", "r01c01"]])


@pytest.fixture()
def hot_corner_grid() -> DualGraph:
    """2x2 unit grid with population 10 in the top-left cell and 1 elsewhere."""
    pops: Dict[str, int] = {"r00c00": 10, "r00c01": 1, "r01c00": 1, "r01c01": 1}
    precincts = [Precinct(id=pid, area=1.0, population=pop) for pid, pop in pops.items()]
    edges = [("r00c00", "r00c01"), ("r00c00", "r01c00"), ("r00c01", "r01c01"), ("r01c00", "r01c01")]
    return DualGraph(precincts, edges)


@pytest.fixture()
def path4() -> DualGraph:
    """4-node path with unit populations."""
    return path_graph([1, 1, 1, 1])


@pytest.fixture()
def grid10() -> DualGraph:
    """10x10 uniform grid, 100 people per cell."""
    return square_grid(10, 10)
