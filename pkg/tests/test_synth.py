"""Tests for synthetic grid and circle states."""

import pytest
from pydantic import ValidationError

from src.models.plan import validate_plan
from src.synth import (
    GridSpec,
    PopulationPattern,
    circle_state,
    grid_state,
    radial_plan,
    radial_similarity,
    wedge_id,
)
from src.utils.exceptions import SynthError


class TestGridSpec:
    """Grid shape and population rules."""

    def test_uniform_populations(self):
        spec = GridSpec(rows=2, cols=3, population_per_cell=7)
        assert spec.populations() == [[7, 7, 7], [7, 7, 7]]
        assert spec.total_population == 42

    def test_hotspot_holds_requested_share(self):
        spec = GridSpec(rows=10, cols=10, pattern="hotspot", hotspot_fraction=0.5, hotspot_size=2)
        grid = spec.populations()
        corner = sum(grid[r][c] for r in range(2) for c in range(2))
        assert corner == spec.total_population // 2
        assert sum(map(sum, grid)) == spec.total_population

    def test_hotspot_remainder_goes_to_first_cells(self):
        spec = GridSpec(
            rows=3, cols=3, pattern="hotspot", population_per_cell=1, hotspot_fraction=0.5, hotspot_size=2
        )
        # Total 9: 4 or 5 in the corner block, split as evenly as possible.
        grid = spec.populations()
        corner = [grid[0][0], grid[0][1], grid[1][0], grid[1][1]]
        assert sum(corner) == round(0.5 * 9)
        assert max(corner) - min(corner) <= 1
        assert corner == sorted(corner, reverse=True)

    def test_hotspot_must_fit(self):
        with pytest.raises(ValidationError):
            GridSpec(rows=2, cols=5, pattern=PopulationPattern.HOTSPOT, hotspot_size=3)

    def test_hotspot_covering_grid_needs_full_fraction(self):
        with pytest.raises(ValidationError):
            GridSpec(rows=2, cols=2, pattern="hotspot", hotspot_size=2, hotspot_fraction=0.5)

    @pytest.mark.parametrize("field", ["rows", "cols"])
    def test_rejects_empty_dimension(self, field):
        values = {"rows": 3, "cols": 3}
        values[field] = 0
        with pytest.raises(ValidationError):
            GridSpec(**values)

    def test_cell_ids_sort_row_major(self):
        spec = GridSpec(rows=12, cols=3)
        ids = [spec.cell_id(r, c) for r in range(12) for c in range(3)]
        assert ids == sorted(ids)
        assert spec.cell_id(3, 1) == "r03c01"

    def test_wide_grid_pads_further(self):
        assert GridSpec(rows=101, cols=2).cell_id(7, 0) == "r007c00"


class TestGridState:
    def test_shape_and_adjacency(self):
        g = grid_state(GridSpec(rows=3, cols=4))
        assert len(g) == 12
        # Rook edges: rows * (cols - 1) + (rows - 1) * cols
        assert len(g.edges) == 3 * 3 + 2 * 4
        assert g.neighbors("r01c01") == ["r00c01", "r01c00", "r01c02", "r02c01"]
        assert g.total_area == 12.0

    def test_single_cell(self):
        g = grid_state(GridSpec(rows=1, cols=1))
        assert len(g) == 1
        assert not g.edges


class TestCircle:
    """Radial wedge states."""

    def test_wedge_ids(self):
        assert wedge_id(7, 360) == "w007"
        assert wedge_id(7, 12) == "w007"
        assert wedge_id(7, 10000) == "w0007"

    def test_circle_is_a_cycle(self):
        g = circle_state(12)
        assert len(g) == 12
        assert len(g.edges) == 12
        assert g.neighbors("w000") == ["w001", "w011"]
        assert g.total_area == pytest.approx(1.0)

    def test_too_few_wedges(self):
        with pytest.raises(SynthError):
            circle_state(2)

    def test_radial_plan_arcs(self):
        plan = radial_plan(12, 3, offset=2)
        assert plan.members(0) == ["w002", "w003", "w004", "w005"]
        assert sorted(plan.members(2)) == ["w000", "w001", "w010", "w011"]

    def test_radial_plans_are_valid(self):
        g = circle_state(360)
        for offset in (0, 17, 359):
            assert validate_plan(g, radial_plan(360, 4, offset)) == []

    def test_district_count_must_divide(self):
        with pytest.raises(SynthError):
            radial_plan(10, 3)

    def test_offset_out_of_range(self):
        with pytest.raises(SynthError):
            radial_plan(12, 3, offset=12)

    @pytest.mark.parametrize(
        "offset_b,expected",
        [(0, 1.0), (45, 0.5), (10, 8 / 9), (80, 8 / 9), (90, 1.0), (135, 0.5)],
    )
    def test_closed_form(self, offset_b, expected):
        assert radial_similarity(360, 4, 0, offset_b) == pytest.approx(expected)
