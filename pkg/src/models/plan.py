"""Districting plan model and plan-level graph operations.

A Plan is a total assignment of precinct ids to dense district indices
0..m-1. External district labels (as read from a plan file) are retained
alongside so they can be written back unchanged.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.models.graph import DualGraph, WeightKind
from src.utils.exceptions import PlanValidationError
from src.utils.validation import sort_district_labels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Plan:
    """A districting plan.

    Attributes:
        assignment: Precinct id -> district index (0-based, dense)
        num_districts: Number of districts m
        labels: External label for each district index (defaults to "0".."m-1")
    """

    assignment: Dict[str, int]
    num_districts: int
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        """Validate plan structure after initialization.

        Coverage, emptiness and contiguity are graph-relative and are left
        to validate_plan.
        """
        if isinstance(self.num_districts, bool) or not isinstance(self.num_districts, int):
            raise TypeError(f"num_districts must be an integer, got {type(self.num_districts)}")
        if self.num_districts < 1:
            raise PlanValidationError(
                f"num_districts must be positive, got {self.num_districts}"
            )

        assignment = dict(self.assignment)
        for precinct_id, district in assignment.items():
            if isinstance(district, (bool, np.bool_)) or not isinstance(
                district, (int, np.integer)
            ):
                raise TypeError(
                    f"District of precinct '{precinct_id}' must be an integer, got {type(district)}"
                )
            if not 0 <= district < self.num_districts:
                raise PlanValidationError(
                    f"District {district} of precinct '{precinct_id}' is outside "
                    f"0..{self.num_districts - 1}",
                    details={"precinct_id": precinct_id},
                )
            assignment[precinct_id] = int(district)
        object.__setattr__(self, "assignment", assignment)

        labels = tuple(str(label) for label in self.labels) or tuple(
            str(i) for i in range(self.num_districts)
        )
        if len(labels) != self.num_districts:
            raise PlanValidationError(
                f"Plan has {self.num_districts} districts but {len(labels)} labels"
            )
        if len(set(labels)) != len(labels):
            raise PlanValidationError("District labels must be unique")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labeled: Mapping[str, str]) -> "Plan":
        """Build a plan from arbitrary external labels, densifying them.

        Integer-like labels are ordered numerically, others lexicographically;
        the dense index of a label is its position in that order.
        """
        order = sort_district_labels(str(v) for v in labeled.values())
        if not order:
            raise PlanValidationError("Plan assignment is empty")
        dense = {label: i for i, label in enumerate(order)}
        return cls(
            assignment={pid: dense[str(label)] for pid, label in labeled.items()},
            num_districts=len(order),
            labels=tuple(order),
        )

    @classmethod
    def from_districts(cls, districts: Sequence[Iterable[str]]) -> "Plan":
        """Build a plan from a list of precinct-id groups; group i is district i."""
        assignment: Dict[str, int] = {}
        for district, members in enumerate(districts):
            for precinct_id in members:
                assignment[precinct_id] = district
        return cls(assignment=assignment, num_districts=len(districts))

    def district_of(self, precinct_id: str) -> int:
        return self.assignment[precinct_id]

    def members(self, district: int) -> List[str]:
        """Precinct ids assigned to a district, in assignment order."""
        return [pid for pid, d in self.assignment.items() if d == district]

    def districts(self) -> List[List[str]]:
        """All districts as lists of precinct ids."""
        groups: List[List[str]] = [[] for _ in range(self.num_districts)]
        for precinct_id, district in self.assignment.items():
            groups[district].append(precinct_id)
        return groups

    def external_assignment(self) -> Dict[str, str]:
        """Precinct id -> external district label."""
        return {pid: self.labels[d] for pid, d in self.assignment.items()}

    def with_assignment(self, assignment: Mapping[str, int]) -> "Plan":
        """Copy of this plan with a new assignment and the same labels."""
        return Plan(assignment=dict(assignment), num_districts=self.num_districts, labels=self.labels)

    def with_labels(self, labels: Sequence[str]) -> "Plan":
        """Copy of this plan with different external labels."""
        return Plan(assignment=self.assignment, num_districts=self.num_districts, labels=tuple(labels))

    def renumbered(self, new_index: Sequence[int], labels: Optional[Sequence[str]] = None) -> "Plan":
        """Move district j to index new_index[j]; membership is unchanged.

        Args:
            new_index: A permutation of 0..m-1
            labels: External labels for the result (default "0".."m-1")
        """
        if sorted(new_index) != list(range(self.num_districts)):
            raise PlanValidationError(
                f"Renumbering must be a permutation of 0..{self.num_districts - 1}"
            )
        return Plan(
            assignment={pid: int(new_index[d]) for pid, d in self.assignment.items()},
            num_districts=self.num_districts,
            labels=tuple(labels) if labels is not None else (),
        )

    def __len__(self) -> int:
        return len(self.assignment)

    def __str__(self) -> str:
        return f"Plan({self.num_districts} districts, {len(self.assignment)} precincts)"


class ViolationKind(Enum):
    """Kinds of plan invariant failures."""

    MISSING_PRECINCT = "missing_precinct"
    UNKNOWN_PRECINCT = "unknown_precinct"
    EMPTY_DISTRICT = "empty_district"
    DISCONTIGUOUS_DISTRICT = "discontiguous_district"


@dataclass(frozen=True)
class PlanViolation:
    """One failed plan invariant.

    Attributes:
        kind: What failed
        precinct_id: Offending precinct for coverage failures
        district: Offending district index for district failures
        components: Connected component count for discontiguous districts
    """

    kind: ViolationKind
    precinct_id: Optional[str] = None
    district: Optional[int] = None
    components: Optional[int] = None

    @property
    def message(self) -> str:
        if self.kind is ViolationKind.MISSING_PRECINCT:
            return f"precinct '{self.precinct_id}' is not assigned to any district"
        if self.kind is ViolationKind.UNKNOWN_PRECINCT:
            return f"precinct '{self.precinct_id}' is not in the graph"
        if self.kind is ViolationKind.EMPTY_DISTRICT:
            return f"district {self.district} is empty"
        return f"district {self.district} is discontiguous ({self.components} components)"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "precinct_id": self.precinct_id,
            "district": self.district,
            "components": self.components,
            "message": self.message,
        }

    def __str__(self) -> str:
        return self.message


def validate_plan(g: DualGraph, p: Plan) -> List[PlanViolation]:
    """Check a plan against a graph.

    Returns an empty list iff every precinct of g is assigned exactly once,
    no assigned precinct is unknown to g, every district is nonempty and
    every district induces a connected subgraph.
    """
    violations: List[PlanViolation] = []

    for precinct_id in g.ids:
        if precinct_id not in p.assignment:
            violations.append(
                PlanViolation(ViolationKind.MISSING_PRECINCT, precinct_id=precinct_id)
            )
    for precinct_id in p.assignment:
        if precinct_id not in g:
            violations.append(
                PlanViolation(ViolationKind.UNKNOWN_PRECINCT, precinct_id=precinct_id)
            )

    members: List[List[str]] = [[] for _ in range(p.num_districts)]
    for precinct_id, district in p.assignment.items():
        if precinct_id in g:
            members[district].append(precinct_id)

    for district, nodes in enumerate(members):
        if not nodes:
            violations.append(PlanViolation(ViolationKind.EMPTY_DISTRICT, district=district))
            continue
        components = nx.number_connected_components(g.induced_subgraph(nodes))
        if components > 1:
            violations.append(
                PlanViolation(
                    ViolationKind.DISCONTIGUOUS_DISTRICT,
                    district=district,
                    components=components,
                )
            )

    if violations:
        logger.debug("Plan validation found %d violation(s)", len(violations))
    return violations


def require_valid_plan(g: DualGraph, p: Plan) -> None:
    """Raise PlanValidationError unless validate_plan(g, p) is empty."""
    violations = validate_plan(g, p)
    if violations:
        raise PlanValidationError(
            f"Invalid plan: {violations[0].message}"
            + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""),
            violations=violations,
        )


def district_weights(
    g: DualGraph, p: Plan, kind: "WeightKind | str", validate: bool = True
) -> np.ndarray:
    """Sum of precinct weight per district.

    Args:
        g: Dual graph
        p: Plan valid on g
        kind: area or population
        validate: Run plan validation first (callers that already
            validated may skip it)

    Returns:
        Float vector of length m; entries sum to the graph total

    Raises:
        PlanValidationError: If the plan is invalid on g
    """
    kind = WeightKind.parse(kind)
    if validate:
        require_valid_plan(g, p)
    return np.bincount(
        g.labels_array(p.assignment),
        weights=g.weights(kind).astype(np.float64),
        minlength=p.num_districts,
    )


def population_deviation(g: DualGraph, p: Plan, validate: bool = True) -> float:
    """Maximum relative deviation of district population from the ideal.

    Returns max_i |pop_i - ideal| / ideal with ideal = total_population / m;
    0.0 for a perfectly balanced plan (and for a zero-population graph).
    """
    populations = district_weights(g, p, WeightKind.POPULATION, validate=validate)
    if g.total_population == 0:
        logger.warning("Graph has zero total population; deviation reported as 0")
        return 0.0
    ideal = g.total_population / p.num_districts
    return float(np.max(np.abs(populations - ideal)) / ideal)
