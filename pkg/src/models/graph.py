"""Precinct dual graph model.

This module defines the Precinct and DualGraph classes. A DualGraph is the
adjacency graph of a state's precincts; every node carries the area and
population that the similarity measure sums over.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np

from src.utils.exceptions import GraphValidationError
from src.utils.validation import validate_area, validate_population

logger = logging.getLogger(__name__)


class WeightKind(Enum):
    """Precinct quantity summed by district weights and intersections."""

    AREA = "area"
    POPULATION = "population"

    @classmethod
    def parse(cls, value: "str | WeightKind") -> "WeightKind":
        """Accept either an enum member or its string value."""
        if isinstance(value, WeightKind):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as e:
            raise ValueError(
                f"Weight kind must be one of {[k.value for k in cls]}, got '{value}'"
            ) from e


@dataclass(frozen=True)
class Precinct:
    """A single precinct (or smaller census unit).

    Attributes:
        id: Opaque identifier, unique within a graph
        area: Nonnegative area (square units, unit-agnostic)
        population: Nonnegative person count
    """

    id: str
    area: float = 0.0
    population: int = 0

    def __post_init__(self) -> None:
        """Validate precinct data after initialization."""
        if not isinstance(self.id, str) or not self.id:
            raise GraphValidationError(
                f"Precinct id must be a non-empty string, got {self.id!r}"
            )
        try:
            object.__setattr__(self, "area", validate_area(self.area, self.id))
            validate_population(self.population, self.id)
        except (TypeError, ValueError) as e:
            raise GraphValidationError(str(e), node_id=self.id) from e

    def weight(self, kind: WeightKind) -> float:
        """Return the precinct quantity for a weight kind."""
        return self.area if kind is WeightKind.AREA else float(self.population)


Edge = Tuple[str, str]


def _edge_key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class DualGraph:
    """Precinct adjacency graph.

    Edges are unordered precinct-id pairs (rook adjacency). The graph must be
    connected. Totals are computed on construction and cached alongside the
    position index and the numpy weight vectors used by the similarity code.

    Attributes:
        precincts: Precincts in graph order
        edges: Unordered adjacency pairs, each stored as (smaller id, larger id)
        total_area: Sum of precinct areas
        total_population: Sum of precinct populations
    """

    precincts: Tuple[Precinct, ...]
    edges: FrozenSet[Edge]
    total_area: float = field(init=False)
    total_population: int = field(init=False)
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _nx: nx.Graph = field(init=False, repr=False, compare=False)
    _areas: np.ndarray = field(init=False, repr=False, compare=False)
    _populations: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, precincts: Iterable[Precinct], edges: Iterable[Sequence[str]]) -> None:
        """Build and validate a dual graph.

        Args:
            precincts: Precincts in the order they should be indexed
            edges: Adjacent precinct-id pairs (orientation irrelevant)

        Raises:
            GraphValidationError: On duplicate ids, dangling endpoints,
                self-loops, or a disconnected graph
        """
        precinct_tuple = tuple(precincts)
        if not precinct_tuple:
            raise GraphValidationError("Graph must contain at least one precinct")

        index: Dict[str, int] = {}
        for position, precinct in enumerate(precinct_tuple):
            if not isinstance(precinct, Precinct):
                raise GraphValidationError(
                    f"Graph nodes must be Precinct objects, got {type(precinct)}"
                )
            if precinct.id in index:
                raise GraphValidationError(
                    f"Duplicate precinct id '{precinct.id}'", node_id=precinct.id
                )
            index[precinct.id] = position

        edge_set = set()
        for pair in edges:
            if len(pair) != 2:
                raise GraphValidationError(f"Edge must have exactly two endpoints, got {pair!r}")
            u, v = str(pair[0]), str(pair[1])
            for endpoint in (u, v):
                if endpoint not in index:
                    raise GraphValidationError(
                        f"Edge ({u}, {v}) references unknown precinct '{endpoint}'",
                        node_id=endpoint,
                    )
            if u == v:
                raise GraphValidationError(f"Self-loop on precinct '{u}'", node_id=u)
            edge_set.add(_edge_key(u, v))

        graph = nx.Graph()
        graph.add_nodes_from(p.id for p in precinct_tuple)
        graph.add_edges_from(sorted(edge_set))

        if not nx.is_connected(graph):
            representatives = sorted(min(c) for c in nx.connected_components(graph))
            raise GraphValidationError(
                f"Graph is disconnected: {len(representatives)} components "
                f"(one precinct each: {', '.join(representatives)})",
                details={"components": representatives},
            )

        areas = np.array([p.area for p in precinct_tuple], dtype=np.float64)
        populations = np.array([p.population for p in precinct_tuple], dtype=np.int64)

        object.__setattr__(self, "precincts", precinct_tuple)
        object.__setattr__(self, "edges", frozenset(edge_set))
        object.__setattr__(self, "total_area", float(areas.sum()))
        object.__setattr__(self, "total_population", int(populations.sum()))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_nx", graph)
        object.__setattr__(self, "_areas", areas)
        object.__setattr__(self, "_populations", populations)

        logger.debug(
            "DualGraph built: %d precincts, %d edges, area %.6g, population %d",
            len(precinct_tuple),
            len(edge_set),
            self.total_area,
            self.total_population,
        )

    def __len__(self) -> int:
        return len(self.precincts)

    def __contains__(self, precinct_id: object) -> bool:
        return precinct_id in self._index

    @property
    def ids(self) -> List[str]:
        """Precinct ids in graph order."""
        return [p.id for p in self.precincts]

    def position(self, precinct_id: str) -> int:
        """Index of a precinct in graph order."""
        return self._index[precinct_id]

    def precinct(self, precinct_id: str) -> Precinct:
        """Look up a precinct by id."""
        return self.precincts[self._index[precinct_id]]

    def neighbors(self, precinct_id: str) -> List[str]:
        """Adjacent precinct ids, sorted."""
        return sorted(self._nx.neighbors(precinct_id))

    def weights(self, kind: WeightKind) -> np.ndarray:
        """Per-precinct weight vector (graph order) for a weight kind."""
        if kind is WeightKind.AREA:
            return self._areas
        return self._populations

    def total(self, kind: WeightKind) -> float:
        """Graph total for a weight kind."""
        return self.total_area if kind is WeightKind.AREA else float(self.total_population)

    def population_of(self, precinct_id: str) -> int:
        return int(self._populations[self._index[precinct_id]])

    def labels_array(self, assignment: Mapping[str, int]) -> np.ndarray:
        """District labels in graph order for a complete assignment.

        Raises:
            KeyError: If a graph precinct is missing from the assignment
        """
        return np.fromiter(
            (assignment[p.id] for p in self.precincts), dtype=np.int64, count=len(self.precincts)
        )

    def induced_subgraph(self, nodes: Iterable[str]) -> nx.Graph:
        """Subgraph induced by a set of precinct ids (a view)."""
        return self._nx.subgraph(nodes)

    def to_dict(self) -> dict:
        """Node-link JSON representation."""
        return {
            "nodes": [
                {"id": p.id, "area": p.area, "population": p.population}
                for p in self.precincts
            ],
            "edges": [list(edge) for edge in sorted(self.edges)],
        }

    def __str__(self) -> str:
        return (
            f"DualGraph({len(self.precincts)} precincts, {len(self.edges)} edges, "
            f"area={self.total_area:g}, population={self.total_population})"
        )
