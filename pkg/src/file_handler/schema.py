"""
Pydantic models for graph files and run manifests.
"""
from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.ensemble.runner import EnsembleConfig
from src.models.graph import DualGraph, Precinct

MANIFEST_TOOL = "plansim"


def _coerce_id(v: Any) -> Any:
    """Accept integer ids in graph files; everything else must be a string."""
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return v


class NodeSchema(BaseModel):
    """Model for a single node of a graph file."""

    id: str = Field(..., min_length=1, description="Precinct id")
    area: float = Field(default=0.0, description="Precinct area, checked by Precinct")
    population: int = Field(default=0, description="Precinct population, checked by Precinct")

    @field_validator("id", mode="before")
    @classmethod
    def coerce_id(cls, v: Any) -> Any:
        return _coerce_id(v)

    @field_validator("population", mode="before")
    @classmethod
    def reject_bool(cls, v: Any) -> Any:
        if isinstance(v, bool):
            raise ValueError("population must be an integer, got a boolean")
        return v

    model_config = ConfigDict(extra="ignore")


class GraphFileSchema(BaseModel):
    """Model for a complete graph file: nodes plus undirected edges."""

    nodes: List[NodeSchema] = Field(..., min_length=1, description="Precincts in graph order")
    edges: List[Tuple[str, str]] = Field(default_factory=list, description="Adjacent id pairs")

    @field_validator("edges", mode="before")
    @classmethod
    def coerce_edges(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [
                [_coerce_id(x) for x in pair] if isinstance(pair, (list, tuple)) else pair
                for pair in v
            ]
        return v

    model_config = ConfigDict(extra="ignore")

    def to_graph(self) -> DualGraph:
        """Build the DualGraph; semantic checks happen in its constructor."""
        precincts = [Precinct(id=n.id, area=n.area, population=n.population) for n in self.nodes]
        return DualGraph(precincts, self.edges)

    @classmethod
    def from_graph(cls, g: DualGraph) -> "GraphFileSchema":
        return cls(
            nodes=[NodeSchema(id=p.id, area=p.area, population=p.population) for p in g.precincts],
            edges=sorted(g.edges),
        )


class ManifestTimings(BaseModel):
    """Wall-clock timings of an ensemble run."""

    total_seconds: float = Field(..., ge=0.0)
    chains_seconds: List[float] = Field(default_factory=list)


class RunManifest(BaseModel):
    """Everything needed to reproduce an ensemble run bit-identically."""

    tool: str = Field(default=MANIFEST_TOOL)
    tool_version: str
    created_at: str = Field(..., description="UTC ISO-8601 timestamp")
    graph_path: str
    graph_sha256: str = Field(..., min_length=64, max_length=64)
    config: EnsembleConfig
    chain_seeds: List[int]
    plan_files: List[str]
    timings: ManifestTimings

    @field_validator("chain_seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        if len(v) != len(set(v)):
            raise ValueError("Chain seeds must be distinct")
        return v

    model_config = ConfigDict(extra="ignore")
