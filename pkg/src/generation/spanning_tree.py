"""Random spanning trees over merged district clusters and their cuts.

Trees are rooted at the lexicographically smallest precinct id and carry the
population of every rooted subtree, so each of the |nodes| - 1 cuts is
evaluated in constant time after one pass.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from src.generation.rng import ChainRNG
from src.models.graph import DualGraph
from src.utils.exceptions import GenerationError

logger = logging.getLogger(__name__)


class TreeSampler(Enum):
    """How random spanning trees are drawn."""

    MST = "mst"  # minimum spanning tree of iid uniform edge weights
    UNIFORM = "uniform"  # Wilson's loop-erased random walk


@dataclass(frozen=True)
class SpanningTree:
    """A rooted spanning tree of a precinct subset.

    Attributes:
        root: Lexicographically smallest precinct id
        parent: Precinct id -> parent id (None for the root)
        order: Breadth-first order from the root
        subtree_weight: Precinct id -> population of its rooted subtree
    """

    root: str
    parent: Dict[str, Optional[str]]
    order: Tuple[str, ...]
    subtree_weight: Dict[str, int]

    @property
    def nodes(self) -> Set[str]:
        return set(self.parent)

    @property
    def total_weight(self) -> int:
        return self.subtree_weight[self.root]

    def __len__(self) -> int:
        return len(self.order)

    def edges(self) -> List[Tuple[str, str]]:
        """(parent, child) pairs in breadth-first order of the child."""
        return [(self.parent[child], child) for child in self.order[1:]]  # type: ignore[misc]

    def children(self) -> Dict[str, List[str]]:
        result: Dict[str, List[str]] = {node: [] for node in self.order}
        for child in self.order[1:]:
            result[self.parent[child]].append(child)  # type: ignore[index]
        return result

    def subtree(self, node: str) -> Set[str]:
        """All precincts in the rooted subtree below (and including) node."""
        children = self.children()
        found = {node}
        stack = [node]
        while stack:
            for child in children[stack.pop()]:
                found.add(child)
                stack.append(child)
        return found


@dataclass(frozen=True)
class CutResult:
    """Removal of one tree edge.

    Attributes:
        parent: Parent endpoint of the removed edge
        child: Child endpoint; its subtree is one side of the split
        gap: |child_weight - rest_weight|
        child_weight: Population of the child's subtree
        rest_weight: Population of the remaining nodes
    """

    parent: str
    child: str
    gap: int
    child_weight: int
    rest_weight: int

    @property
    def edge(self) -> Tuple[str, str]:
        return (self.parent, self.child)


def build_tree(g: DualGraph, nodes: Sequence[str], edges: Iterable[Tuple[str, str]]) -> SpanningTree:
    """Root a spanning tree given as an edge list and compute subtree weights.

    Raises:
        GenerationError: If the edges do not form a spanning tree of nodes
    """
    node_list = sorted(set(nodes))
    adjacency: Dict[str, List[str]] = {node: [] for node in node_list}
    edge_count = 0
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
        edge_count += 1
    if edge_count != len(node_list) - 1:
        raise GenerationError(
            f"Edge list has {edge_count} edges; a spanning tree of {len(node_list)} nodes needs "
            f"{len(node_list) - 1}"
        )

    root = node_list[0]
    parent: Dict[str, Optional[str]] = {root: None}
    order: List[str] = [root]
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for other in sorted(adjacency[node]):
            if other not in parent:
                parent[other] = node
                order.append(other)
                queue.append(other)
    if len(order) != len(node_list):
        raise GenerationError("Edge list does not connect every node of the tree")

    subtree_weight = {node: g.population_of(node) for node in order}
    for node in reversed(order[1:]):
        subtree_weight[parent[node]] += subtree_weight[node]  # type: ignore[index]

    return SpanningTree(root=root, parent=parent, order=tuple(order), subtree_weight=subtree_weight)


def _mst_edges(sub: nx.Graph, rng: ChainRNG) -> List[Tuple[str, str]]:
    edges = sorted(tuple(sorted(edge)) for edge in sub.edges())
    draws = rng.uniform_array(len(edges))
    weighted = nx.Graph()
    weighted.add_nodes_from(sorted(sub.nodes()))
    for (u, v), weight in zip(edges, draws):
        weighted.add_edge(u, v, weight=float(weight))
    return list(nx.minimum_spanning_edges(weighted, algorithm="kruskal", weight="weight", data=False))


def _wilson_edges(sub: nx.Graph, rng: ChainRNG) -> List[Tuple[str, str]]:
    node_list = sorted(sub.nodes())
    neighbors = {node: sorted(sub.neighbors(node)) for node in node_list}
    root = rng.choice(node_list)
    in_tree = {root}
    next_node: Dict[str, str] = {}
    for start in node_list:
        u = start
        while u not in in_tree:
            next_node[u] = rng.choice(neighbors[u])
            u = next_node[u]
        u = start
        while u not in in_tree:
            in_tree.add(u)
            u = next_node[u]
    return [(node, next_node[node]) for node in node_list if node != root]


def random_spanning_tree(
    g: DualGraph,
    nodes: Iterable[str],
    rng: ChainRNG,
    sampler: "TreeSampler | str" = TreeSampler.MST,
) -> SpanningTree:
    """Draw a random spanning tree of the subgraph induced by nodes.

    With the MST sampler each induced edge (in sorted order) receives an iid
    uniform weight and the minimum spanning tree is returned; the UNIFORM
    sampler draws from the uniform distribution over spanning trees.

    Raises:
        GenerationError: If nodes is empty or induces a disconnected subgraph
    """
    sampler = TreeSampler(sampler) if isinstance(sampler, str) else sampler
    node_list = sorted(set(nodes))
    if not node_list:
        raise GenerationError("Cannot draw a spanning tree of an empty node set")
    sub = g.induced_subgraph(node_list)
    if not nx.is_connected(sub):
        raise GenerationError(
            f"Induced subgraph on {len(node_list)} precincts is disconnected",
            details={"components": nx.number_connected_components(sub)},
        )

    if sampler is TreeSampler.MST:
        edges = _mst_edges(sub, rng)
    else:
        edges = _wilson_edges(sub, rng)
    return build_tree(g, node_list, edges)


def _cut_at(tree: SpanningTree, child: str) -> CutResult:
    child_weight = tree.subtree_weight[child]
    rest_weight = tree.total_weight - child_weight
    return CutResult(
        parent=tree.parent[child],  # type: ignore[arg-type]
        child=child,
        gap=abs(child_weight - rest_weight),
        child_weight=child_weight,
        rest_weight=rest_weight,
    )


def all_cuts(tree: SpanningTree) -> List[CutResult]:
    """Every single-edge cut of the tree, in breadth-first order."""
    return [_cut_at(tree, child) for child in tree.order[1:]]


def best_cut(t: SpanningTree, g: Optional[DualGraph] = None) -> CutResult:
    """The tree edge whose removal best equalizes the two sides' populations.

    Ties are broken by the smaller (parent_id, child_id) pair.

    Raises:
        GenerationError: If the tree has a single node
    """
    if len(t) < 2:
        raise GenerationError("A single-node tree has no edge to cut", details={"root": t.root})
    if g is not None and t.root not in g:
        raise GenerationError(f"Tree root '{t.root}' is not a precinct of the graph")
    return min(all_cuts(t), key=lambda cut: (cut.gap, cut.parent, cut.child))


def first_acceptable_cut(t: SpanningTree, epsilon: float) -> Optional[CutResult]:
    """First edge in breadth-first order whose sides are within epsilon of half.

    A cut qualifies when gap <= epsilon * total_weight, i.e. each side is
    within epsilon of total_weight / 2 in relative terms. Returns None when
    no edge qualifies.
    """
    if len(t) < 2:
        raise GenerationError("A single-node tree has no edge to cut", details={"root": t.root})
    limit = epsilon * t.total_weight
    for child in t.order[1:]:
        cut = _cut_at(t, child)
        if cut.gap <= limit:
            return cut
    return None
