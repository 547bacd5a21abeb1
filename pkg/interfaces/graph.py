from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from utils.rational import Rational


class WeightedGraph(BaseModel):
    n: int = Field(ge=0, description="Number of vertices, labelled 0..n-1.")
    edges: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="Unordered vertex pairs, stored as sorted (i, j) with i < j.",
    )
    weights: List[Rational] = Field(
        default_factory=list,
        description="Nonnegative rational vertex weights. Empty means all ones.",
    )
    labels: List[str] = Field(
        default_factory=list,
        description="Optional vertex labels. Empty means v0..v{n-1}.",
    )

    @model_validator(mode="after")
    def _normalize(self):
        canonical = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) has an endpoint outside 0..{self.n - 1}")
            canonical.add((min(i, j), max(i, j)))
        self.edges = sorted(canonical)
        if not self.weights:
            self.weights = [Fraction(1)] * self.n
        if len(self.weights) != self.n:
            raise ValueError(f"{len(self.weights)} weights for {self.n} vertices")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if not self.labels:
            self.labels = [f"v{i}" for i in range(self.n)]
        if len(self.labels) != self.n:
            raise ValueError(f"{len(self.labels)} labels for {self.n} vertices")
        return self

    @cached_property
    def edge_set(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def masks(self) -> List[int]:
        """Adjacency bitmasks; bit j of masks[i] is set iff {i, j} is an edge."""
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    @cached_property
    def nx_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set

    def neighbors(self, v: int) -> List[int]:
        mask = self.masks[v]
        return [u for u in range(self.n) if mask >> u & 1]

    def degree(self, v: int) -> int:
        return bin(self.masks[v]).count("1")

    def with_weights(self, weights: Sequence) -> "WeightedGraph":
        return WeightedGraph(n=self.n, edges=self.edges, weights=list(weights), labels=self.labels)

    def is_independent(self, vertices) -> bool:
        vs = list(vertices)
        return all(not self.has_edge(a, b) for k, a in enumerate(vs) for b in vs[k + 1:])

    def is_clique(self, vertices) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for k, a in enumerate(vs) for b in vs[k + 1:])

    def weight_of(self, vertices) -> Fraction:
        return sum((self.weights[v] for v in vertices), Fraction(0))

    def label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @classmethod
    def from_networkx(cls, g: nx.Graph, weights: Optional[List] = None, labels: Optional[List[str]] = None) -> "WeightedGraph":
        nodes = sorted(g.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        return cls(
            n=len(nodes),
            edges=[(index[a], index[b]) for a, b in g.edges()],
            weights=weights or [],
            labels=labels or [],
        )
