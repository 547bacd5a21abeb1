from fractions import Fraction
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from interfaces.graph import WeightedGraph
from utils.rational import Rational


class KSInstance(BaseModel):
    graph: WeightedGraph
    bases: List[List[int]] = Field(
        default_factory=list,
        description="Designated complete bases: d-cliques whose projectors sum to the identity.",
    )
    d: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_bases(self):
        canonical = []
        for basis in self.bases:
            basis = sorted(basis)
            if len(basis) != self.d:
                raise ValueError(f"basis {basis} has {len(basis)} vertices, expected {self.d}")
            if not self.graph.is_clique(basis):
                raise ValueError(f"basis {basis} is not a clique")
            canonical.append(basis)
        self.bases = [list(b) for b in sorted({tuple(b) for b in canonical})]
        return self

    @property
    def n(self) -> int:
        return self.graph.n

    def delete_vertex(self, v: int) -> "KSInstance":
        """The instance without v. Bases through v are dropped as (II) constraints; their edges stay."""
        keep = [u for u in range(self.n) if u != v]
        index = {u: k for k, u in enumerate(keep)}
        graph = WeightedGraph(
            n=len(keep),
            edges=[(index[a], index[b]) for a, b in self.graph.edges if v not in (a, b)],
            weights=[self.graph.weights[u] for u in keep],
            labels=[self.graph.labels[u] for u in keep],
        )
        bases = [[index[u] for u in b] for b in self.bases if v not in b]
        return KSInstance(graph=graph, bases=bases, d=self.d)


class KSAssignment(BaseModel):
    values: List[int] = Field(description="0/1 value per vertex.")

    def dump(self) -> str:
        return "".join(str(v) for v in self.values)

    def satisfies(self, inst: KSInstance) -> bool:
        if len(self.values) != inst.n:
            return False
        if any(self.values[i] and self.values[j] for i, j in inst.graph.edges):
            return False
        return all(sum(self.values[v] for v in b) == 1 for b in inst.bases)


class KSSolveResult(BaseModel):
    mode: Literal["exists", "enumerate", "count"]
    exists: bool
    assignment: Optional[KSAssignment] = Field(default=None, description="First assignment found in exists mode.")
    assignments: Optional[List[KSAssignment]] = Field(default=None, description="All assignments, lexicographic order.")
    count: Optional[int] = None


class CriticalityReport(BaseModel):
    is_ks_set: bool
    is_critical: bool
    blocking_vertices: List[int] = Field(
        default_factory=list,
        description="Vertices whose deletion still leaves a KS set.",
    )


class NCModelCertificate(BaseModel):
    kind: Literal["feasible"] = "feasible"
    d: int
    support: List[List[int]] = Field(description="Independent sets (possibly empty) carrying probability.")
    mu: List[Rational] = Field(description="Probability of each support set.")

    def verify(self, graph: WeightedGraph) -> bool:
        if len(self.support) != len(self.mu) or any(m < 0 for m in self.mu):
            return False
        if sum(self.mu, Fraction(0)) != 1:
            return False
        marginal = [Fraction(0)] * graph.n
        for members, m in zip(self.support, self.mu):
            if not graph.is_independent(members):
                return False
            for v in members:
                marginal[v] += m
        return all(p == Fraction(1, self.d) for p in marginal)


class NCModelInfeasibility(BaseModel):
    kind: Literal["infeasible"] = "infeasible"
    d: int
    weights: List[Rational] = Field(description="Weights w with sum(w)/d > alpha(G, w).")
    alpha: Rational = Field(description="alpha(G, w) for the witness weights.")
    maxmixed_value: Rational = Field(description="sum(w)/d, the noncontextuality expression evaluated at the maximally mixed point.")

    def verify(self, graph: WeightedGraph) -> bool:
        from agents.invariants import alpha

        if len(self.weights) != graph.n or any(w < 0 for w in self.weights):
            return False
        value = sum(self.weights, Fraction(0)) / self.d
        a = alpha(graph.with_weights(self.weights)).value
        return value == self.maxmixed_value and a == self.alpha and value > a


class TIFSCheck(BaseModel):
    a: int
    b: int
    holds: bool
    counterexample: Optional[KSAssignment] = None

    def describe(self) -> Dict[str, object]:
        return {"A": self.a, "B": self.b, "holds": self.holds}
