from fractions import Fraction
from typing import List, Optional, Sequence

from pydantic import BaseModel, Field

from interfaces.graph import WeightedGraph
from utils.rational import Rational


class EdgeCoefficient(BaseModel):
    i: int
    j: int
    coeff: Rational = Field(description="max(w_i, w_j).")


class BellTerm(BaseModel):
    alice: int = Field(description="Alice's projector index.")
    bob: int = Field(description="Bob's projector index.")
    coeff: Rational = Field(description="Coefficient of P(Pi_alice^A = 1, Pi_bob^B = 1).")


class Provenance(BaseModel):
    source_hash: Optional[str] = None
    weights: List[Rational] = Field(default_factory=list)


class NCInequality(BaseModel):
    graph: WeightedGraph
    vertex_coeffs: List[Rational]
    edge_coeffs: List[EdgeCoefficient]
    bound: Rational = Field(description="alpha(G, w).")
    bound_witness: List[int] = Field(default_factory=list)
    provenance: Provenance = Field(default_factory=Provenance)

    def lhs(self, values: Sequence[int]) -> Fraction:
        """Left-hand side for a deterministic 0/1 assignment."""
        total = sum((c for c, a in zip(self.vertex_coeffs, values) if a), Fraction(0))
        return total - sum((e.coeff for e in self.edge_coeffs if values[e.i] and values[e.j]), Fraction(0))


class BellInequality(NCInequality):
    terms: List[BellTerm] = Field(
        description="Diagonal terms (i, i) with w_i and both orderings of every edge with -max(w_i, w_j)/2.",
    )

    def lhs_local(self, alice: Sequence[int], bob: Sequence[int]) -> Fraction:
        return sum((t.coeff for t in self.terms if alice[t.alice] and bob[t.bob]), Fraction(0))


class BoundResult(BaseModel):
    value: Rational
    witness: List[int] = Field(description="Maximizing assignment (Alice's, for the Bell flavor).")
    bob_witness: Optional[List[int]] = None


class GameQuestion(BaseModel):
    alice: int
    bob: int
    probability: Rational
    reward_on_both_one: bool = Field(
        description="True: win iff both output 1. False: win unless both output 1.",
    )


class GameSpec(BaseModel):
    questions: List[GameQuestion]
    scale: Rational = Field(description="Z = sum |coeff|; inequality value = Z * game value - offset.")
    offset: Rational = Field(description="N = sum of |coeff| over negative terms.")
    classical_value: Rational = Field(description="(alpha + N) / Z.")
    quantum_value: Optional[float] = Field(default=None, description="(quantum LHS + N) / Z for the entangled strategy.")

    def game_value(self, inequality_value) -> float:
        return (inequality_value + self.offset) / self.scale

    def inequality_value(self, game_value) -> float:
        return game_value * self.scale - self.offset

    def strategy_value(self, alice: Sequence[int], bob: Sequence[int]) -> Fraction:
        """Exact winning probability of a deterministic strategy."""
        total = Fraction(0)
        for q in self.questions:
            both = bool(alice[q.alice]) and bool(bob[q.bob])
            if both == q.reward_on_both_one:
                total += q.probability
        return total


class SamplingResult(BaseModel):
    estimate: float
    stderr: float
    rounds: int
    seed: int


class SequentialSamplingResult(BaseModel):
    nc_estimate: float
    nc_stderr: float
    bell_estimate: float
    bell_stderr: float
    rounds: int
    seed: int
