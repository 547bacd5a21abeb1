from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, Field

from utils.rational import Rational


class RationalLPResult(BaseModel):
    optimum: Rational = Field(description="Exact optimum of max c.x s.t. A x <= b, x >= 0.")
    primal: List[Rational] = Field(description="Optimal primal solution x.")
    dual: List[Rational] = Field(description="Optimal dual solution y >= 0 with A^T y >= c and b.y = optimum.")
    pivots: int = Field(default=0, description="Number of simplex pivots performed.")

    def verify(self, A: List[List[Fraction]], b: List[Fraction], c: List[Fraction]) -> bool:
        """Exact re-check of primal feasibility, dual feasibility and equal objectives."""
        m, n = len(b), len(c)
        if len(self.primal) != n or len(self.dual) != m:
            return False
        if any(x < 0 for x in self.primal) or any(y < 0 for y in self.dual):
            return False
        for i in range(m):
            if sum((A[i][j] * self.primal[j] for j in range(n)), Fraction(0)) > b[i]:
                return False
        for j in range(n):
            if sum((A[i][j] * self.dual[i] for i in range(m)), Fraction(0)) < c[j]:
                return False
        primal_value = sum((c[j] * self.primal[j] for j in range(n)), Fraction(0))
        dual_value = sum((b[i] * self.dual[i] for i in range(m)), Fraction(0))
        return primal_value == dual_value == self.optimum


class IndependenceResult(BaseModel):
    value: Rational = Field(description="Weighted independence number alpha(G, w).")
    witness: List[int] = Field(description="A maximizing independent set, lowest-index-first optimum.")


class ColoringResult(BaseModel):
    chi: int = Field(ge=0, description="Chromatic number.")
    coloring: List[int] = Field(description="Color of every vertex, colors 0..chi-1.")
    lower_bound: int = Field(description="Bound proved before the search: max(clique size, ceil(chi_f)).")


class FractionalColoringResult(BaseModel):
    value: Rational = Field(description="Fractional chromatic number chi_f.")
    independent_sets: List[List[int]] = Field(description="Independent sets carrying the covering weights.")
    cover_weights: List[Rational] = Field(description="Weight y_I of each set; every vertex is covered at least once.")
    clique_weights: List[Rational] = Field(
        description="Fractional clique x_v: sum over every independent set <= 1 and sum of x equals the value.",
    )

    def verify(self, graph) -> bool:
        from agents.invariants import alpha

        if any(y < 0 for y in self.cover_weights) or any(x < 0 for x in self.clique_weights):
            return False
        coverage = [Fraction(0)] * graph.n
        for members, y in zip(self.independent_sets, self.cover_weights):
            if not graph.is_independent(members):
                return False
            for v in members:
                coverage[v] += y
        if any(c < 1 for c in coverage):
            return False
        if sum(self.cover_weights, Fraction(0)) != self.value or sum(self.clique_weights, Fraction(0)) != self.value:
            return False
        return graph.n == 0 or alpha(graph.with_weights(self.clique_weights)).value <= 1


class ThetaResult(BaseModel):
    value: float = Field(description="Lovasz number.")
    tolerance: float = Field(description="Reported accuracy of value.")
    gap: float = Field(description="Primal-dual gap reported by the SDP solver.")


class InvariantReport(BaseModel):
    n: int = Field(description="Vertex count of the graph.")
    alpha: Rational
    alpha_witness: List[int] = Field(default_factory=list)
    chi: Optional[int] = None
    coloring: Optional[List[int]] = None
    chi_f: Optional[Rational] = None
    theta: Optional[float] = None
    theta_tol: Optional[float] = None
    alpha_star: Optional[Rational] = None
    is_chordal: Optional[bool] = None
    has_odd_hole_or_antihole: Optional[bool] = None
    d: Optional[int] = Field(default=None, description="Dimension the necessary conditions are tested against.")
    chi_exceeds_d: Optional[bool] = None
    chi_f_exceeds_d: Optional[bool] = None

    def sandwich_holds(self) -> bool:
        tol = self.theta_tol or 0.0
        if self.theta is not None and self.alpha_star is not None:
            if not (float(self.alpha) <= self.theta + tol <= float(self.alpha_star) + 2 * tol):
                return False
        if self.chi is not None and self.chi_f is not None and self.chi_f > self.chi:
            return False
        return True
