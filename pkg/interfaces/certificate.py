from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from interfaces.ks import NCModelCertificate
from utils.rational import Rational


class SICCertificate(BaseModel):
    weights: List[Rational] = Field(description="Normalized weights: sum of w_i Pi_i >= 1 and alpha(G, w) = y < 1.")
    y: Rational = Field(description="Largest independent-set weight, strictly below 1.")
    lambda_min: float = Field(description="Minimum eigenvalue of sum_i w_i Pi_i for the normalized weights.")
    normalized: bool = Field(description="True when the input weights already satisfied both conditions as given.")
    scale: Rational = Field(description="Factor applied to the input weights to obtain these weights.")


class Rejection(BaseModel):
    reason: str
    lambda_min: float
    alpha: Rational


class GapReport(BaseModel):
    weights: List[Rational] = Field(description="Optimized weights, rationalized, scaled so that alpha(G, w) = 1.")
    classical: Rational = Field(description="alpha(G, w), exact.")
    quantum_floor: float = Field(description="Minimum eigenvalue of sum_i w_i Pi_i.")
    ratio: float = Field(description="quantum_floor / classical for the returned weights.")
    upper_bound: float = Field(description="Optimal value of the SDP relaxation; no weights can beat it.")
    verdict: Literal["sic", "not_sic", "inconclusive"]
    solver_gap: float = Field(default=0.0, description="Primal-dual gap of the last SDP solve.")
    constraints: int = Field(default=0, description="Independent-set constraints in the final SDP.")


class SICRefutation(BaseModel):
    method: Literal["chi_f", "sdp_bound"]
    d: int
    chi_f: Optional[Rational] = Field(default=None, description="Fractional chromatic number, when it is <= d.")
    nc_model: Optional[NCModelCertificate] = Field(
        default=None, description="Global model with marginals 1/d, re-checkable exactly.",
    )
    upper_bound: Optional[float] = Field(default=None, description="SDP bound on the best achievable ratio, < 1.")


class SICVerdict(BaseModel):
    verdict: Literal["yes", "no", "inconclusive"]
    certificate: Optional[SICCertificate] = None
    refutation: Optional[SICRefutation] = None
    gap: Optional[GapReport] = None

    @property
    def exit_code(self) -> int:
        return {"yes": 0, "no": 1, "inconclusive": 2}[self.verdict]


class DeletionCheck(BaseModel):
    vertex: int
    label: str
    verdict: Literal["yes", "no", "inconclusive"]
    refutation: Optional[SICRefutation] = None


class SICCriticality(BaseModel):
    verdict: Literal["yes", "no", "inconclusive"] = Field(description="yes means critical SI-C.")
    whole: SICVerdict
    deletions: List[DeletionCheck] = Field(default_factory=list)

    @property
    def critical(self) -> bool:
        return self.verdict == "yes"


class EgalitarianResult(BaseModel):
    egalitarian: bool
    lam: Optional[float] = Field(default=None, description="lambda with sum_i w_i Pi_i = lambda * 1, when egalitarian.")
    spread: float = Field(description="max eigenvalue - min eigenvalue.")
    spectrum: List[float]


class StateAudit(BaseModel):
    states: int
    minimum: float
    maximum: float
    spread: float
    bound: Rational
    violated_by_all: bool
