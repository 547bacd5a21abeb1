from typing import List, Optional

from pydantic import BaseModel, Field

from interfaces.certificate import GapReport, SICVerdict
from interfaces.gadget import ExtensionResult
from interfaces.inequality import (
    BellInequality,
    BoundResult,
    GameSpec,
    NCInequality,
    SamplingResult,
    SequentialSamplingResult,
)


class InputSummary(BaseModel):
    name: str
    dim: int
    n: int
    fingerprint: str
    edges: int
    is_chordal: bool
    has_odd_hole_or_antihole: bool


class QuantumValues(BaseModel):
    nc_maxmixed: float = Field(description="Noncontextuality LHS at the maximally mixed state.")
    bell_entangled: float = Field(description="Bell LHS at the maximally entangled state, Bob conjugated.")


class RemovalCheck(BaseModel):
    vertex: int
    label: str
    maxmixed_feasible: bool


class CrossCheck(BaseModel):
    name: str
    passed: bool
    skipped: bool = Field(default=False, description="The check could not run; a skipped check never passes.")
    detail: str = ""


class PipelineReport(BaseModel):
    input: InputSummary
    extension: Optional[ExtensionResult] = None
    certificate: Optional[SICVerdict] = None
    gap: Optional[GapReport] = None
    nc_inequality: Optional[NCInequality] = None
    bell_inequality: Optional[BellInequality] = None
    nchv: Optional[BoundResult] = None
    lhv: Optional[BoundResult] = None
    values: Optional[QuantumValues] = None
    game: Optional[GameSpec] = None
    removal_audit: List[RemovalCheck] = Field(default_factory=list)
    sampling: Optional[SamplingResult] = None
    sequential: Optional[SequentialSamplingResult] = None
    checks: List[CrossCheck] = Field(default_factory=list)
    failed_stage: Optional[str] = None
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failed_stage is None and all(c.passed for c in self.checks)

    def render_table(self) -> str:
        """Human-readable table; every number is read from the fields above."""
        rows = [
            ("input", f"{self.input.name} (d={self.input.dim}, n={self.input.n}, edges={self.input.edges})"),
            ("odd hole/antihole", str(self.input.has_odd_hole_or_antihole)),
        ]
        if self.extension is not None:
            rows.append(("step 1", f"{self.extension.method} -> {self.extension.vectors.n} vectors"))
        if self.certificate is not None:
            rows.append(("step 2 SI-C", self.certificate.verdict))
        if self.gap is not None:
            rows.append(("weights", ",".join(str(w) for w in self.gap.weights)))
            rows.append(("ratio", f"{self.gap.ratio:.9f}"))
        if self.nc_inequality is not None:
            rows.append(("alpha(G,w)", str(self.nc_inequality.bound)))
        if self.nchv is not None:
            rows.append(("NCHV bound", str(self.nchv.value)))
        if self.lhv is not None:
            rows.append(("LHV bound", str(self.lhv.value)))
        if self.values is not None:
            rows.append(("NC value at 1/d", f"{self.values.nc_maxmixed:.9f}"))
            rows.append(("Bell value at Psi", f"{self.values.bell_entangled:.9f}"))
        if self.game is not None:
            rows.append(("game classical", f"{float(self.game.classical_value):.9f}"))
            if self.game.quantum_value is not None:
                rows.append(("game quantum", f"{self.game.quantum_value:.9f}"))
        if self.sampling is not None:
            rows.append(("Bell sample", f"{self.sampling.estimate:.6f} +- {self.sampling.stderr:.6f}"))
        if self.sequential is not None:
            rows.append(("sequential NC", f"{self.sequential.nc_estimate:.6f} +- {self.sequential.nc_stderr:.6f}"))
            rows.append(("sequential Bell", f"{self.sequential.bell_estimate:.6f} +- {self.sequential.bell_stderr:.6f}"))
        for check in self.checks:
            if check.skipped:
                status = f"SKIPPED {check.detail}"
            else:
                status = "pass" if check.passed else f"FAIL {check.detail}"
            rows.append((f"check {check.name}", status))
        if self.failed_stage is not None:
            rows.append(("failed stage", f"{self.failed_stage}: {self.error}"))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


class InequalityStage(BaseModel):
    """Cached output of Step 3a: both inequalities and their brute-force bounds."""

    weights: List[int] = Field(description="Integer weights the inequalities are written with.")
    nc_inequality: NCInequality
    bell_inequality: BellInequality
    nchv: Optional[BoundResult] = Field(default=None, description="None when the set is too large to enumerate.")
    lhv: Optional[BoundResult] = None
    bounds_skipped: Optional[str] = Field(default=None, description="Why the brute-force bounds were not computed.")


class ValueStage(BaseModel):
    values: QuantumValues
    game: GameSpec
    removal_audit: List[RemovalCheck] = Field(default_factory=list)


class SamplingStage(BaseModel):
    sampling: SamplingResult
    sequential: SequentialSamplingResult
