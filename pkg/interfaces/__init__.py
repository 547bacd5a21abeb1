from .scalar_expr import ScalarExpr
from .quantum import Ket, Projector, DensityMatrix
from .graph import WeightedGraph
from .projector_set import ProjectorSet, ProjectorSetFile, VectorEntry, DatasetMetadata
from .invariant_report import (
    RationalLPResult,
    IndependenceResult,
    ColoringResult,
    FractionalColoringResult,
    ThetaResult,
    InvariantReport,
)
from .ks import KSInstance, KSAssignment, KSSolveResult, CriticalityReport, NCModelCertificate, NCModelInfeasibility, TIFSCheck
from .gadget import TIFSGadget, BasisCover, GadgetProvenance, ExtensionResult
from .certificate import (
    SICCertificate,
    Rejection,
    GapReport,
    SICRefutation,
    SICVerdict,
    DeletionCheck,
    SICCriticality,
    EgalitarianResult,
    StateAudit,
)
from .inequality import (
    EdgeCoefficient,
    BellTerm,
    Provenance,
    NCInequality,
    BellInequality,
    BoundResult,
    GameQuestion,
    GameSpec,
    SamplingResult,
    SequentialSamplingResult,
)
from .options import ComponentConfig, Tolerances, PipelineConfig
from .report import InputSummary, QuantumValues, RemovalCheck, CrossCheck, PipelineReport

__all__ = [
    "ScalarExpr",
    "Ket",
    "Projector",
    "DensityMatrix",
    "WeightedGraph",
    "ProjectorSet",
    "ProjectorSetFile",
    "VectorEntry",
    "DatasetMetadata",
    "RationalLPResult",
    "IndependenceResult",
    "ColoringResult",
    "FractionalColoringResult",
    "ThetaResult",
    "InvariantReport",
    "KSInstance",
    "KSAssignment",
    "KSSolveResult",
    "CriticalityReport",
    "NCModelCertificate",
    "NCModelInfeasibility",
    "TIFSCheck",
    "TIFSGadget",
    "BasisCover",
    "GadgetProvenance",
    "ExtensionResult",
    "SICCertificate",
    "Rejection",
    "GapReport",
    "SICRefutation",
    "SICVerdict",
    "DeletionCheck",
    "SICCriticality",
    "EgalitarianResult",
    "StateAudit",
    "EdgeCoefficient",
    "BellTerm",
    "Provenance",
    "NCInequality",
    "BellInequality",
    "BoundResult",
    "GameQuestion",
    "GameSpec",
    "SamplingResult",
    "SequentialSamplingResult",
    "ComponentConfig",
    "Tolerances",
    "PipelineConfig",
    "InputSummary",
    "QuantumValues",
    "RemovalCheck",
    "CrossCheck",
    "PipelineReport",
]
