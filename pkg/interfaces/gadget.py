from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from interfaces.projector_set import ProjectorSet


class TIFSGadget(BaseModel):
    vectors: ProjectorSet
    endpoint_a: int = Field(description="Index of A; A = 1 forces B = 0.")
    endpoint_b: int = Field(description="Index of B.")
    interior: List[int] = Field(description="Indices of every vector other than the endpoints.")
    links: int = Field(default=1, description="Number of bug gadgets composed into this one.")
    overlap: float = Field(description="|<A|B>|.")
    kind: Literal["bug", "chain", "tits"] = "bug"


class BasisCover(BaseModel):
    vectors: ProjectorSet = Field(description="Input vectors followed by the completion vectors.")
    bases: List[List[int]] = Field(description="Disjoint complete bases, indices into vectors.")
    original: List[int] = Field(description="Indices that came from the input set.")
    completions: List[int] = Field(description="Indices of synthesized completion vectors.")

    @property
    def size(self) -> int:
        return len(self.bases)


class GadgetProvenance(BaseModel):
    source: str = Field(description="Label of the distinguished-basis element A.")
    target: str = Field(description="Label of the target element B.")
    kind: Literal["bug", "chain", "orthogonal"]
    links: int = 0
    labels: List[str] = Field(default_factory=list, description="Labels of the interior vectors this gadget added.")


class ExtensionResult(BaseModel):
    vectors: ProjectorSet
    original: List[int] = Field(description="Indices of the input vectors inside the output.")
    method: Literal["identity", "catalog", "construction"]
    catalog_name: Optional[str] = None
    bases: List[List[int]] = Field(default_factory=list, description="The disjoint bases B0..BN' used.")
    pattern: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="(element of B0, target basis) pairs realized by gadgets.",
    )
    gadgets: List[GadgetProvenance] = Field(default_factory=list)
    attempts: int = 1
    seed: Optional[int] = None
    sic_critical: Optional[bool] = Field(
        default=None,
        description="True once critical SI-C has been verified; None for a bare KS extension.",
    )
