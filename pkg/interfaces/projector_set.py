import hashlib
from functools import cached_property
from typing import List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from interfaces.quantum import Ket
from utils.errors import IndexOutOfRange, NotNormalized
from utils.rational import ComplexValue


class ProjectorSet(BaseModel):
    dim: int = Field(ge=1, description="Hilbert space dimension d.")
    vectors: List[List[ComplexValue]] = Field(
        description="One unit vector per rank-one projector |v><v|.",
    )
    labels: List[str] = Field(
        default_factory=list,
        description="Vertex labels. Empty means v1..vn.",
    )
    sources: Optional[List[List[str]]] = Field(
        default=None,
        description="Exact expression source of every entry, when the set came from a file.",
    )

    @model_validator(mode="after")
    def _check(self):
        for k, v in enumerate(self.vectors):
            if len(v) != self.dim:
                raise ValueError(f"vector {k} has {len(v)} entries, expected {self.dim}")
        if not self.labels:
            self.labels = [f"v{k + 1}" for k in range(len(self.vectors))]
        if len(self.labels) != len(self.vectors):
            raise ValueError(f"{len(self.labels)} labels for {len(self.vectors)} vectors")
        if self.sources is not None and len(self.sources) != len(self.vectors):
            raise ValueError("sources must match vectors one to one")
        return self

    @classmethod
    def from_arrays(cls, vectors, labels: Optional[Sequence[str]] = None) -> "ProjectorSet":
        rows = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        if not rows:
            raise ValueError("a projector set needs at least one vector")
        return cls(
            dim=len(rows[0]),
            vectors=[[complex(z) for z in row] for row in rows],
            labels=list(labels) if labels else [],
        )

    @property
    def n(self) -> int:
        return len(self.vectors)

    @cached_property
    def array(self) -> np.ndarray:
        """(n, d) complex array, row k is vector k."""
        return np.asarray(self.vectors, dtype=complex).reshape(self.n, self.dim)

    def ket(self, k: int) -> Ket:
        return Ket.from_array(self.array[k])

    def projector_array(self, k: int) -> np.ndarray:
        v = self.array[k]
        return np.outer(v, v.conj())

    def check_normalized(self, tol: float = 1e-9) -> None:
        norms = np.linalg.norm(self.array, axis=1)
        for k, norm in enumerate(norms):
            if abs(norm - 1.0) > tol:
                raise NotNormalized(float(norm), k)

    def subset(self, indices: Sequence[int]) -> "ProjectorSet":
        for k in indices:
            if not 0 <= k < self.n:
                raise IndexOutOfRange(f"vector index {k} outside 0..{self.n - 1}")
        return ProjectorSet(
            dim=self.dim,
            vectors=[self.vectors[k] for k in indices],
            labels=[self.labels[k] for k in indices],
            sources=None if self.sources is None else [self.sources[k] for k in indices],
        )

    def delete(self, indices: Sequence[int]) -> "ProjectorSet":
        drop = set(indices)
        return self.subset([k for k in range(self.n) if k not in drop])

    def extended(self, vectors, labels: Sequence[str]) -> "ProjectorSet":
        extra = [[complex(z) for z in np.asarray(v, dtype=complex).ravel()] for v in vectors]
        return ProjectorSet(dim=self.dim, vectors=self.vectors + extra, labels=self.labels + list(labels))

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(str(self.dim).encode())
        digest.update(np.round(self.array, 12).tobytes())
        return digest.hexdigest()[:16]


class VectorEntry(BaseModel):
    label: str = Field(description="Vertex label.", examples=["v1"])
    entries: List[str] = Field(
        description="Expression strings, one per component.",
        examples=[["0", "1/sqrt(2)", "1/sqrt(2)"]],
    )


class DatasetMetadata(BaseModel):
    source: str = Field(default="", description="Where the vectors come from.")
    citation: str = Field(default="", description="Bibliographic pointer.")


class ProjectorSetFile(BaseModel):
    schema_version: Literal[1] = Field(default=1)
    dimension: int = Field(ge=1)
    normalization: Literal["none", "1/sqrt(sum)"] = Field(
        default="none",
        description='"none": entries are already unit vectors. "1/sqrt(sum)": each vector is divided by its norm after parsing.',
    )
    vectors: List[VectorEntry]
    metadata: DatasetMetadata = Field(default_factory=DatasetMetadata)
    golden_edges: Optional[List[List[int]]] = Field(
        default=None,
        description="Canonical sorted orthogonality edge list under this file's labeling.",
    )
