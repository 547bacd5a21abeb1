from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from utils.rational import ComplexValue


def _square(matrix: List[List[complex]], dim: int, what: str) -> None:
    if len(matrix) != dim or any(len(row) != dim for row in matrix):
        raise ValueError(f"{what} must be {dim}x{dim}")


class Ket(BaseModel):
    dim: int = Field(ge=1, description="Hilbert space dimension.")
    amplitudes: List[ComplexValue] = Field(description="Amplitudes in the computational basis.")

    @model_validator(mode="after")
    def _check_arity(self):
        if len(self.amplitudes) != self.dim:
            raise ValueError(f"Ket of dimension {self.dim} has {len(self.amplitudes)} amplitudes")
        return self

    @classmethod
    def from_array(cls, vector) -> "Ket":
        vector = np.asarray(vector, dtype=complex).ravel()
        return cls(dim=len(vector), amplitudes=[complex(z) for z in vector])

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def normalized(self) -> "Ket":
        return Ket.from_array(self.array / self.norm)


class Projector(BaseModel):
    dim: int = Field(ge=1)
    matrix: List[List[ComplexValue]] = Field(description="d x d Hermitian idempotent matrix, row major.")
    rank: int = Field(ge=0, description="Rank, equal to the trace.")

    @model_validator(mode="after")
    def _check_shape(self):
        _square(self.matrix, self.dim, "Projector matrix")
        return self

    @classmethod
    def from_array(cls, matrix) -> "Projector":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(
            dim=matrix.shape[0],
            matrix=[[complex(z) for z in row] for row in matrix],
            rank=int(round(float(np.trace(matrix).real))),
        )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=complex)

    def complement(self) -> "Projector":
        return Projector.from_array(np.eye(self.dim) - self.array)


class DensityMatrix(BaseModel):
    dim: int = Field(ge=1)
    matrix: List[List[ComplexValue]] = Field(description="d x d positive semidefinite matrix of unit trace, row major.")

    @model_validator(mode="after")
    def _check_shape(self):
        _square(self.matrix, self.dim, "Density matrix")
        return self

    @classmethod
    def from_array(cls, matrix) -> "DensityMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(dim=matrix.shape[0], matrix=[[complex(z) for z in row] for row in matrix])

    @classmethod
    def from_ket(cls, ket: Ket) -> "DensityMatrix":
        v = ket.array / ket.norm
        return cls.from_array(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls.from_array(np.eye(dim) / dim)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=complex)
