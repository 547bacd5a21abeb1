import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from interfaces.projector_set import ProjectorSet
from interfaces.quantum import DensityMatrix, Ket, Projector
from utils.errors import DimensionMismatch, InvalidOutcome, NotHermitian, NotNormalized, ZeroProbabilityBranch

HERMITIAN_TOL = 1e-12
ZERO_BRANCH_TOL = 1e-12


def _as_array(operator) -> np.ndarray:
    if isinstance(operator, (Projector, DensityMatrix)):
        return operator.array
    return np.asarray(operator, dtype=complex)


def projector_from_ket(v: Ket, tol: float = 1e-9) -> Projector:
    if abs(v.norm - 1.0) > tol:
        raise NotNormalized(v.norm)
    a = v.array
    return Projector(dim=v.dim, matrix=[[complex(z) for z in row] for row in np.outer(a, a.conj())], rank=1)


def check_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {matrix.shape}")
    scale = max(1.0, float(np.abs(matrix).max(initial=0.0)))
    deviation = float(np.abs(matrix - matrix.conj().T).max(initial=0.0))
    if deviation > tol * scale:
        raise NotHermitian(f"|M - M^dagger| = {deviation:.3e}")


def eigenvalues(matrix) -> np.ndarray:
    """Ascending spectrum of a Hermitian matrix."""
    m = _as_array(matrix)
    check_hermitian(m)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def min_eigenvalue(matrix) -> float:
    return float(eigenvalues(matrix)[0])


def weighted_sum(S: ProjectorSet, weights: Sequence) -> np.ndarray:
    """sum_i w_i |v_i><v_i|."""
    if len(weights) != S.n:
        raise DimensionMismatch(f"{len(weights)} weights for {S.n} projectors")
    w = np.asarray([float(x) for x in weights])
    a = S.array
    return (a.T * w) @ a.conj()


def luders_update(rho: DensityMatrix, P: Projector, outcome: int) -> Tuple[DensityMatrix, float]:
    """Post-measurement state and probability of `outcome` (1: P, 0: 1 - P)."""
    if isinstance(outcome, bool) or outcome not in (0, 1):
        raise InvalidOutcome(outcome)
    if rho.dim != P.dim:
        raise DimensionMismatch(f"state of dimension {rho.dim}, projector of dimension {P.dim}")
    r = rho.array
    p = P.array if outcome == 1 else np.eye(P.dim) - P.array
    updated = p @ r @ p
    probability = float(np.trace(updated).real)
    if probability < ZERO_BRANCH_TOL:
        raise ZeroProbabilityBranch(outcome, probability)
    return DensityMatrix.from_array(updated / probability), probability


def maximally_entangled(d: int) -> Ket:
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return Ket.from_array(psi)


def conjugate_set(S: ProjectorSet) -> ProjectorSet:
    return ProjectorSet(dim=S.dim, vectors=[[z.conjugate() for z in v] for v in S.vectors], labels=S.labels)


def lift_alice(op: np.ndarray, d_bob: int) -> np.ndarray:
    return np.kron(op, np.eye(d_bob))


def lift_bob(op: np.ndarray, d_alice: int) -> np.ndarray:
    return np.kron(np.eye(d_alice), op)


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.trace(rho @ op).real)


def real_embedding(h: np.ndarray) -> np.ndarray:
    """[[Re H, -Im H], [Im H, Re H]]; PSD iff H is, each eigenvalue doubled."""
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def is_real(S: ProjectorSet, tol: float = 1e-12) -> bool:
    return bool(np.abs(S.array.imag).max(initial=0.0) <= tol)


def haar_unitary(d: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    """Haar-random unitary (orthogonal when real) from the QR decomposition of a Gaussian matrix."""
    z = rng.standard_normal((d, d))
    if not real:
        z = (z + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_ket(d: int, rng: np.random.Generator, real: bool = False) -> Ket:
    return Ket.from_array(haar_unitary(d, rng, real=real)[:, 0])


def random_density_matrix(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Density matrix drawn from the induced measure of a Ginibre matrix with `rank` columns."""
    k = rank or d
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return DensityMatrix.from_array(rho / np.trace(rho).real)


def orthogonal_complement(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning the complement of the span of the rows of `vectors`."""
    vectors = np.atleast_2d(vectors)
    _, s, vh = np.linalg.svd(vectors.conj())
    rank = int((s > 1e-10).sum())
    complement = vh[rank:].conj().T
    logging.debug(f"Orthogonal complement of {vectors.shape[0]} vectors has dimension {complement.shape[1]}")
    return complement


def as_density(state, dim: int) -> np.ndarray:
    """Density matrix of a Ket, DensityMatrix, state vector or matrix, checked against `dim`."""
    if isinstance(state, Ket):
        v = state.array
        rho = np.outer(v, v.conj())
    elif isinstance(state, DensityMatrix):
        rho = state.array
    else:
        rho = np.asarray(state, dtype=complex)
        if rho.ndim == 1:
            rho = np.outer(rho, rho.conj())
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"state of shape {rho.shape}, expected ({dim}, {dim})")
    return rho
