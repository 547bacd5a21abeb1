import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interfaces.quantum import DensityMatrix, Ket
from tools.linalg import (
    as_density,
    check_hermitian,
    conjugate_set,
    haar_unitary,
    luders_update,
    maximally_entangled,
    min_eigenvalue,
    orthogonal_complement,
    projector_from_ket,
    random_density_matrix,
    random_ket,
    real_embedding,
    weighted_sum,
)
from utils.errors import DimensionMismatch, InvalidOutcome, NotHermitian, ZeroProbabilityBranch


def test_yuoh_weighted_sum_is_proportional_to_identity(yuoh, yuoh_weights):
    assert np.allclose(weighted_sum(yuoh, yuoh_weights), 35 / 3 * np.eye(3), atol=1e-12)
    assert np.allclose(weighted_sum(yuoh, [1] * 13), 13 / 3 * np.eye(3), atol=1e-12)
    assert min_eigenvalue(weighted_sum(yuoh, yuoh_weights)) == pytest.approx(35 / 3)


def test_weighted_sum_arity(yuoh):
    with pytest.raises(DimensionMismatch):
        weighted_sum(yuoh, [1, 2])


@pytest.mark.parametrize("real", [False, True])
def test_haar_unitary_is_unitary(rng, real):
    u = haar_unitary(4, rng, real=real)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    if real:
        assert np.abs(u.imag).max() == 0


def test_random_density_matrix(rng):
    rho = random_density_matrix(3, rng, rank=2).array
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 2


def test_maximally_entangled_state():
    psi = maximally_entangled(3)
    assert psi.norm == pytest.approx(1.0)
    rho = as_density(psi, 9)
    reduced = rho.reshape(3, 3, 3, 3).trace(axis1=1, axis2=3)
    assert np.allclose(reduced, np.eye(3) / 3)


def test_as_density_checks_dimension():
    with pytest.raises(DimensionMismatch):
        as_density(np.eye(2) / 2, 3)
    assert as_density([1, 0, 0], 3)[0, 0] == 1


def test_check_hermitian():
    with pytest.raises(NotHermitian):
        check_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(DimensionMismatch):
        check_hermitian(np.zeros((2, 3)))


def test_luders_update():
    rho = DensityMatrix.from_array(np.diag([0.5, 0.5, 0]))
    P = projector_from_ket(Ket.from_array([1, 0, 0]))
    post, probability = luders_update(rho, P, 1)
    assert probability == pytest.approx(0.5)
    assert np.allclose(post.array, np.diag([1, 0, 0]))
    _, probability = luders_update(rho, P, 0)
    assert probability == pytest.approx(0.5)
    with pytest.raises(ZeroProbabilityBranch):
        luders_update(DensityMatrix.from_array(np.diag([0, 1.0, 0])), P, 1)


def test_orthogonal_complement():
    v = np.array([[1, 1, 0]]) / np.sqrt(2)
    c = orthogonal_complement(v)
    assert c.shape == (3, 2)
    assert np.allclose(v.conj() @ c, 0)
    assert np.allclose(c.conj().T @ c, np.eye(2))


def test_real_embedding_doubles_spectrum(rng):
    h = random_density_matrix(3, rng).array
    doubled = np.sort(np.repeat(np.linalg.eigvalsh(h), 2))
    assert np.allclose(np.linalg.eigvalsh(real_embedding(h)), doubled)


def test_conjugate_set(twin):
    conj = conjugate_set(twin)
    assert np.allclose(conj.array, twin.array.conj())
    assert conj.labels == twin.labels


@pytest.mark.parametrize("outcome", [2, -1, True, "1"])
def test_luders_update_rejects_other_outcomes(outcome):
    rho = DensityMatrix.from_array(np.diag([0.5, 0.5, 0]))
    P = projector_from_ket(Ket.from_array([1, 0, 0]))
    with pytest.raises(InvalidOutcome):
        luders_update(rho, P, outcome)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_luders_branches_sum_to_one(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(d, rng)
    P = projector_from_ket(random_ket(d, rng))
    one, p1 = luders_update(rho, P, 1)
    zero, p0 = luders_update(rho, P, 0)
    assert p0 + p1 == pytest.approx(1.0, abs=1e-10)
    assert np.trace(one.array).real == pytest.approx(1.0, abs=1e-10)
    Q = np.eye(d) - P.array
    dephased = P.array @ rho.array @ P.array + Q @ rho.array @ Q
    assert np.allclose(p1 * one.array + p0 * zero.array, dephased, atol=1e-10)
