from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agents.ineq_engine import (
    bell_inequality_from_graph,
    build_bell_inequality,
    build_nc_inequality,
    lhv_bound_bruteforce,
    nc_inequality_from_graph,
    nchv_bound_bruteforce,
    quantum_bell_value,
    quantum_nc_value,
    to_nonlocal_game,
    value_pair,
)
from interfaces.graph import WeightedGraph
from interfaces.projector_set import ProjectorSet
from tools.linalg import conjugate_set, haar_unitary, maximally_entangled
from utils.errors import DimensionMismatch, TooLarge, WeightArityMismatch


def test_yuoh_inequalities(yuoh, yuoh_weights):
    nc = build_nc_inequality(yuoh, yuoh_weights)
    assert nc.bound == 11
    assert len(nc.edge_coeffs) == 24
    witness = [int(v in nc.bound_witness) for v in range(13)]
    assert nc.lhs(witness) == 11
    assert nchv_bound_bruteforce(nc).value == 11

    bell = build_bell_inequality(yuoh, yuoh_weights)
    assert len(bell.terms) == 13 + 2 * 24
    lhv = lhv_bound_bruteforce(bell)
    assert lhv.value == 11
    assert bell.lhs_local(lhv.witness, lhv.bob_witness) == 11


def test_edge_coefficients_take_the_larger_weight(yuoh, yuoh_weights):
    nc = build_nc_inequality(yuoh, yuoh_weights)
    for e in nc.edge_coeffs:
        assert e.coeff == max(yuoh_weights[e.i], yuoh_weights[e.j])
    assert nc.provenance.source_hash == yuoh.fingerprint()


def test_yuoh_quantum_values(yuoh, yuoh_weights):
    nc, bell = value_pair(yuoh, yuoh_weights)
    assert nc == pytest.approx(35 / 3, abs=1e-9)
    assert bell == pytest.approx(35 / 3, abs=1e-9)


def test_pentagon_value(kcbs):
    psi = np.ones(3) / np.sqrt(3)
    assert quantum_nc_value(kcbs, [1] * 5, psi) == pytest.approx(2 + 1 / 9)
    assert build_nc_inequality(kcbs, [1] * 5).bound == 2


def test_game_values(yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    lhv = lhv_bound_bruteforce(bell)
    game = to_nonlocal_game(bell, quantum_lhs=35 / 3)
    assert sum(q.probability for q in game.questions) == 1
    assert game.classical_value == (11 + game.offset) / game.scale
    assert game.strategy_value(lhv.witness, lhv.bob_witness) == game.classical_value
    assert game.quantum_value > float(game.classical_value)
    assert game.inequality_value(game.game_value(Fraction(7))) == 7


def test_single_term_game():
    bell = bell_inequality_from_graph(WeightedGraph(n=1), [1])
    game = to_nonlocal_game(bell)
    assert game.classical_value == 1
    assert game.offset == 0

    S = ProjectorSet.from_arrays([[1, 0, 0]])
    q = quantum_bell_value(S, conjugate_set(S), [1], maximally_entangled(3))
    assert q == pytest.approx(1 / 3)
    game = to_nonlocal_game(build_bell_inequality(S, [1]), quantum_lhs=q)
    assert game.quantum_value <= float(game.classical_value)


def test_weight_validation(yuoh):
    with pytest.raises(WeightArityMismatch):
        build_nc_inequality(yuoh, [1] * 3)
    with pytest.raises(ValueError):
        build_nc_inequality(yuoh, [-1] + [1] * 12)
    with pytest.raises(DimensionMismatch):
        quantum_bell_value(yuoh, yuoh.subset([0, 1]), [1] * 13, maximally_entangled(3))


def test_bruteforce_size_guard():
    nc = nc_inequality_from_graph(WeightedGraph(n=31), [1] * 31)
    with pytest.raises(TooLarge):
        nchv_bound_bruteforce(nc)


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(1, 12))
    edges = [p for p in combinations(range(n), 2) if draw(st.booleans())]
    weights = draw(
        st.lists(st.fractions(min_value=0, max_value=5, max_denominator=4), min_size=n, max_size=n)
    )
    return WeightedGraph(n=n, edges=edges), weights


@settings(max_examples=100, deadline=None)
@given(weighted_graphs())
def test_bounds_equal_alpha(case):
    G, weights = case
    nc = nc_inequality_from_graph(G, weights)
    bell = bell_inequality_from_graph(G, weights)
    assert nchv_bound_bruteforce(nc).value == nc.bound
    assert lhv_bound_bruteforce(bell).value == nc.bound


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(0, 12), min_size=2, max_size=8, unique=True),
    st.lists(st.integers(0, 4), min_size=13, max_size=13),
    st.integers(0, 2**32 - 1),
)
def test_value_transfer(yuoh, indices, weights, seed):
    u = haar_unitary(3, np.random.default_rng(seed))
    S = ProjectorSet.from_arrays([u @ yuoh.array[k] for k in indices])
    w = [weights[k] for k in indices]
    nc = quantum_nc_value(S, w, np.eye(3) / 3)
    bell = quantum_bell_value(S, conjugate_set(S), w, maximally_entangled(3))
    assert nc == pytest.approx(bell, abs=1e-10)
    assert nc == pytest.approx(sum(w) / 3, abs=1e-10)


def _random_set(rng, bases: int, singles: int) -> ProjectorSet:
    """Columns of random unitaries, some dropped, plus unrelated random vectors."""
    vectors = []
    for _ in range(bases):
        u = haar_unitary(3, rng)
        vectors.extend(u[:, k] for k in range(3) if k == 0 or rng.random() < 0.8)
    vectors.extend(haar_unitary(3, rng)[:, 0] for _ in range(singles))
    return ProjectorSet.from_arrays(vectors)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 3))
def test_value_transfer_on_random_sets(seed, bases, singles):
    rng = np.random.default_rng(seed)
    S = _random_set(rng, bases, singles)
    w = [int(k) for k in rng.integers(0, 5, size=S.n)]
    nc = quantum_nc_value(S, w, np.eye(3) / 3)
    bell = quantum_bell_value(S, conjugate_set(S), w, maximally_entangled(3))
    assert nc == pytest.approx(bell, abs=1e-10)
    assert nc == pytest.approx(sum(w) / 3, abs=1e-10)
