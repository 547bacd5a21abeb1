import numpy as np
import pytest
from scipy.stats import chi2_contingency

from agents.ineq_engine import build_bell_inequality
from agents.round_sampler import RoundSampler
from tools.linalg import conjugate_set, maximally_entangled

TARGET = 35 / 3


@pytest.fixture(scope="module")
def sampler():
    return RoundSampler(rounds=10**6, seed=2021)


def test_bell_sampling_matches_the_quantum_value(sampler, yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    result = sampler.sample_bell_rounds(maximally_entangled(3), bell, yuoh, conjugate_set(yuoh))
    assert result.rounds == 10**6
    assert result.stderr > 0
    assert abs(result.estimate - TARGET) <= 3 * result.stderr


def test_bell_sampling_is_deterministic(yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    args = (maximally_entangled(3), bell, yuoh, conjugate_set(yuoh))
    first = RoundSampler(rounds=5_000, seed=11).sample_bell_rounds(*args)
    second = RoundSampler(rounds=5_000, seed=11).sample_bell_rounds(*args)
    other = RoundSampler(rounds=5_000, seed=12).sample_bell_rounds(*args)
    assert first == second
    assert other.estimate != first.estimate


def test_sequential_sampling(sampler, yuoh, yuoh_weights):
    result, records = sampler.sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3), return_records=True)
    assert abs(result.nc_estimate - TARGET) <= 3 * result.nc_stderr
    assert abs(result.bell_estimate - TARGET) <= 3 * result.bell_stderr

    repeat = records["first"] == records["second"]
    assert repeat.any() and (~repeat).any()
    # a repeated ideal measurement gives the same outcome
    assert np.array_equal(records["x1"][repeat], records["x2"][repeat])
    # orthogonal projectors are never both 1
    assert not np.any(records["x1"][~repeat] & records["x2"][~repeat])


def test_rounds_must_be_positive(sampler, yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    with pytest.raises(ValueError):
        sampler.sample_bell_rounds(maximally_entangled(3), bell, yuoh, conjugate_set(yuoh), rounds=0)
    with pytest.raises(ValueError):
        sampler.sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3), rounds=0)


def _marginal_homogeneity(setting, context, outcome):
    """Smallest chi-square p-value, over settings, that the outcome marginal ignores the context."""
    lowest = 1.0
    for s in np.unique(setting):
        mask = setting == s
        contexts = np.unique(context[mask])
        if len(contexts) < 2:
            continue
        table = np.array([[np.sum(outcome[mask & (context == c)] == k) for k in (0, 1)] for c in contexts])
        lowest = min(lowest, chi2_contingency(table).pvalue)
    return lowest


def test_sequential_records_are_nondisturbing(sampler, yuoh, yuoh_weights):
    _, records = sampler.sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3), return_records=True)
    # Alice's second outcome does not depend on which compatible measurement came first
    assert _marginal_homogeneity(records["second"], records["first"], records["x2"]) > 1e-4
    # Bob's outcome does not depend on Alice's setting
    assert _marginal_homogeneity(records["bob"], records["first"], records["y"]) > 1e-4
    # and Alice's first outcome does not depend on Bob's
    assert _marginal_homogeneity(records["first"], records["bob"], records["x1"]) > 1e-4


def test_stderr_shrinks_with_the_square_root_of_rounds(yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    args = (maximally_entangled(3), bell, yuoh, conjugate_set(yuoh))
    small = RoundSampler(rounds=10_000, seed=5).sample_bell_rounds(*args)
    large = RoundSampler(rounds=160_000, seed=5).sample_bell_rounds(*args)
    assert small.stderr / large.stderr == pytest.approx(4.0, rel=0.15)

    sequential_small = RoundSampler(rounds=10_000, seed=5).sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3))
    sequential_large = RoundSampler(rounds=160_000, seed=5).sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3))
    assert sequential_small.nc_stderr / sequential_large.nc_stderr == pytest.approx(4.0, rel=0.15)


def test_single_round(yuoh, yuoh_weights):
    bell = build_bell_inequality(yuoh, yuoh_weights)
    one = RoundSampler(rounds=1, seed=3)
    result = one.sample_bell_rounds(maximally_entangled(3), bell, yuoh, conjugate_set(yuoh))
    assert result.rounds == 1
    assert np.isfinite(result.estimate)
    assert result.stderr == 0.0
    sequential = one.sample_sequential_rounds(yuoh, yuoh_weights, maximally_entangled(3))
    assert np.isfinite(sequential.nc_estimate) and np.isfinite(sequential.bell_estimate)
    assert sequential.nc_stderr == 0.0 and sequential.bell_stderr == 0.0
