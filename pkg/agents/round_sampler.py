import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from agents.ineq_engine import build_bell_inequality
from agents.ortho_graph import orthogonality_graph
from interfaces.inequality import BellInequality, SamplingResult, SequentialSamplingResult
from interfaces.projector_set import ProjectorSet
from tools.linalg import as_density, conjugate_set, lift_alice, lift_bob
from utils.errors import DimensionMismatch

CHUNK_ROUNDS = 1 << 16


def _stream(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for one block of rounds; blocks are independent of each other."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def _mean_and_stderr(total: float, total_sq: float, rounds: int) -> Tuple[float, float]:
    mean = total / rounds
    if rounds < 2:
        return mean, 0.0
    variance = max(total_sq - rounds * mean * mean, 0.0) / (rounds - 1)
    return mean, float(np.sqrt(variance / rounds))


def _outcome_table(rho: np.ndarray, sequence: Sequence[np.ndarray]) -> np.ndarray:
    """
    Probabilities of every outcome string of a sequence of ideal two-outcome measurements,
    each applied with the Lüders rule. Index bit k (most significant first) is outcome k.
    """
    dim = rho.shape[0]
    identity = np.eye(dim)
    branches = [(rho, 0)]
    for projector in sequence:
        grown = []
        for state, code in branches:
            for outcome, q in ((0, identity - projector), (1, projector)):
                grown.append((q @ state @ q, code << 1 | outcome))
        branches = grown
    table = np.zeros(1 << len(sequence))
    for state, code in branches:
        table[code] = max(float(np.trace(state).real), 0.0)
    return table / table.sum()


class RoundSampler:
    """Monte Carlo rounds of the Bell and the sequential experiment, deterministic given the seed."""

    def __init__(self, rounds: int = 10**6, seed: int = 2021, chunk_rounds: int = CHUNK_ROUNDS):
        self.rounds = rounds
        self.seed = seed
        self.chunk_rounds = chunk_rounds

    def _chunks(self, rounds: int):
        for chunk, start in enumerate(range(0, rounds, self.chunk_rounds)):
            yield chunk, min(self.chunk_rounds, rounds - start)

    def sample_bell_rounds(
        self,
        state,
        bell: BellInequality,
        SA: ProjectorSet,
        SB: ProjectorSet,
        rounds: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> SamplingResult:
        """
        Each round asks one term (i, j) of the Bell expression, uniformly, and draws both outcomes
        from the Born rule. T * coeff * [both 1] is an unbiased estimate of the expression.
        """
        rounds = self.rounds if rounds is None else rounds
        seed = self.seed if seed is None else seed
        if rounds < 1:
            raise ValueError("rounds must be at least 1")
        terms = [t for t in bell.terms if t.coeff != 0]
        rho = as_density(state, SA.dim * SB.dim)
        coeffs = np.asarray([float(t.coeff) for t in terms])
        both_one = np.asarray(
            [
                _outcome_table(rho, [lift_alice(SA.projector_array(t.alice), SB.dim), lift_bob(SB.projector_array(t.bob), SA.dim)])[3]
                for t in terms
            ]
        )
        scale = len(terms)

        total = total_sq = 0.0
        for chunk, size in self._chunks(rounds):
            rng = _stream(seed, chunk)
            asked = rng.integers(scale, size=size)
            hit = rng.random(size) < both_one[asked]
            x = np.where(hit, scale * coeffs[asked], 0.0)
            total += float(x.sum())
            total_sq += float((x * x).sum())
        estimate, stderr = _mean_and_stderr(total, total_sq, rounds)
        logging.info(f"Bell sampling: {rounds} rounds, estimate {estimate:.6f} +- {stderr:.6f}")
        return SamplingResult(estimate=estimate, stderr=stderr, rounds=rounds, seed=seed)

    def sample_sequential_rounds(
        self,
        S: ProjectorSet,
        weights: Sequence,
        state,
        rounds: Optional[int] = None,
        seed: Optional[int] = None,
        SB: Optional[ProjectorSet] = None,
        return_records: bool = False,
    ) -> Union[SequentialSamplingResult, Tuple[SequentialSamplingResult, Dict[str, np.ndarray]]]:
        """
        Alice measures two projectors of S in sequence, Bob one projector of SB, on a bipartite state.

        A round picks a Bell term (a, b) uniformly: Alice's first measurement is a, Bob's is b.
        Alice's second measurement is a again or one of a's orthogonal neighbours, uniformly.
        Alice's two outcomes estimate the noncontextuality expression, her first outcome with
        Bob's estimates the Bell expression, both from the same rounds.
        """
        rounds = self.rounds if rounds is None else rounds
        seed = self.seed if seed is None else seed
        if rounds < 1:
            raise ValueError("rounds must be at least 1")
        SB = conjugate_set(S) if SB is None else SB
        if SB.n != S.n:
            raise DimensionMismatch(f"Alice has {S.n} projectors, Bob {SB.n}")
        bell = build_bell_inequality(S, weights)
        rho = as_density(state, S.dim * SB.dim)
        G = orthogonality_graph(S)
        w = [float(x) for x in bell.vertex_coeffs]

        terms = [t for t in bell.terms if t.coeff != 0]
        T = len(terms)
        followers: List[List[int]] = [[a] + G.neighbors(a) for a in range(S.n)]
        asked_first = np.bincount([t.alice for t in terms], minlength=S.n) / T
        # probability that a round realizes each noncontextuality term
        pick = {}
        for a in range(S.n):
            share = asked_first[a] / len(followers[a])
            for j in followers[a]:
                key = (a, a) if j == a else (min(a, j), max(a, j))
                pick[key] = pick.get(key, 0.0) + share

        combos, first, second, bob, bell_coeff, nc_coeff = [], [], [], [], [], []
        offsets = np.zeros(T, dtype=np.int64)
        counts = np.zeros(T, dtype=np.int64)
        for k, t in enumerate(terms):
            offsets[k] = len(combos)
            counts[k] = len(followers[t.alice])
            A1 = lift_alice(S.projector_array(t.alice), SB.dim)
            Bp = lift_bob(SB.projector_array(t.bob), S.dim)
            for j in followers[t.alice]:
                A2 = lift_alice(S.projector_array(j), SB.dim)
                combos.append(np.cumsum(_outcome_table(rho, [A1, A2, Bp])))
                first.append(t.alice)
                second.append(j)
                bob.append(t.bob)
                bell_coeff.append(float(t.coeff))
                if j == t.alice:
                    nc_coeff.append(w[j] / pick[(j, j)])
                else:
                    nc_coeff.append(-max(w[t.alice], w[j]) / pick[(min(t.alice, j), max(t.alice, j))])
        cumulative = np.asarray(combos)
        first, second, bob = np.asarray(first), np.asarray(second), np.asarray(bob)
        bell_coeff, nc_coeff = np.asarray(bell_coeff), np.asarray(nc_coeff)
        repeat = first == second

        sums = np.zeros(4)
        records = {k: [] for k in ("first", "second", "bob", "x1", "x2", "y")}
        for chunk, size in self._chunks(rounds):
            rng = _stream(seed, chunk)
            asked = rng.integers(T, size=size)
            combo = offsets[asked] + np.minimum((rng.random(size) * counts[asked]).astype(np.int64), counts[asked] - 1)
            u = rng.random(size)
            code = np.minimum((u[:, None] > cumulative[combo]).sum(axis=1), 7)
            x1, x2, y = code >> 2 & 1, code >> 1 & 1, code & 1
            nc = np.where(repeat[combo], x1, x1 * x2) * nc_coeff[combo]
            bl = x1 * y * T * bell_coeff[combo]
            sums += [nc.sum(), (nc * nc).sum(), bl.sum(), (bl * bl).sum()]
            if return_records:
                for key, values in (("first", first[combo]), ("second", second[combo]), ("bob", bob[combo]), ("x1", x1), ("x2", x2), ("y", y)):
                    records[key].append(values)

        nc_estimate, nc_stderr = _mean_and_stderr(sums[0], sums[1], rounds)
        bell_estimate, bell_stderr = _mean_and_stderr(sums[2], sums[3], rounds)
        logging.info(
            f"Sequential sampling: {rounds} rounds, NC {nc_estimate:.6f} +- {nc_stderr:.6f}, "
            f"Bell {bell_estimate:.6f} +- {bell_stderr:.6f}"
        )
        result = SequentialSamplingResult(
            nc_estimate=nc_estimate,
            nc_stderr=nc_stderr,
            bell_estimate=bell_estimate,
            bell_stderr=bell_stderr,
            rounds=rounds,
            seed=seed,
        )
        if return_records:
            return result, {k: np.concatenate(v) for k, v in records.items()}
        return result


__all__ = ["RoundSampler"]
