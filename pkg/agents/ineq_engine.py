import logging
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from agents.invariants import alpha
from agents.ortho_graph import orthogonality_graph
from interfaces.graph import WeightedGraph
from interfaces.inequality import (
    BellInequality,
    BellTerm,
    BoundResult,
    EdgeCoefficient,
    GameQuestion,
    GameSpec,
    NCInequality,
    Provenance,
)
from interfaces.projector_set import ProjectorSet
from tools.linalg import as_density, conjugate_set, maximally_entangled
from utils.errors import DimensionMismatch, TooLarge, WeightArityMismatch
from utils.rational import to_fraction

MAX_BRUTEFORCE_N = 30
CHUNK_BITS = 16


def _weights(weights: Sequence, n: int) -> List[Fraction]:
    if len(weights) != n:
        raise WeightArityMismatch(n, len(weights))
    w = [to_fraction(x) for x in weights]
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    return w


def nc_inequality_from_graph(G: WeightedGraph, weights: Sequence, provenance: Optional[Provenance] = None) -> NCInequality:
    w = _weights(weights, G.n)
    graph = G.with_weights(w)
    bound = alpha(graph)
    return NCInequality(
        graph=graph,
        vertex_coeffs=w,
        edge_coeffs=[EdgeCoefficient(i=i, j=j, coeff=max(w[i], w[j])) for i, j in graph.edges],
        bound=bound.value,
        bound_witness=bound.witness,
        provenance=provenance or Provenance(weights=w),
    )


def bell_inequality_from_graph(G: WeightedGraph, weights: Sequence, provenance: Optional[Provenance] = None) -> BellInequality:
    nc = nc_inequality_from_graph(G, weights, provenance)
    terms = [BellTerm(alice=i, bob=i, coeff=c) for i, c in enumerate(nc.vertex_coeffs)]
    for e in nc.edge_coeffs:
        half = -e.coeff / 2
        terms.append(BellTerm(alice=e.i, bob=e.j, coeff=half))
        terms.append(BellTerm(alice=e.j, bob=e.i, coeff=half))
    return BellInequality(**nc.model_dump(), terms=terms)


def build_nc_inequality(S: ProjectorSet, weights: Sequence, tol: float = 1e-9) -> NCInequality:
    w = _weights(weights, S.n)
    return nc_inequality_from_graph(orthogonality_graph(S, tol=tol), w, Provenance(source_hash=S.fingerprint(), weights=w))


def build_bell_inequality(S: ProjectorSet, weights: Sequence, tol: float = 1e-9) -> BellInequality:
    w = _weights(weights, S.n)
    return bell_inequality_from_graph(orthogonality_graph(S, tol=tol), w, Provenance(source_hash=S.fingerprint(), weights=w))


def _common_denominator(values: Sequence[Fraction]) -> int:
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    return lcm


def _integer_array(values: Sequence[Fraction], scale: int, shape=None) -> np.ndarray:
    ints = [int(v * scale) for v in values]
    dtype = np.int64 if max((abs(k) for k in ints), default=0) < 2**40 else object
    out = np.asarray(ints, dtype=dtype)
    return out if shape is None else out.reshape(shape)


def _assignment_chunks(n: int):
    """0/1 assignments in increasing binary order (bit v = vertex v), in blocks."""
    total = 1 << n
    step = 1 << min(n, CHUNK_BITS)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.int64)
        yield codes, ((codes[:, None] >> shifts) & 1).astype(np.int64)


def _to_bits(code: int, n: int) -> List[int]:
    return [code >> v & 1 for v in range(n)]


def nchv_bound_bruteforce(ineq: NCInequality) -> BoundResult:
    """Exact maximum of the noncontextuality expression over every deterministic assignment."""
    n = ineq.graph.n
    if n > MAX_BRUTEFORCE_N:
        raise TooLarge("nchv brute force", n, MAX_BRUTEFORCE_N)
    if n == 0:
        return BoundResult(value=Fraction(0), witness=[])
    scale = _common_denominator(list(ineq.vertex_coeffs) + [e.coeff for e in ineq.edge_coeffs])
    vertex = _integer_array(ineq.vertex_coeffs, scale)
    edge = _integer_array([e.coeff for e in ineq.edge_coeffs], scale)
    ei = np.asarray([e.i for e in ineq.edge_coeffs], dtype=np.int64)
    ej = np.asarray([e.j for e in ineq.edge_coeffs], dtype=np.int64)

    best, best_code = None, 0
    for codes, bits in _assignment_chunks(n):
        values = bits @ vertex
        if len(edge):
            values = values - (bits[:, ei] * bits[:, ej]) @ edge
        k = int(np.argmax(values))
        if best is None or values[k] > best:
            best, best_code = values[k], int(codes[k])
    return BoundResult(value=Fraction(int(best), scale), witness=_to_bits(best_code, n))


def lhv_bound_bruteforce(bell: BellInequality) -> BoundResult:
    """
    Exact local bound. For a fixed Alice strategy the expression is linear in Bob's outputs,
    so Bob answers 1 exactly where his coefficient is positive.
    """
    n = bell.graph.n
    if n > MAX_BRUTEFORCE_N:
        raise TooLarge("lhv brute force", n, MAX_BRUTEFORCE_N)
    if n == 0:
        return BoundResult(value=Fraction(0), witness=[], bob_witness=[])
    scale = _common_denominator([t.coeff for t in bell.terms])
    table = [Fraction(0)] * (n * n)
    for t in bell.terms:
        table[t.alice * n + t.bob] += t.coeff
    M = _integer_array(table, scale, (n, n))

    best, best_code, best_bob = None, 0, None
    for codes, bits in _assignment_chunks(n):
        bob_coeffs = bits @ M
        values = np.where(bob_coeffs > 0, bob_coeffs, 0).sum(axis=1)
        k = int(np.argmax(values))
        if best is None or values[k] > best:
            best, best_code = values[k], int(codes[k])
            best_bob = [int(c > 0) for c in bob_coeffs[k]]
    return BoundResult(value=Fraction(int(best), scale), witness=_to_bits(best_code, n), bob_witness=best_bob)


def quantum_nc_value(S: ProjectorSet, weights: Sequence, rho, tol: float = 1e-9) -> float:
    """sum_i w_i Tr(rho P_i) - sum_E max(w_i, w_j) Re Tr(rho P_i P_j)."""
    w = [float(x) for x in _weights(weights, S.n)]
    r = as_density(rho, S.dim)
    a = S.array
    # <v_i| rho |v_j> for every pair
    m = a.conj() @ r @ a.T
    gram = a.conj() @ a.T
    value = sum(w[i] * m[i, i].real for i in range(S.n))
    for i, j in orthogonality_graph(S, tol=tol).edges:
        # Tr(rho P_i P_j) = <v_j|rho|v_i> <v_i|v_j>
        value -= max(w[i], w[j]) * (m[j, i] * gram[i, j]).real
    return float(value)


def quantum_bell_value(SA: ProjectorSet, SB: ProjectorSet, weights: Sequence, state, tol: float = 1e-9) -> float:
    """Bell expression for Alice measuring SA and Bob SB on a state of dimension dA * dB."""
    if SA.n != SB.n:
        raise DimensionMismatch(f"Alice has {SA.n} projectors, Bob {SB.n}")
    w = [float(x) for x in _weights(weights, SA.n)]
    r = as_density(state, SA.dim * SB.dim)

    def joint(i: int, j: int) -> float:
        v = np.kron(SA.array[i], SB.array[j])
        return float((v.conj() @ r @ v).real)

    value = sum(w[i] * joint(i, i) for i in range(SA.n))
    for i, j in orthogonality_graph(SA, tol=tol).edges:
        value -= max(w[i], w[j]) / 2 * (joint(i, j) + joint(j, i))
    return float(value)


def to_nonlocal_game(bell: BellInequality, quantum_lhs: Optional[float] = None) -> GameSpec:
    """
    Game with one question per nonzero term, asked with probability |c| / Z. Positive terms are
    won when both players answer 1, negative terms unless they do. A strategy's winning
    probability is then (LHS + N) / Z, with N the total weight of negative terms.
    """
    terms = [t for t in bell.terms if t.coeff != 0]
    scale = sum((abs(t.coeff) for t in terms), Fraction(0))
    if scale == 0:
        raise ValueError("inequality has no nonzero terms")
    offset = sum((-t.coeff for t in terms if t.coeff < 0), Fraction(0))
    questions = [
        GameQuestion(alice=t.alice, bob=t.bob, probability=abs(t.coeff) / scale, reward_on_both_one=t.coeff > 0)
        for t in terms
    ]
    game = GameSpec(
        questions=questions,
        scale=scale,
        offset=offset,
        classical_value=(bell.bound + offset) / scale,
        quantum_value=None if quantum_lhs is None else (quantum_lhs + float(offset)) / float(scale),
    )
    logging.debug(f"Game with {len(questions)} questions, classical value {game.classical_value}")
    return game


def value_pair(S: ProjectorSet, weights: Sequence, tol: float = 1e-9) -> Tuple[float, float]:
    """Noncontextuality value at 1/d and Bell value at the maximally entangled state with Bob conjugated."""
    d = S.dim
    nc = quantum_nc_value(S, weights, np.eye(d) / d, tol=tol)
    bell = quantum_bell_value(S, conjugate_set(S), weights, maximally_entangled(d), tol=tol)
    return nc, bell


__all__ = [
    "bell_inequality_from_graph",
    "build_bell_inequality",
    "build_nc_inequality",
    "lhv_bound_bruteforce",
    "nc_inequality_from_graph",
    "nchv_bound_bruteforce",
    "quantum_bell_value",
    "quantum_nc_value",
    "to_nonlocal_game",
    "value_pair",
]
