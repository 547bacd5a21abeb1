import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from agents.invariants import alpha, enumerate_maximal_cliques, fractional_chromatic
from agents.ortho_graph import orthogonality_graph
from interfaces.graph import WeightedGraph
from interfaces.invariant_report import FractionalColoringResult
from interfaces.ks import (
    CriticalityReport,
    KSAssignment,
    KSInstance,
    KSSolveResult,
    NCModelCertificate,
    NCModelInfeasibility,
    TIFSCheck,
)
from interfaces.projector_set import ProjectorSet
from utils.errors import AdjacentEndpoints, IndexOutOfRange, TooLarge

MAX_ENUMERATE_N = 64


def find_complete_bases(S: ProjectorSet, tol: float = 1e-8, ortho_tol: float = 1e-9) -> KSInstance:
    """Orthogonality graph of S with every d-clique whose projectors sum to the identity marked as a basis."""
    G = orthogonality_graph(S, tol=ortho_tol)
    d = S.dim
    identity = np.eye(d)
    bases = set()
    for clique in enumerate_maximal_cliques(G, budget=10**6):
        if len(clique) < d:
            continue
        for subset in combinations(clique, d):
            if subset in bases:
                continue
            total = sum(S.projector_array(k) for k in subset)
            if np.abs(total - identity).max() <= tol:
                bases.add(subset)
    return KSInstance(graph=G, bases=[list(b) for b in sorted(bases)], d=d)


class _Search:
    """Bitmask search for 0/1 assignments under (I) no two adjacent ones and (II) exactly one per basis."""

    def __init__(self, inst: KSInstance):
        self.n = inst.n
        self.masks = inst.graph.masks
        self.bases = []
        for basis in inst.bases:
            mask = 0
            for v in basis:
                mask |= 1 << v
            self.bases.append(mask)
        self.in_basis = 0
        for mask in self.bases:
            self.in_basis |= mask
        self.full = (1 << self.n) - 1

    def propagate(self, ones: int, zeros: int) -> Optional[Tuple[int, int]]:
        while True:
            if ones & zeros:
                return None
            forced_zero = 0
            m = ones
            while m:
                low = m & -m
                forced_zero |= self.masks[low.bit_length() - 1]
                m ^= low
            if forced_zero & ones:
                return None
            changed = bool(forced_zero & ~zeros)
            zeros |= forced_zero
            for basis in self.bases:
                if basis & ones:
                    continue
                free = basis & ~zeros
                if free == 0:
                    return None
                if free & (free - 1) == 0:
                    ones |= free
                    changed = True
            if not changed:
                return ones, zeros

    def lookahead(self, ones: int, zeros: int) -> Optional[Tuple[int, int]]:
        """
        Propagation plus one-step lookahead to a fixpoint: a free vertex whose truth propagates
        to a conflict is false. Only vertices next to a basis that has lost a member are tried.
        """
        while True:
            state = self.propagate(ones, zeros)
            if state is None:
                return None
            ones, zeros = state
            frontier = 0
            for basis in self.bases:
                if basis & ones or not basis & zeros:
                    continue
                free = basis & ~zeros
                frontier |= free
                m = free
                while m:
                    low = m & -m
                    frontier |= self.masks[low.bit_length() - 1]
                    m ^= low
            candidates = frontier & ~(ones | zeros) & self.in_basis
            failed = 0
            while candidates:
                low = candidates & -candidates
                if self.propagate(ones | low, zeros) is None:
                    failed |= low
                candidates ^= low
            if not failed:
                return ones, zeros
            zeros |= failed

    def exists(self, ones: int, zeros: int) -> Optional[int]:
        state = self.lookahead(ones, zeros)
        if state is None:
            return None
        ones, zeros = state
        best_free, best_count = None, None
        for basis in self.bases:
            if basis & ones:
                continue
            free = basis & ~zeros
            count = bin(free).count("1")
            if best_count is None or count < best_count:
                best_free, best_count = free, count
        if best_free is None:
            return ones
        while best_free:
            low = best_free & -best_free
            found = self.exists(ones | low, zeros)
            if found is not None:
                return found
            zeros |= low
            best_free ^= low
        return None

    def enumerate(self, ones: int, zeros: int, out: List[int], limit: Optional[int]) -> None:
        if limit is not None and len(out) >= limit:
            return
        state = self.propagate(ones, zeros)
        if state is None:
            return
        ones, zeros = state
        unassigned = self.full & ~(ones | zeros)
        if unassigned == 0:
            out.append(ones)
            return
        low = unassigned & -unassigned
        self.enumerate(ones, zeros | low, out, limit)
        self.enumerate(ones | low, zeros, out, limit)

    def count(self, ones: int, zeros: int) -> int:
        state = self.propagate(ones, zeros)
        if state is None:
            return 0
        ones, zeros = state
        unassigned = self.full & ~(ones | zeros)
        if unassigned == 0:
            return 1
        low = unassigned & -unassigned
        return self.count(ones, zeros | low) + self.count(ones | low, zeros)


def _to_values(ones: int, n: int) -> List[int]:
    return [ones >> v & 1 for v in range(n)]


def ks_solve(
    inst: KSInstance,
    mode: str = "exists",
    fixed: Optional[Dict[int, int]] = None,
    max_n: int = MAX_ENUMERATE_N,
) -> KSSolveResult:
    """
    Solve the KS assignment problem.

    exists: first assignment found by propagation plus branching on the most constrained basis;
    enumerate / count: every assignment, in lexicographic order of the 0/1 strings.
    """
    if mode not in ("exists", "enumerate", "count"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "exists" and inst.n > max_n:
        raise TooLarge(f"ks {mode}", inst.n, max_n)

    ones = zeros = 0
    for v, value in (fixed or {}).items():
        if not 0 <= v < inst.n:
            raise IndexOutOfRange(f"vertex {v} outside 0..{inst.n - 1}")
        if value:
            ones |= 1 << v
        else:
            zeros |= 1 << v

    search = _Search(inst)
    if mode == "exists":
        found = search.exists(ones, zeros)
        assignment = None if found is None else KSAssignment(values=_to_values(found, inst.n))
        return KSSolveResult(mode=mode, exists=found is not None, assignment=assignment)
    if mode == "count":
        total = search.count(ones, zeros)
        return KSSolveResult(mode=mode, exists=total > 0, count=total)

    found: List[int] = []
    search.enumerate(ones, zeros, found, None)
    assignments = sorted((KSAssignment(values=_to_values(m, inst.n)) for m in found), key=lambda a: a.values)
    return KSSolveResult(mode=mode, exists=bool(assignments), assignments=assignments, count=len(assignments))


def is_ks_set(inst: KSInstance) -> bool:
    return not ks_solve(inst, mode="exists").exists


def _deletion_is_ks(inst: KSInstance, v: int) -> bool:
    return is_ks_set(inst.delete_vertex(v))


def criticality_report(inst: KSInstance, jobs: int = 1) -> CriticalityReport:
    if not is_ks_set(inst):
        return CriticalityReport(is_ks_set=False, is_critical=False)
    vertices = list(range(inst.n))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            still_ks = list(pool.map(_deletion_is_ks, [inst] * inst.n, vertices))
    else:
        still_ks = [_deletion_is_ks(inst, v) for v in vertices]
    blocking = [v for v, flag in zip(vertices, still_ks) if flag]
    if blocking:
        logging.info(f"KS set is not critical; {len(blocking)} vertices can be removed, first {inst.graph.labels[blocking[0]]}")
    return CriticalityReport(is_ks_set=True, is_critical=not blocking, blocking_vertices=blocking)


def is_critical_ks(inst: KSInstance, jobs: int = 1) -> bool:
    return criticality_report(inst, jobs=jobs).is_critical


def check_tifs(inst: KSInstance, a: int, b: int) -> TIFSCheck:
    """A = 1 must force B = 0 in every assignment."""
    if inst.graph.has_edge(a, b):
        raise AdjacentEndpoints(f"vertices {a} and {b} are orthogonal; A = 1 forcing B = 0 is trivial")
    result = ks_solve(inst, mode="exists", fixed={a: 1, b: 1})
    return TIFSCheck(a=a, b=b, holds=not result.exists, counterexample=result.assignment)


def verify_tifs(inst: KSInstance, a: int, b: int) -> bool:
    return check_tifs(inst, a, b).holds


def verify_tits(inst: KSInstance, a: int, c: int) -> bool:
    """A = 1 must force C = 1 in every assignment."""
    return not ks_solve(inst, mode="exists", fixed={a: 1, c: 0}).exists


def nc_model_from_cover(cover: FractionalColoringResult, n: int, d: int) -> NCModelCertificate:
    """
    Turn a fractional coloring of value <= d into a probability distribution over independent
    sets with every marginal exactly 1/d.

    Each set's mass is split at the points where its members' remaining coverage runs out,
    so no vertex is covered more than once; leftover mass goes to the empty set.
    """
    remaining = [Fraction(1)] * n
    masses: Dict[Tuple[int, ...], Fraction] = {}

    def add(members, mass: Fraction) -> None:
        if mass > 0:
            key = tuple(sorted(members))
            masses[key] = masses.get(key, Fraction(0)) + mass

    for members, y in zip(cover.independent_sets, cover.cover_weights):
        take = {v: min(y, remaining[v]) for v in members}
        previous = Fraction(0)
        for threshold in sorted({t for t in take.values() if t > 0}):
            add([v for v in members if take[v] >= threshold], threshold - previous)
            previous = threshold
        add([], y - previous)
        for v in members:
            remaining[v] -= take[v]

    if any(r != 0 for r in remaining):
        raise ValueError("covering weights do not cover every vertex")
    add([], Fraction(d) - cover.value)
    support = sorted(masses)
    return NCModelCertificate(d=d, support=[list(s) for s in support], mu=[masses[s] / d for s in support])


def maxmixed_nc_model(G: WeightedGraph, d: int) -> Union[NCModelCertificate, NCModelInfeasibility]:
    """
    Is there a noncontextual model whose marginals are all 1/d? It exists iff chi_f(G) <= d.
    Feasible: the distribution. Infeasible: the fractional clique, whose total over d beats alpha.
    """
    cover = fractional_chromatic(G)
    if cover.value <= d:
        return nc_model_from_cover(cover, G.n, d)
    weights = cover.clique_weights
    return NCModelInfeasibility(
        d=d,
        weights=weights,
        alpha=alpha(G.with_weights(weights)).value,
        maxmixed_value=sum(weights, Fraction(0)) / d,
    )


def bug_instance() -> KSInstance:
    """The eight-vertex bug graph: vertex 0 (A) true forces vertex 4 (B) false."""
    edges = [(0, 1), (0, 7), (1, 2), (1, 3), (2, 3), (5, 6), (5, 7), (6, 7), (2, 6), (3, 4), (4, 5)]
    graph = WeightedGraph(n=8, edges=edges, labels=["A", "b1", "b2", "b3", "B", "b5", "b6", "b7"])
    return KSInstance(graph=graph, bases=[[1, 2, 3], [5, 6, 7]], d=3)
