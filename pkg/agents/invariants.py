import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

import networkx as nx

from agents.ortho_graph import has_odd_hole_or_antihole, is_chordal
from interfaces.graph import WeightedGraph
from interfaces.invariant_report import (
    ColoringResult,
    FractionalColoringResult,
    IndependenceResult,
    InvariantReport,
    RationalLPResult,
    ThetaResult,
)
from tools.rational_simplex import maximize
from tools.sdp_solver import lovasz_theta_sdp
from utils.errors import ConvergenceFailure, OutputBudgetExceeded, TooLarge

MAX_ALPHA_N = 64
MAX_CHI_N = 32
ENUMERATION_BUDGET = 20_000
MAX_SEPARATION_ROUNDS = 500


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def alpha(G: WeightedGraph, max_n: int = MAX_ALPHA_N) -> IndependenceResult:
    """
    Exact maximum-weight independent set by branch and bound.

    Branching includes the lowest-index candidate first and only strictly better sets replace
    the incumbent, so the witness is the lowest-index-first optimum.
    """
    if G.n > max_n:
        raise TooLarge("alpha", G.n, max_n)
    masks, weights = G.masks, G.weights
    candidates = 0
    for v in range(G.n):
        if weights[v] > 0:
            candidates |= 1 << v

    best_value = Fraction(-1)
    best_set = 0

    def clique_cover_bound(cand: int) -> Fraction:
        bound = Fraction(0)
        remaining = cand
        while remaining:
            low = remaining & -remaining
            v = low.bit_length() - 1
            clique = low
            heaviest = weights[v]
            common = masks[v] & remaining
            for u in _bits(common):
                if common >> u & 1:
                    clique |= 1 << u
                    heaviest = max(heaviest, weights[u])
                    common &= masks[u]
            bound += heaviest
            remaining &= ~clique
        return bound

    def search(cand: int, chosen: int, value: Fraction) -> None:
        nonlocal best_value, best_set
        if cand == 0:
            if value > best_value:
                best_value, best_set = value, chosen
            return
        if value + clique_cover_bound(cand) <= best_value:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        search(cand & ~masks[v] & ~low, chosen | low, value + weights[v])
        search(cand & ~low, chosen, value)

    search(candidates, 0, Fraction(0))
    return IndependenceResult(value=max(best_value, Fraction(0)), witness=list(_bits(best_set)))


def _maximal(G: WeightedGraph, members: Sequence[int]) -> List[int]:
    """Extend an independent set greedily by lowest index to a maximal one."""
    chosen = set(members)
    blocked = 0
    for v in chosen:
        blocked |= G.masks[v] | (1 << v)
    for v in range(G.n):
        if not blocked >> v & 1:
            chosen.add(v)
            blocked |= G.masks[v] | (1 << v)
    return sorted(chosen)


def _incidence(sets: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    rows = []
    for members in sets:
        row = [0] * n
        for v in members:
            row[v] = 1
        rows.append(row)
    return rows


def enumerate_maximal_independent_sets(G: WeightedGraph, budget: int = ENUMERATION_BUDGET) -> List[List[int]]:
    if G.n == 0:
        return [[]]
    found = []
    for clique in nx.find_cliques(nx.complement(G.nx_graph)):
        found.append(sorted(clique))
        if len(found) > budget:
            raise OutputBudgetExceeded(budget)
    return sorted(found)


def enumerate_maximal_cliques(G: WeightedGraph, budget: int = ENUMERATION_BUDGET) -> List[List[int]]:
    if G.n == 0:
        return []
    found = []
    for clique in nx.find_cliques(G.nx_graph):
        found.append(sorted(clique))
        if len(found) > budget:
            raise OutputBudgetExceeded(budget)
    return sorted(found)


def greedy_independent_sets(G: WeightedGraph) -> List[List[int]]:
    """Color classes of a greedy coloring, each extended to a maximal independent set; they cover V."""
    coloring = nx.greedy_color(G.nx_graph, strategy="largest_first")
    classes = {}
    for v, color in coloring.items():
        classes.setdefault(color, []).append(v)
    return sorted({tuple(_maximal(G, members)) for members in classes.values()})


def independent_set_pool(G: WeightedGraph, budget: int = ENUMERATION_BUDGET) -> List[List[int]]:
    try:
        return enumerate_maximal_independent_sets(G, budget)
    except OutputBudgetExceeded:
        logging.info(f"More than {budget} maximal independent sets; starting from a greedy pool instead")
        return [list(s) for s in greedy_independent_sets(G)]


def fractional_chromatic(
    G: WeightedGraph,
    max_n: int = MAX_ALPHA_N,
    budget: int = ENUMERATION_BUDGET,
) -> FractionalColoringResult:
    """
    chi_f(G) as the exact optimum of the fractional clique LP

        maximize sum_v x_v  subject to  sum_{v in I} x_v <= 1 for every independent set I,

    by row generation over independent sets, separated with the exact weighted alpha.
    The covering weights are the LP duals.
    """
    if G.n > max_n:
        raise TooLarge("fractional chromatic number", G.n, max_n)
    if G.n == 0:
        return FractionalColoringResult(value=Fraction(0), independent_sets=[], cover_weights=[], clique_weights=[])

    pool = [list(s) for s in independent_set_pool(G, budget)]
    seen = {tuple(s) for s in pool}
    ones = [Fraction(1)] * G.n
    for round_ in range(MAX_SEPARATION_ROUNDS):
        lp = maximize(ones, _incidence(pool, G.n), [Fraction(1)] * len(pool))
        separation = alpha(G.with_weights(lp.primal), max_n=max_n)
        if separation.value <= 1:
            break
        violated = tuple(_maximal(G, separation.witness))
        if violated in seen:
            raise ConvergenceFailure("separation returned a set already in the pool", {"alpha": float(separation.value)})
        seen.add(violated)
        pool.append(list(violated))
    else:
        raise ConvergenceFailure("fractional chromatic row generation did not converge", {"rounds": MAX_SEPARATION_ROUNDS})

    support = [(members, y) for members, y in zip(pool, lp.dual) if y > 0]
    logging.debug(f"chi_f = {lp.optimum} after {round_ + 1} LP solves, {len(pool)} sets in the pool")
    return FractionalColoringResult(
        value=lp.optimum,
        independent_sets=[members for members, _ in support],
        cover_weights=[y for _, y in support],
        clique_weights=lp.primal,
    )


def fractional_packing(G: WeightedGraph, budget: int = ENUMERATION_BUDGET) -> RationalLPResult:
    """alpha*(G): maximize sum_v x_v with every clique carrying total weight at most 1."""
    if G.n == 0:
        return RationalLPResult(optimum=Fraction(0), primal=[], dual=[], pivots=0)
    cliques = enumerate_maximal_cliques(G, budget)
    return maximize([Fraction(1)] * G.n, _incidence(cliques, G.n), [Fraction(1)] * len(cliques))


def lovasz_theta(G: WeightedGraph) -> ThetaResult:
    return lovasz_theta_sdp(G.n, G.edges)


def clique_number(G: WeightedGraph) -> int:
    return max((len(c) for c in enumerate_maximal_cliques(G, budget=10**7)), default=0)


def _k_coloring(G: WeightedGraph, k: int) -> Optional[List[int]]:
    """DSATUR backtracking search for a proper k-coloring."""
    n, masks = G.n, G.masks
    colors = [-1] * n

    def pick() -> int:
        best, best_key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            saturation = len({colors[u] for u in _bits(masks[v]) if colors[u] >= 0})
            uncolored = sum(1 for u in _bits(masks[v]) if colors[u] < 0)
            key = (saturation, uncolored, -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    def solve(colored: int, used: int) -> bool:
        if colored == n:
            return True
        v = pick()
        forbidden = {colors[u] for u in _bits(masks[v]) if colors[u] >= 0}
        # a fresh color is only tried once, so the search never branches on color symmetry
        for c in range(min(used + 1, k)):
            if c in forbidden:
                continue
            colors[v] = c
            if solve(colored + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    return list(colors) if solve(0, 0) else None


def chromatic_number(G: WeightedGraph, max_n: int = MAX_CHI_N) -> ColoringResult:
    if G.n > max_n:
        raise TooLarge("chromatic number", G.n, max_n)
    if G.n == 0:
        return ColoringResult(chi=0, coloring=[], lower_bound=0)
    omega = clique_number(G)
    chi_f = fractional_chromatic(G).value
    lower = max(omega, math.ceil(chi_f))
    for k in range(lower, G.n + 1):
        coloring = _k_coloring(G, k)
        if coloring is not None:
            logging.debug(f"chi = {k} (lower bound {lower})")
            return ColoringResult(chi=k, coloring=coloring, lower_bound=lower)
    raise AssertionError("every graph is n-colorable")


def graph_profile(G: WeightedGraph, d: Optional[int] = None, theta: bool = True) -> InvariantReport:
    """Every invariant at once, with the sandwich alpha <= theta <= alpha* and chi_f <= chi."""
    independence = alpha(G)
    coloring = chromatic_number(G) if G.n <= MAX_CHI_N else None
    chi_f = fractional_chromatic(G).value
    theta_result = lovasz_theta(G) if theta else None
    report = InvariantReport(
        n=G.n,
        alpha=independence.value,
        alpha_witness=independence.witness,
        chi=coloring.chi if coloring else None,
        coloring=coloring.coloring if coloring else None,
        chi_f=chi_f,
        theta=theta_result.value if theta_result else None,
        theta_tol=theta_result.tolerance if theta_result else None,
        alpha_star=fractional_packing(G).optimum,
        is_chordal=is_chordal(G),
        has_odd_hole_or_antihole=has_odd_hole_or_antihole(G),
        d=d,
        chi_exceeds_d=(coloring.chi > d) if (coloring and d is not None) else None,
        chi_f_exceeds_d=(chi_f > d) if d is not None else None,
    )
    if not report.sandwich_holds():
        logging.warning(f"Invariant sandwich violated: {report.model_dump()}")
    return report


__all__ = [
    "alpha",
    "chromatic_number",
    "clique_number",
    "enumerate_maximal_cliques",
    "enumerate_maximal_independent_sets",
    "fractional_chromatic",
    "fractional_packing",
    "graph_profile",
    "greedy_independent_sets",
    "independent_set_pool",
    "lovasz_theta",
]
