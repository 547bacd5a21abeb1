import logging
import math
from itertools import combinations
from typing import List, Optional, Sequence

import networkx as nx
import numpy as np

from interfaces.graph import WeightedGraph
from interfaces.projector_set import ProjectorSet
from utils.errors import AmbiguousOverlap, IndexOutOfRange, TooLarge

GUARD_BAND = 100
MAX_HOLE_SEARCH = 64


def orthogonality_graph(S: ProjectorSet, tol: float = 1e-9) -> WeightedGraph:
    """
    Vertices are the vectors of S, edges join orthogonal pairs: |<v_i|v_j>| <= tol.
    Overlaps in (tol, 100 tol) are neither clearly orthogonal nor clearly not.
    """
    S.check_normalized()
    overlaps = np.abs(S.array.conj() @ S.array.T)
    edges = []
    for i, j in combinations(range(S.n), 2):
        overlap = float(overlaps[i, j])
        if overlap <= tol:
            edges.append((i, j))
        elif overlap < GUARD_BAND * tol:
            raise AmbiguousOverlap(i, j, overlap)
    return WeightedGraph(n=S.n, edges=edges, labels=S.labels)


def is_chordal(G: WeightedGraph) -> bool:
    return nx.is_chordal(G.nx_graph)


def complement(G: WeightedGraph) -> WeightedGraph:
    edges = [(i, j) for i, j in combinations(range(G.n), 2) if not G.has_edge(i, j)]
    return WeightedGraph(n=G.n, edges=edges, weights=G.weights, labels=G.labels)


def induced_subgraph(G: WeightedGraph, vertices: Sequence[int]) -> WeightedGraph:
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < G.n:
            raise IndexOutOfRange(f"vertex {v} outside 0..{G.n - 1}")
    index = {v: k for k, v in enumerate(keep)}
    return WeightedGraph(
        n=len(keep),
        edges=[(index[a], index[b]) for a, b in G.edges if a in index and b in index],
        weights=[G.weights[v] for v in keep],
        labels=[G.labels[v] for v in keep],
    )


def delete_vertices(G: WeightedGraph, vertices: Sequence[int]) -> WeightedGraph:
    drop = set(vertices)
    for v in drop:
        if not 0 <= v < G.n:
            raise IndexOutOfRange(f"vertex {v} outside 0..{G.n - 1}")
    return induced_subgraph(G, [v for v in range(G.n) if v not in drop])


def _find_odd_hole(masks: List[int], n: int) -> Optional[List[int]]:
    """Induced odd cycle of length >= 5, built from induced paths whose smallest vertex is the start."""

    def extend(path: List[int], path_mask: int, blocked: int) -> Optional[List[int]]:
        start, last = path[0], path[-1]
        candidates = masks[last] & ~blocked & ~path_mask & above
        while candidates:
            low = candidates & -candidates
            y = low.bit_length() - 1
            candidates ^= low
            if masks[start] >> y & 1 and len(path) >= 2:
                # y closes the cycle; it cannot extend the path without a chord to start
                if len(path) + 1 >= 5 and (len(path) + 1) % 2 == 1:
                    return path + [y]
                continue
            grown = blocked | (masks[last] if last != start else 0)
            found = extend(path + [y], path_mask | low, grown)
            if found:
                return found
        return None

    for s in range(n):
        above = ~((1 << (s + 1)) - 1)
        found = extend([s], 1 << s, 0)
        if found:
            return found
    return None


def find_odd_hole(G: WeightedGraph) -> Optional[List[int]]:
    if G.n > MAX_HOLE_SEARCH:
        raise TooLarge("odd hole search", G.n, MAX_HOLE_SEARCH)
    return _find_odd_hole(G.masks, G.n)


def find_odd_antihole(G: WeightedGraph) -> Optional[List[int]]:
    if G.n > MAX_HOLE_SEARCH:
        raise TooLarge("odd antihole search", G.n, MAX_HOLE_SEARCH)
    return _find_odd_hole(complement(G).masks, G.n)


def has_odd_hole_or_antihole(G: WeightedGraph) -> bool:
    hole = find_odd_hole(G)
    if hole is not None:
        logging.debug(f"Odd hole of length {len(hole)}: {[G.labels[v] for v in hole]}")
        return True
    antihole = find_odd_antihole(G)
    if antihole is not None:
        logging.debug(f"Odd antihole of length {len(antihole)}: {[G.labels[v] for v in antihole]}")
        return True
    return False


def girth(G: WeightedGraph) -> Optional[int]:
    """Length of a shortest cycle, None for a forest."""
    shortest = nx.girth(G.nx_graph)
    return None if math.isinf(shortest) else int(shortest)


def johnson_graph(n: int, k: int) -> WeightedGraph:
    """J(n, k): vertices are the k-subsets of {1..n}, adjacent when they share k - 1 elements."""
    subsets = list(combinations(range(1, n + 1), k))
    edges = [
        (a, b)
        for a, b in combinations(range(len(subsets)), 2)
        if len(set(subsets[a]) & set(subsets[b])) == k - 1
    ]
    labels = ["{" + ",".join(str(x) for x in s) + "}" for s in subsets]
    return WeightedGraph(n=len(subsets), edges=edges, labels=labels)
