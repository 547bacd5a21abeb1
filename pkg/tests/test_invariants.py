import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agents.invariants import (
    alpha,
    chromatic_number,
    enumerate_maximal_cliques,
    enumerate_maximal_independent_sets,
    fractional_chromatic,
    fractional_packing,
    graph_profile,
    lovasz_theta,
)
from agents.ortho_graph import delete_vertices, johnson_graph, orthogonality_graph
from interfaces.graph import WeightedGraph
from utils.errors import TooLarge

C5 = WeightedGraph(n=5, edges=[(k, (k + 1) % 5) for k in range(5)])


def test_pentagon():
    assert alpha(C5).value == 2
    cover = fractional_chromatic(C5)
    assert cover.value == Fraction(5, 2)
    assert cover.verify(C5)
    assert fractional_packing(C5).optimum == Fraction(5, 2)
    assert lovasz_theta(C5).value == pytest.approx(math.sqrt(5), abs=1e-6)
    assert chromatic_number(C5).chi == 3


def test_yuoh_weighted_alpha(yuoh, yuoh_weights):
    G = orthogonality_graph(yuoh).with_weights(yuoh_weights)
    result = alpha(G)
    assert result.value == 11
    assert G.is_independent(result.witness)
    assert G.weight_of(result.witness) == 11


def test_alpha_witness_is_lowest_index_first():
    path = WeightedGraph(n=4, edges=[(0, 1), (1, 2), (2, 3)])
    assert alpha(path).witness == [0, 2]


def test_johnson_5_2():
    J = johnson_graph(5, 2)
    assert alpha(J).value == 2
    assert fractional_packing(J).optimum == Fraction(5, 2)
    assert lovasz_theta(J).value == pytest.approx(2.5, abs=1e-6)


def test_johnson_7_2_coloring():
    J = johnson_graph(7, 2)
    result = chromatic_number(J)
    assert result.chi == 7
    assert all(result.coloring[i] != result.coloring[j] for i, j in J.edges)
    assert set(result.coloring) == set(range(7))
    assert alpha(J).value == 3
    assert sum(1 for c in enumerate_maximal_cliques(J) if len(c) == 6) == 7


def test_johnson_7_2_fractional_chromatic():
    J = johnson_graph(7, 2)
    assert fractional_chromatic(J).value == 7
    pairs = list(combinations(range(J.n), 2))
    for pair in random.Random(5).sample(pairs, 20):
        H = delete_vertices(J, pair)
        cover = fractional_chromatic(H)
        assert cover.value == Fraction(19, 3), pair
        assert cover.verify(H)


@pytest.mark.extended
def test_johnson_7_2_deletion_sweep():
    J = johnson_graph(7, 2)
    for pair in combinations(range(J.n), 2):
        assert fractional_chromatic(delete_vertices(J, pair)).value == Fraction(19, 3), pair
    for triple in combinations(range(J.n), 3):
        assert fractional_chromatic(delete_vertices(J, triple)).value == 6, triple


def test_maximal_independent_sets_of_pentagon():
    assert sorted(enumerate_maximal_independent_sets(C5)) == [[0, 2], [0, 3], [1, 3], [1, 4], [2, 4]]


def test_profile_of_yuoh(yuoh):
    report = graph_profile(orthogonality_graph(yuoh), d=3)
    assert report.sandwich_holds()
    assert report.chi_f > 3
    assert report.chi_f_exceeds_d and report.chi_exceeds_d
    assert not report.is_chordal
    assert report.has_odd_hole_or_antihole


def test_size_guards():
    big = WeightedGraph(n=65)
    with pytest.raises(TooLarge):
        alpha(big)
    with pytest.raises(TooLarge):
        chromatic_number(WeightedGraph(n=33))


def test_empty_graph():
    empty = WeightedGraph(n=0)
    assert fractional_chromatic(empty).value == 0
    assert chromatic_number(empty).chi == 0


@st.composite
def weighted_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    edges = [p for p in pairs if draw(st.booleans())]
    weights = draw(st.lists(st.integers(0, 5), min_size=n, max_size=n))
    return WeightedGraph(n=n, edges=edges, weights=weights)


def _brute_alpha(G: WeightedGraph) -> Fraction:
    best = Fraction(0)
    for mask in range(1 << G.n):
        members = [v for v in range(G.n) if mask >> v & 1]
        if G.is_independent(members):
            best = max(best, G.weight_of(members))
    return best


@settings(max_examples=60, deadline=None)
@given(weighted_graphs())
def test_alpha_matches_brute_force(G):
    result = alpha(G)
    assert result.value == _brute_alpha(G)
    assert G.is_independent(result.witness)


@settings(max_examples=25, deadline=None)
@given(weighted_graphs(max_n=8))
def test_fractional_chromatic_certificate(G):
    cover = fractional_chromatic(G)
    assert cover.verify(G)
    assert alpha(G.with_weights([1] * G.n)).value * cover.value >= G.n


@settings(max_examples=40, deadline=None)
@given(weighted_graphs(), st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=12))
def test_alpha_scales_with_the_weights(G, c):
    scaled = G.with_weights([c * w for w in G.weights])
    assert alpha(scaled).value == c * alpha(G).value
