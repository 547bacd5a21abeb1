from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agents.ks_logic import (
    bug_instance,
    check_tifs,
    criticality_report,
    find_complete_bases,
    is_ks_set,
    ks_solve,
    maxmixed_nc_model,
    verify_tifs,
    verify_tits,
)
from agents.ortho_graph import delete_vertices, orthogonality_graph
from interfaces.graph import WeightedGraph
from interfaces.ks import KSInstance, NCModelCertificate, NCModelInfeasibility
from interfaces.projector_set import ProjectorSet
from utils.errors import AdjacentEndpoints, IndexOutOfRange


def test_yuoh_bases(yuoh):
    inst = find_complete_bases(yuoh)
    assert inst.bases == [[0, 1, 5], [0, 4, 10], [3, 4, 7], [8, 9, 10]]
    for basis in inst.bases:
        total = sum(yuoh.projector_array(k) for k in basis)
        assert np.allclose(total, np.eye(3))


def test_kcbs_has_no_basis(kcbs):
    assert find_complete_bases(kcbs).bases == []


def test_yuoh_is_not_a_ks_set(yuoh):
    inst = find_complete_bases(yuoh)
    result = ks_solve(inst)
    assert result.exists
    assert result.assignment.satisfies(inst)
    assert not is_ks_set(inst)
    assert not criticality_report(inst).is_ks_set


def test_single_basis_assignments():
    inst = find_complete_bases(ProjectorSet.from_arrays(np.eye(3)))
    assert ks_solve(inst, mode="count").count == 3
    listed = ks_solve(inst, mode="enumerate").assignments
    assert [a.dump() for a in listed] == ["001", "010", "100"]
    assert ks_solve(inst, mode="count", fixed={0: 0}).count == 2
    assert not ks_solve(inst, fixed={0: 1, 1: 1}).exists


def test_solver_arguments():
    inst = bug_instance()
    with pytest.raises(ValueError):
        ks_solve(inst, mode="all")
    with pytest.raises(IndexOutOfRange):
        ks_solve(inst, fixed={8: 1})


def test_bug_forces_its_endpoint():
    inst = bug_instance()
    assert verify_tifs(inst, 0, 4)
    check = check_tifs(inst, 0, 4)
    assert check.holds and check.counterexample is None
    # B = 1 is still possible on its own
    assert ks_solve(inst, fixed={4: 1}).exists


@pytest.mark.parametrize("v", [1, 2, 3, 5, 6, 7])
def test_bug_is_critical(v):
    reduced = bug_instance().delete_vertex(v)
    b = 3 if v < 4 else 4
    assert reduced.graph.labels[b] == "B"
    check = check_tifs(reduced, 0, b)
    assert not check.holds
    assert check.counterexample.satisfies(reduced)


def test_adjacent_endpoints_are_rejected():
    with pytest.raises(AdjacentEndpoints):
        check_tifs(bug_instance(), 0, 1)


def test_tits_from_a_basis():
    # A is orthogonal to D and E, the partners of C in the basis {C, D, E}
    graph = WeightedGraph(n=4, edges=[(1, 2), (1, 3), (2, 3), (0, 2), (0, 3)], labels=["A", "C", "D", "E"])
    inst = KSInstance(graph=graph, bases=[[1, 2, 3]], d=3)
    assert verify_tits(inst, 0, 1)
    assert not verify_tits(inst, 1, 0)


def test_odd_cycle_of_bases_is_a_critical_ks_set():
    triangle = WeightedGraph(n=3, edges=[(0, 1), (1, 2), (0, 2)])
    inst = KSInstance(graph=triangle, bases=[[0, 1], [1, 2], [0, 2]], d=2)
    report = criticality_report(inst)
    assert report.is_ks_set
    assert report.is_critical
    assert report.blocking_vertices == []


def test_maxmixed_model_on_yuoh(yuoh):
    G = orthogonality_graph(yuoh)
    witness = maxmixed_nc_model(G, 3)
    assert isinstance(witness, NCModelInfeasibility)
    assert witness.verify(G)
    assert witness.maxmixed_value > witness.alpha
    for v in range(G.n):
        H = orthogonality_graph(yuoh.delete([v]))
        model = maxmixed_nc_model(H, 3)
        assert isinstance(model, NCModelCertificate), v
        assert model.verify(H)


def test_maxmixed_model_on_pentagon(kcbs):
    G = orthogonality_graph(kcbs)
    model = maxmixed_nc_model(G, 3)
    assert isinstance(model, NCModelCertificate)
    assert model.verify(G)


@st.composite
def ks_instances(draw, max_n=16):
    n = draw(st.integers(3, max_n))
    vertex = st.integers(0, n - 1)
    bases = draw(st.lists(st.lists(vertex, min_size=3, max_size=3, unique=True), max_size=6))
    edges = {p for b in bases for p in combinations(sorted(b), 2)}
    for a, b in draw(st.lists(st.tuples(vertex, vertex), max_size=n)):
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return KSInstance(graph=WeightedGraph(n=n, edges=sorted(edges)), bases=bases, d=3)


def _brute_assignments(inst: KSInstance):
    masks = inst.graph.masks
    basis_masks = [sum(1 << v for v in b) for b in inst.bases]
    found = []
    for code in range(1 << inst.n):
        if any(code >> v & 1 and code & masks[v] for v in range(inst.n)):
            continue
        if all(bin(code & b).count("1") == 1 for b in basis_masks):
            found.append([code >> v & 1 for v in range(inst.n)])
    return sorted(found)


@settings(max_examples=30, deadline=None)
@given(ks_instances())
def test_solver_matches_exhaustive_search(inst):
    expected = _brute_assignments(inst)
    assert ks_solve(inst, mode="count").count == len(expected)
    assert [a.values for a in ks_solve(inst, mode="enumerate").assignments] == expected
    result = ks_solve(inst)
    assert result.exists == bool(expected)
    if result.exists:
        assert result.assignment.values in expected


@settings(max_examples=30, deadline=None)
@given(ks_instances(max_n=10))
def test_tifs_is_symmetric(inst):
    expected = _brute_assignments(inst)
    for a, b in combinations(range(inst.n), 2):
        if inst.graph.has_edge(a, b):
            continue
        forced = not any(x[a] and x[b] for x in expected)
        assert verify_tifs(inst, a, b) == verify_tifs(inst, b, a) == forced


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    edges = [p for p in combinations(range(n), 2) if draw(st.booleans())]
    return WeightedGraph(n=n, edges=edges)


@settings(max_examples=20, deadline=None)
@given(small_graphs(), st.integers(2, 4))
def test_maxmixed_model_is_monotone(G, d):
    feasible = isinstance(maxmixed_nc_model(G, d), NCModelCertificate)
    if feasible:
        assert isinstance(maxmixed_nc_model(G, d + 1), NCModelCertificate)
        for v in range(G.n):
            assert isinstance(maxmixed_nc_model(delete_vertices(G, [v]), d), NCModelCertificate), v
    else:
        assert not isinstance(maxmixed_nc_model(G, d - 1), NCModelCertificate)
