import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bubblestar.cayley import bs3_alias_edges, canonical_matchings
from bubblestar.graph import FaultSet, Graph, GraphError, apply_faults, canon
from bubblestar.matching import (
    ALMOST_PERFECT,
    ANY,
    PERFECT,
    Matching,
    deficiency_witness,
    has_almost_perfect_matching,
    has_perfect_matching,
    max_matching,
    verify_matching,
)

from oracles import brute_max_matching_size, random_bipartite


def edges_of(alias, names):
    return [alias[x] for x in names]


def test_apply_faults_vertex(bs3):
    view = apply_faults(bs3, FaultSet.of_vertices([bs3.index("123")]))
    assert view.order == 5 and view.size() == 6
    assert bs3.size == 9  # base untouched


def test_apply_faults_edges(bs3):
    alias = bs3_alias_edges(bs3)
    view = apply_faults(bs3, FaultSet.of_edges(edges_of(alias, "afg")))
    assert view.order == 6 and view.size() == 6
    assert view.neighbors(bs3.index("123")) == []


def test_apply_faults_empty_and_invalid(bs3):
    view = apply_faults(bs3, FaultSet())
    assert view.order == 6 and list(view.edges()) == bs3.edges
    with pytest.raises(GraphError):
        apply_faults(bs3, FaultSet.of_vertices([6]))
    with pytest.raises(GraphError):
        apply_faults(bs3, FaultSet.of_edges([(0, 3)]))


def test_induced_edges(bs3):
    f = FaultSet.of_vertices([0])
    assert f.induced_edges(bs3) == {canon(0, w) for w in bs3.neighbors(0)}


def test_max_matching_examples(bs3):
    assert max_matching(bs3).coverage == 6
    evens = [bs3.index("123"), bs3.index("231")]
    assert max_matching(apply_faults(bs3, FaultSet.of_vertices(evens))).coverage == 2
    assert max_matching(Graph(2, [(0, 1)])).coverage == 2


def test_pm_apm_examples(bs3, bs4):
    assert has_perfect_matching(bs4)
    minus_one = apply_faults(bs3, FaultSet.of_vertices([0]))
    assert has_almost_perfect_matching(minus_one)
    assert not has_perfect_matching(minus_one)
    assert not has_almost_perfect_matching(bs4)


def test_verify_matching_examples(bs3):
    alias = bs3_alias_edges(bs3)
    assert verify_matching(bs3, edges_of(alias, "ace"), PERFECT)
    assert verify_matching(bs3, edges_of(alias, "ghp"), PERFECT)
    check = verify_matching(bs3, edges_of(alias, "ab"), ANY)
    assert not check and check.reason == "overlap"
    check = verify_matching(bs3, edges_of(alias, "ac"), PERFECT)
    assert not check and check.reason == "coverage"
    view = apply_faults(bs3, FaultSet.of_edges([alias["a"]]))
    check = verify_matching(view, edges_of(alias, "ace"), PERFECT)
    assert not check and check.reason == "missing-edge"
    odd = apply_faults(bs3, FaultSet.of_vertices([0]))
    assert verify_matching(odd, edges_of(alias, "ce"), ALMOST_PERFECT)


def test_matching_rejects_overlap():
    with pytest.raises(ValueError):
        Matching([(0, 1), (1, 2)])


def test_warm_start_gives_same_cardinality(bs5):
    plus, _ = canonical_matchings(bs5)
    rng = random.Random(3)
    for _ in range(30):
        dead = rng.sample(bs5.edges, 6)
        view = apply_faults(bs5, FaultSet.of_edges(dead))
        assert max_matching(view, plus.edges).coverage == max_matching(view).coverage


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_max_matching_equals_brute_force(rng):
    order, edges, side = random_bipartite(rng, 12)
    g = Graph(order, edges, side)
    m = max_matching(g)
    assert verify_matching(g, m)
    assert len(m) == brute_max_matching_size(edges)
    a, b = side.count(0), side.count(1)
    assert len(m) <= min(a, b)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_cardinality_invariant_under_relabeling(rng):
    order, edges, side = random_bipartite(rng, 12)
    perm = list(range(order))
    rng.shuffle(perm)
    relabeled = Graph(order, [(perm[u], perm[v]) for u, v in edges], [side[perm.index(v)] for v in range(order)])
    assert len(max_matching(Graph(order, edges, side))) == len(max_matching(relabeled))


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_hall_witness_when_coverage_falls_short(rng):
    order, edges, side = random_bipartite(rng, 12)
    g = Graph(order, edges, side)
    m = max_matching(g)
    s, ns = deficiency_witness(g, m)
    free_left = sum(1 for v in range(order) if side[v] == 0 and v not in m.covered)
    assert len(s) - len(ns) == free_left
    assert all(w in ns for v in s for w in g.neighbors(v))
