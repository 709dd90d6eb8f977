import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphlift.catalog import (
    InducedSubgraph,
    build_degree_function,
    canonicalize,
    classify,
    code_from_edges,
    compatible_orderings,
    count_compatible_orderings,
    edges_from_code,
    get_type,
    graphlet_types,
    pairs,
)
from graphlift.generators import complete_graph


@pytest.mark.parametrize("k,expected", [(1, 1), (2, 1), (3, 2), (4, 6), (5, 21), (6, 112)])
def test_number_of_types(k, expected):
    assert len(graphlet_types(k)) == expected


@pytest.mark.slow
def test_number_of_7_vertex_types():
    assert len(graphlet_types(7)) == 853


def test_four_vertex_index_order():
    names = [t.name for t in graphlet_types(4)]
    assert names == ["3-star", "4-path", "4-tailedtriangle", "4-cycle", "4-chordalcycle", "4-clique"]
    assert [t.edge_count for t in graphlet_types(4)] == [3, 3, 4, 4, 5, 6]


def test_get_type_aliases():
    assert get_type("triangle") is get_type("3-2")
    assert get_type("3-clique") is get_type("triangle")
    assert get_type("3-path") is get_type("wedge")
    assert get_type("3-star") is get_type("4-1")
    assert get_type("5-path").k == 5
    with pytest.raises(ValueError):
        get_type("triangle", k=4)
    with pytest.raises(ValueError):
        get_type("4-7")
    with pytest.raises(ValueError):
        get_type("hexagon")


def _random_connected_edges(draw, k):
    tree = [(draw(st.integers(0, i - 1)), i) for i in range(1, k)]
    extra = draw(st.lists(st.sampled_from(list(pairs(k))), max_size=k * (k - 1) // 2))
    return sorted(set(tree) | set(extra))


@st.composite
def labelled_graphlets(draw):
    k = draw(st.integers(2, 6))
    edges = _random_connected_edges(draw, k)
    perm = draw(st.permutations(range(k)))
    return k, edges, perm


@settings(max_examples=200, deadline=None)
@given(labelled_graphlets())
def test_canonical_code_is_permutation_invariant(case):
    k, edges, perm = case
    relabelled = [(perm[a], perm[b]) for a, b in edges]
    c1, _ = canonicalize(k, code_from_edges(k, edges))
    c2, _ = canonicalize(k, code_from_edges(k, relabelled))
    assert c1 == c2


@settings(max_examples=100, deadline=None)
@given(labelled_graphlets())
def test_canonical_order_maps_onto_canonical_graph(case):
    k, edges, _ = case
    canon, order = canonicalize(k, code_from_edges(k, edges))
    eset = {frozenset(e) for e in edges}
    mapped = {frozenset((order[i], order[j])) for i, j in edges_from_code(k, canon)}
    assert mapped == eset


@pytest.mark.parametrize("k", [3, 4, 5])
def test_automorphisms_fix_the_code(k):
    for t in graphlet_types(k):
        autos = t.automorphisms()
        assert tuple(range(k)) in autos
        for p in autos:
            relabelled = [(p[a], p[b]) for a, b in t.edges]
            assert code_from_edges(k, relabelled) == t.code


def _brute_force_co(k, edges):
    adj = {i: set() for i in range(k)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    total = 0
    for order in itertools.permutations(range(k)):
        if all(adj[order[i]] & set(order[:i]) for i in range(1, k)):
            total += 1
    return total


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_co_count_matches_brute_force(k):
    for t in graphlet_types(k):
        assert t.co_count == _brute_force_co(k, t.edges)


@pytest.mark.parametrize("k", range(3, 8))
def test_co_closed_forms(k):
    assert get_type(f"{k}-path").co_count == 2 ** (k - 1)
    assert get_type(f"{k}-clique").co_count == math.factorial(k)


def test_compatible_orderings_generator_agrees():
    t = get_type("4-tailedtriangle")
    masks = [int("".join(map(str, row[::-1])), 2) for row in t.adjacency]
    assert len(list(compatible_orderings(masks))) == t.co_count == count_compatible_orderings(t)


def test_classify_induced_subgraph():
    g = complete_graph(5)
    s = InducedSubgraph.from_graph(g, [0, 1, 2, 3])
    t, _ = classify(s)
    assert t.name == "4-clique"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(2, 40), min_size=3, max_size=3))
def test_triangle_wedge_constants_under_d_d_minus_1(degrees):
    f = lambda d: d * (d - 1)
    tri = build_degree_function(get_type("triangle"), f)
    assert tri.exact(degrees) == 6
    wedge = build_degree_function(get_type("wedge"), f)
    center_first = sorted(degrees, reverse=True)
    t = get_type("wedge")
    hub = int(np.argmax(t.degrees))
    dv = [1] * 3
    dv[hub] = max(center_first[0], 2)
    others = [i for i in range(3) if i != hub]
    dv[others[0]], dv[others[1]] = center_first[1], center_first[2]
    assert wedge.exact(dv) == 2


def test_degree_function_rejects_impossible_degrees():
    tri = build_degree_function(get_type("triangle"), lambda d: d)
    with pytest.raises(ValueError):
        tri((1, 2, 2))
    with pytest.raises(ValueError):
        tri((2, 2))
