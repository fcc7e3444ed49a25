"""Relation S, quotients, thinness, S1-condition, backbone."""

from __future__ import annotations

import random

import pytest

from strongpfd import (
    EmptyBackboneError,
    GraphInputError,
    backbone,
    backbone_bfs,
    expand_quotient,
    is_thin,
    isomorphic,
    quotient,
    s_partition,
    satisfies_s1,
    strong_product,
)
from strongpfd.graph import Graph, connected_components
from strongpfd.oracle import random_connected_graph
from strongpfd.skeleton import complete_graph
from strongpfd.thinness import strictly_maximal_vertices

from conftest import cycle, path, random_thin_graph


def brute_s_classes(g: Graph, domain: frozenset[int]) -> set[frozenset[int]]:
    # direct definition: group by closed neighborhood restricted to the domain
    groups: dict[frozenset[int], set[int]] = {}
    for v in domain:
        groups.setdefault(g.closed(v) & domain, set()).add(v)
    return {frozenset(s) for s in groups.values()}


def test_s_partition_examples():
    assert set(s_partition(complete_graph(4)).classes) == {frozenset({0, 1, 2, 3})}
    assert set(s_partition(path(3)).classes) == {frozenset({0}), frozenset({1}), frozenset({2})}
    part = s_partition(path(3), {0, 1})
    assert set(part.classes) == {frozenset({0, 1})}
    with pytest.raises(GraphInputError):
        s_partition(path(3), set())


def test_s_partition_matches_definition_random():
    rng = random.Random(9)
    for _ in range(20):
        g = random_connected_graph(rng.randrange(2, 9), rng)
        dom = frozenset(v for v in g.vertices() if rng.random() < 0.8) or frozenset({0})
        part = s_partition(g, dom)
        assert {frozenset(c) for c in part.classes} == brute_s_classes(g, dom)


def test_is_thin_examples():
    assert is_thin(path(3))
    assert not is_thin(complete_graph(4))
    assert is_thin(strong_product([path(3), path(3)])[0])
    assert not is_thin(complete_graph(2))


def test_quotient_examples():
    q = quotient(complete_graph(4))
    assert q.graph.n == 1 and q.class_sizes == (4,)
    q = quotient(path(3))
    assert q.graph == path(3) and q.class_sizes == (1, 1, 1)
    g, _ = strong_product([complete_graph(2), path(3)])
    q = quotient(g)
    assert isomorphic(q.graph, path(3)) is not None
    assert q.class_sizes == (2, 2, 2)


def test_quotient_is_thin_and_idempotent():
    rng = random.Random(12)
    for _ in range(25):
        g = random_connected_graph(rng.randrange(2, 9), rng)
        q = quotient(g)
        assert is_thin(q.graph)
        assert sum(q.class_sizes) == g.n


def test_quotient_of_product_multiplies_class_sizes():
    rng = random.Random(13)
    for _ in range(10):
        a = random_thin_graph(rng.randrange(3, 6), rng)
        b = random_thin_graph(rng.randrange(3, 6), rng)
        g, _ = strong_product([a, b])
        qa, qb, qg = quotient(a), quotient(b), quotient(g)
        expected, _ = strong_product([qa.graph, qb.graph])
        assert isomorphic(qg.graph, expected) is not None
        assert is_thin(g)  # products of thin graphs are thin


def test_expand_quotient_roundtrip():
    rng = random.Random(14)
    for _ in range(15):
        g = random_connected_graph(rng.randrange(2, 8), rng)
        q = quotient(g)
        rebuilt = expand_quotient(q.graph, q.class_sizes)
        assert isomorphic(rebuilt, g) is not None


def test_satisfies_s1_examples():
    assert satisfies_s1(path(3), {0, 1, 2}, (0, 1))
    assert not satisfies_s1(complete_graph(4), {0, 1, 2, 3}, (0, 1))
    assert not satisfies_s1(path(3), {0, 1}, (0, 1))
    with pytest.raises(GraphInputError):
        satisfies_s1(path(3), {0, 1}, (1, 2))


def test_backbone_examples():
    assert set(backbone(path(3)).vertices) == {1}
    assert set(backbone(path(5)).vertices) == {1, 2, 3}
    g, coords = strong_product([path(3), path(3)])
    assert set(backbone(g).vertices) == {coords.vertex_at((1, 1))}
    bb = backbone(complete_graph(4))
    assert not bb.vertices and not bb.reliable


def test_backbone_is_connected_dominating_and_strictly_maximal():
    rng = random.Random(15)
    for _ in range(30):
        g = random_thin_graph(rng.choice([1, 3, 4, 5, 6, 7, 8]), rng)
        bb = backbone(g)
        assert bb.reliable
        assert bb.vertices == strictly_maximal_vertices(g)
        dominated = set(bb.vertices)
        for v in bb.vertices:
            dominated |= g.neighbor_set(v)
        assert dominated == set(g.vertices())
        # the backbone-induced subgraph is connected
        comps = connected_components(
            g, lambda u, v: u in bb.vertices and v in bb.vertices
        )
        assert sum(1 for c in comps if c & bb.vertices) == 1


def test_backbone_covers_non_s1_edges():
    # for any edge (x,y) with |S_x(x)| > 1 some backbone vertex lies in N[x] & N[y]
    rng = random.Random(16)
    for _ in range(20):
        g = random_thin_graph(rng.randrange(3, 9), rng)
        bb = backbone(g)
        for x, y in g.edges():
            if s_partition(g, g.closed(x)).class_size(x) > 1:
                assert (g.closed(x) & g.closed(y)) & bb.vertices


def test_backbone_bfs_examples():
    res = backbone_bfs(path(3))
    assert res.order == (1,)
    res = backbone_bfs(path(5))
    assert res.order == (1, 2, 3)
    assert res.parent == {2: 1, 3: 2}
    with pytest.raises(EmptyBackboneError):
        backbone_bfs(complete_graph(4))


def test_backbone_bfs_consecutive_coverage():
    rng = random.Random(17)
    for _ in range(20):
        g = random_thin_graph(rng.choice([1, 3, 4, 5, 6, 7, 8]), rng)
        res = backbone_bfs(g)
        seen = {res.order[0]}
        for v in res.order[1:]:
            assert v in res.parent and res.parent[v] in seen
            assert g.has_edge(v, res.parent[v])
            seen.add(v)
