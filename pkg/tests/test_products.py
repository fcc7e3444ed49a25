"""Products: construction, coordinatization, fibers, projections, edge classes."""

from __future__ import annotations

import random

import pytest

from strongpfd import (
    GraphInputError,
    cartesian_product,
    classify_edge,
    fiber,
    induced_subgraph,
    isomorphic,
    project,
    strong_product,
)
from strongpfd.graph import Graph
from strongpfd.oracle import random_connected_graph
from strongpfd.products import verify_factorization, Factorization
from strongpfd.skeleton import complete_graph

from conftest import cycle, king_grid, path


def test_strong_product_examples():
    k2 = complete_graph(2)
    g, _ = strong_product([k2, k2])
    assert g == complete_graph(4)
    g, _ = strong_product([Graph(1, []), path(3)])
    assert g == path(3)
    g, _ = strong_product([path(3), path(3)])
    # |V1||E2| + |V2||E1| + 2|E1||E2|
    assert g.m == 3 * 2 + 3 * 2 + 2 * 2 * 2 == 20
    assert g == king_grid(3, 3)
    with pytest.raises(GraphInputError):
        strong_product([])


def test_cartesian_product_examples():
    k2 = complete_graph(2)
    g, _ = cartesian_product([k2, k2])
    assert isomorphic(g, cycle(4)) is not None
    h = path(4)
    g, _ = cartesian_product([Graph(1, []), h])
    assert g == h
    g, _ = cartesian_product([path(3), path(3)])
    assert g.m == 3 * 2 + 3 * 2 == 12


def test_edge_count_identities_random():
    rng = random.Random(2)
    for _ in range(15):
        a = random_connected_graph(rng.randrange(2, 6), rng)
        b = random_connected_graph(rng.randrange(2, 6), rng)
        sg, _ = strong_product([a, b])
        cg, _ = cartesian_product([a, b])
        assert sg.m == a.n * b.m + b.n * a.m + 2 * a.m * b.m
        assert cg.m == a.n * b.m + b.n * a.m


def test_unit_law_random():
    rng = random.Random(3)
    unit = Graph(1, [])
    for _ in range(10):
        h = random_connected_graph(rng.randrange(2, 7), rng)
        assert strong_product([unit, h])[0] == h
        assert cartesian_product([h, unit])[0] == h


def test_commutative_and_associative_up_to_isomorphism():
    rng = random.Random(4)
    for _ in range(8):
        a = random_connected_graph(rng.randrange(2, 5), rng)
        b = random_connected_graph(rng.randrange(2, 5), rng)
        c = random_connected_graph(2, rng)
        ab, _ = strong_product([a, b])
        ba, _ = strong_product([b, a])
        assert isomorphic(ab, ba) is not None
        abc, _ = strong_product([a, b, c])
        nested, _ = strong_product([a, strong_product([b, c])[0]])
        assert isomorphic(abc, nested) is not None


def test_neighborhood_law():
    # <N[(x,y)]> in A boxtimes B is <N[x]> boxtimes <N[y]>
    rng = random.Random(5)
    for _ in range(6):
        a = random_connected_graph(rng.randrange(2, 5), rng)
        b = random_connected_graph(rng.randrange(2, 5), rng)
        g, coords = strong_product([a, b])
        for v in g.vertices():
            x, y = coords.vector(v)
            nb_v, _ = induced_subgraph(g, g.closed(v))
            na, _ = induced_subgraph(a, a.closed(x))
            nbf, _ = induced_subgraph(b, b.closed(y))
            expected, _ = strong_product([na, nbf])
            assert isomorphic(nb_v, expected) is not None


def test_classify_edge_examples():
    g, coords = strong_product([path(3), path(3)])
    e_col = (coords.vertex_at((0, 0)), coords.vertex_at((0, 1)))
    cls = classify_edge(coords, e_col)
    assert cls.cartesian and cls.position == 1
    e_diag = (coords.vertex_at((0, 0)), coords.vertex_at((1, 1)))
    cls = classify_edge(coords, e_diag)
    assert not cls.cartesian and cls.positions == (0, 1)
    k4, kcoords = strong_product([complete_graph(2), complete_graph(2)])
    cls = classify_edge(kcoords, (kcoords.vertex_at((0, 0)), kcoords.vertex_at((1, 1))))
    assert not cls.cartesian and cls.positions == (0, 1)


def test_cartesian_edges_of_each_color_span_host():
    g, coords = strong_product([path(3), cycle(4)])
    for pos in (0, 1):
        touched = set()
        for u, v in g.edges():
            cls = classify_edge(coords, (u, v))
            if cls.cartesian and cls.position == pos:
                touched.update((u, v))
        assert touched == set(g.vertices())


def test_fiber_and_project_examples():
    g, coords = strong_product([path(3), path(3)])
    row = fiber(coords, g, 0, coords.vertex_at((0, 0)))
    assert row == {coords.vertex_at((i, 0)) for i in range(3)}
    col = fiber(coords, g, 1, coords.vertex_at((2, 1)))
    assert col == {coords.vertex_at((2, j)) for j in range(3)}
    sub, _ = induced_subgraph(g, row)
    assert isomorphic(sub, path(3)) is not None
    assert project(coords, g.vertices(), 0) == {0, 1, 2}
    assert project(coords, {coords.vertex_at((0, 1))}, 1) == {1}
    assert project(coords, row, 1) == {0}
    single, scoords = strong_product([Graph(1, []), path(3)])
    assert len(fiber(scoords, single, 0, 0)) == 1
    with pytest.raises(GraphInputError):
        fiber(coords, g, 5, 0)


def test_verify_factorization_detects_mismatch():
    g, coords = strong_product([path(3), path(3)])
    good = Factorization((path(3), path(3)), coords, "strong")
    assert verify_factorization(g, good)
    bad = Factorization((path(3), cycle(3)), coords, "strong")
    assert not verify_factorization(g, bad)
