"""Dispensability, Cartesian skeleton, Cartesian PFD, classical strong PFD."""

from __future__ import annotations

import random

import pytest

from strongpfd import (
    GraphInputError,
    cartesian_pfd,
    cartesian_product,
    cartesian_skeleton,
    classical_strong_pfd,
    classify_edge,
    extract_complete_factor,
    is_dispensable,
    isomorphic,
    same_factor_multiset,
    strong_product,
    verify_factorization,
)
from strongpfd.graph import Graph, connected_components
from strongpfd.oracle import brute_force_pfd, enumerate_connected_graphs, random_connected_graph
from strongpfd.skeleton import complete_graph
from strongpfd.products import factor_multiset_key

from conftest import cycle, path, random_thin_graph


def test_is_dispensable_examples():
    p3 = path(3)
    assert is_dispensable(p3, (0, 1)) is None
    g, coords = strong_product([path(3), path(3)])
    diag = (coords.vertex_at((0, 0)), coords.vertex_at((1, 1)))
    assert is_dispensable(g, diag) is not None
    grid = (coords.vertex_at((0, 0)), coords.vertex_at((0, 1)))
    assert is_dispensable(g, grid) is None
    with pytest.raises(GraphInputError):
        is_dispensable(p3, (0, 2))


def test_skeleton_of_path_and_product():
    p3 = path(3)
    sk = cartesian_skeleton(p3)
    assert sk.kept == {(0, 1), (1, 2)} and not sk.removed
    g, coords = strong_product([path(3), path(3)])
    sk = cartesian_skeleton(g)
    assert len(sk.kept) == 12 and len(sk.removed) == 8
    # kept edges are exactly the Cartesian ones of the product coordinates
    for u, v in sk.kept:
        assert classify_edge(coords, (u, v)).cartesian
    for u, v in sk.removed:
        assert not classify_edge(coords, (u, v)).cartesian
        assert sk.witness[(u, v)] is not None


def test_skeleton_product_law_and_connectivity():
    rng = random.Random(21)
    for _ in range(12):
        a = random_thin_graph(rng.randrange(3, 6), rng)
        b = random_thin_graph(rng.randrange(3, 6), rng)
        g, coords = strong_product([a, b])
        sk = cartesian_skeleton(g)
        ska = cartesian_skeleton(a).kept
        skb = cartesian_skeleton(b).kept
        expected = set()
        for (x1, y1) in ska:
            for z in range(b.n):
                expected.add(tuple(sorted((coords.vertex_at((x1, z)), coords.vertex_at((y1, z))))))
        for (x2, y2) in skb:
            for z in range(a.n):
                expected.add(tuple(sorted((coords.vertex_at((z, x2)), coords.vertex_at((z, y2))))))
        assert sk.kept == expected
        comps = connected_components(g, lambda u, v: (u, v) in sk.kept)
        assert len(comps) == 1


def test_skeleton_isomorphism_equivariance():
    rng = random.Random(22)
    for _ in range(10):
        g = random_connected_graph(rng.randrange(3, 8), rng)
        perm = list(g.vertices())
        rng.shuffle(perm)
        h = Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
        sk_g = cartesian_skeleton(g).kept
        sk_h = cartesian_skeleton(h).kept
        mapped = {tuple(sorted((perm[u], perm[v]))) for u, v in sk_g}
        assert mapped == sk_h


def test_cartesian_pfd_examples():
    fz = cartesian_pfd(cycle(4))
    assert sorted(f.n for f in fz.factors) == [2, 2]
    fz = cartesian_pfd(path(3))
    assert len(fz.factors) == 1
    g, _ = cartesian_product([path(3), path(4)])
    fz = cartesian_pfd(g)
    assert same_factor_multiset(fz.factors, [path(3), path(4)])


def test_cartesian_pfd_random_products():
    rng = random.Random(23)
    for _ in range(8):
        a = random_connected_graph(rng.randrange(2, 5), rng)
        b = random_connected_graph(rng.randrange(2, 5), rng)
        g, _ = cartesian_product([a, b])
        fz = cartesian_pfd(g)
        expected = cartesian_pfd(a).factors + cartesian_pfd(b).factors
        assert same_factor_multiset(fz.factors, expected)
        rebuilt, rcoords = cartesian_product(list(fz.factors))
        assert rebuilt.m == g.m


def test_cartesian_pfd_prime_cases():
    for g in (path(5), cycle(5), cycle(6), complete_graph(4)):
        assert len(cartesian_pfd(g).factors) == 1


def test_extract_complete_factor_examples():
    l, reduced = extract_complete_factor(complete_graph(4))
    assert l == 4 and reduced.n == 1
    l, reduced = extract_complete_factor(path(3))
    assert l == 1 and reduced == path(3)
    g, _ = strong_product([complete_graph(2), path(3)])
    l, reduced = extract_complete_factor(g)
    assert l == 2 and isomorphic(reduced, path(3)) is not None


def test_classical_examples():
    fz = classical_strong_pfd(complete_graph(4))
    assert sorted(f.n for f in fz.factors) == [2, 2]
    g, _ = strong_product([path(3), path(3)])
    fz = classical_strong_pfd(g)
    assert same_factor_multiset(fz.factors, [path(3), path(3)])
    assert verify_factorization(g, fz)
    fz = classical_strong_pfd(cycle(4))
    assert len(fz.factors) == 1
    with pytest.raises(GraphInputError):
        classical_strong_pfd(Graph(4, [(0, 1), (2, 3)]))


def test_classical_matches_oracle_exhaustively_small():
    for n in range(1, 6):
        for g in enumerate_connected_graphs(n):
            fz = classical_strong_pfd(g)
            assert same_factor_multiset(fz.factors, brute_force_pfd(g))
            assert verify_factorization(g, fz)


def test_classical_recovers_mixed_products():
    cases = [
        [complete_graph(3), path(3)],
        [complete_graph(2), complete_graph(2), path(3)],
        [cycle(5), path(4)],
        [Graph(4, [(0, 1), (1, 2), (1, 3), (2, 3)]), path(3)],  # paw: non-thin prime
    ]
    for factors in cases:
        g, _ = strong_product(factors)
        fz = classical_strong_pfd(g)
        expected = []
        for f in factors:
            expected.extend(brute_force_pfd(f))
        assert same_factor_multiset(fz.factors, expected)
        assert verify_factorization(g, fz)


def test_factor_count_bounded_by_log2():
    rng = random.Random(24)
    for _ in range(10):
        g = random_connected_graph(rng.randrange(2, 9), rng)
        fz = classical_strong_pfd(g)
        nontrivial = [f for f in fz.factors if f.n > 1]
        assert 2 ** len(nontrivial) <= g.n or not nontrivial
