"""Shared graph builders and fixture graphs for the test suite."""

from __future__ import annotations

import random

import pytest

from strongpfd import Graph, strong_product
from strongpfd.approx import (
    cycle_graph,
    path_graph,
    path_with_triangle,
    random_thin_prime,
)
from strongpfd.skeleton import complete_graph
from strongpfd.thinness import is_thin


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def king_grid(a: int, b: int) -> Graph:
    """Strong product of two paths, built directly for independence checks."""
    idx = lambda i, j: i * b + j
    edges = []
    for i in range(a):
        for j in range(b):
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    i2, j2 = i + di, j + dj
                    if (di, dj) != (0, 0) and 0 <= i2 < a and 0 <= j2 < b:
                        if idx(i, j) < idx(i2, j2):
                            edges.append((idx(i, j), idx(i2, j2)))
    return Graph(a * b, edges)


def random_thin_graph(n: int, rng: random.Random, p: float = 0.4) -> Graph:
    """Rejection-sample a connected thin graph on n vertices (no such graph
    exists for n = 2, where the only candidate is K2)."""
    from strongpfd.oracle import random_connected_graph

    assert n != 2, "there is no thin connected graph on two vertices"
    while True:
        g = random_connected_graph(n, rng, p)
        if is_thin(g):
            return g


def twisted_double_patch() -> Graph:
    """Two 3x3 king patches glued on six shared vertices, coordinate frames
    rotated against each other.

    Both patch centers (vertices 0 and 1) have thin neighborhoods isomorphic
    to a product of two paths, but one fiber direction of the second patch
    runs along diagonals of the first, so covering 0 -> 1 loses that color's
    continuation and forces the hypercube merge.
    """
    names: dict = {}

    def vid(key):
        if key not in names:
            names[key] = len(names)
        return names[key]

    vid(("A", 0, 0))
    vid(("A", 0, 1))
    a_coords = {(p, q): vid(("A", p, q)) for p in (-1, 0, 1) for q in (-1, 0, 1)}
    b_coords = {
        (0, 0): a_coords[(0, 1)],
        (0, -1): a_coords[(0, 0)],
        (1, 0): a_coords[(1, 0)],
        (1, -1): a_coords[(1, 1)],
        (-1, 0): a_coords[(-1, 0)],
        (-1, -1): a_coords[(-1, 1)],
    }
    for rs in [(-1, 1), (0, 1), (1, 1)]:
        b_coords[rs] = vid(("B",) + rs)
    edges = set()
    for coords in (a_coords, b_coords):
        for c1, u in coords.items():
            for c2, v in coords.items():
                if c1 < c2 and max(abs(c1[0] - c2[0]), abs(c1[1] - c2[1])) == 1:
                    edges.add((min(u, v), max(u, v)))
    return Graph(len(names), sorted(edges))


def twisted_bundle() -> Graph:
    """Prime graph that locally looks like a product of a 4-cycle and a path:
    columns carry a path fiber, consecutive columns are strong-joined, and the
    wrap-around seam reverses the fiber."""
    idx = {(i, j): 3 * i + j for i in range(4) for j in range(3)}
    edges = []
    for i in range(4):
        for j in range(2):
            edges.append((idx[(i, j)], idx[(i, j + 1)]))
    for i in range(4):
        nxt = (i + 1) % 4
        sigma = (lambda j: 2 - j) if i == 3 else (lambda j: j)
        for j in range(3):
            for jp in range(3):
                if abs(sigma(j) - jp) <= 1:
                    e = (idx[(i, j)], idx[(nxt, jp)])
                    edges.append((min(e), max(e)))
    labels = [f"{i},{j}" for i in range(4) for j in range(3)]
    return Graph(12, sorted(set(edges)), labels)


PRIME_CATALOG_SPECS = (
    "path(3)",
    "path(4)",
    "path(5)",
    "cycle(4)",
    "cycle(5)",
    "cycle(6)",
    "path_with_triangle(4)",
    "path_with_triangle(5)",
)


def catalog_primes(rng: random.Random) -> list[Graph]:
    """Thin prime factors for product-recovery sweeps: paths, cycles, paths
    with a triangle, plus oracle-verified random thin primes."""
    from strongpfd.approx import generate

    primes = [generate(s) for s in PRIME_CATALOG_SPECS]
    primes += [random_thin_prime(n, rng.randrange(10_000)) for n in (4, 5, 6)]
    return primes


@pytest.fixture(scope="session")
def repair_fixture() -> Graph:
    return twisted_double_patch()


@pytest.fixture(scope="session")
def bundle_fixture() -> Graph:
    return twisted_bundle()
