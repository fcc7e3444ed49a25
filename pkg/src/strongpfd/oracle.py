"""Brute-force ground truth for primality and factorization on small graphs.

Entirely independent of the skeleton/local machinery: candidate factor pairs
are enumerated exhaustively (up to isomorphism), pruned only by exact counting
identities, and accepted purely by product reconstruction plus isomorphism.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator, Optional

from .errors import GraphInputError
from .graph import Graph, isomorphic
from .products import strong_product


def enumerate_connected_graphs(n: int) -> Iterator[Graph]:
    """Every connected simple graph on n vertices, once per isomorphism class.

    Exhausts all edge subsets and filters by canonical representatives, so it
    is intended for n <= 7 (and is comfortable only up to 6).
    """
    if n < 1 or n > 7:
        raise GraphInputError("exhaustive enumeration supports 1 <= n <= 7")
    if n == 1:
        yield Graph(1, [])
        return
    pairs = list(combinations(range(n), 2))
    seen: dict[tuple, list[Graph]] = {}
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len(edges) < n - 1:
            continue
        g = Graph(n, edges)
        if not g.is_connected():
            continue
        key = _invariant(g)
        bucket = seen.setdefault(key, [])
        if any(isomorphic(g, h) is not None for h in bucket):
            continue
        bucket.append(g)
        yield g


def _invariant(g: Graph) -> tuple:
    degrees = tuple(sorted(g.degree(v) for v in g.vertices()))
    triangles = tuple(
        sorted(
            sum(
                1
                for a, b in combinations(g.adjacency[v], 2)
                if g.has_edge(a, b)
            )
            for v in g.vertices()
        )
    )
    common = tuple(
        sorted(len(g.neighbor_set(u) & g.neighbor_set(v)) for u, v in g.edges())
    )
    return (g.n, g.m, degrees, triangles, common)


def random_connected_graph(n: int, rng: random.Random, p: float = 0.5) -> Graph:
    """Connected Erdos-Renyi sample by rejection; always terminates for p > 0."""
    if n < 1:
        raise GraphInputError("need at least one vertex")
    pairs = list(combinations(range(n), 2))
    while True:
        edges = [e for e in pairs if rng.random() < p]
        g = Graph(n, edges)
        if g.is_connected():
            return g


def _divisor_pairs(n: int) -> list[tuple[int, int]]:
    out = []
    a = 2
    while a * a <= n:
        if n % a == 0:
            out.append((a, n // a))
        a += 1
    return out


def brute_force_pfd(g: Graph, limit: int = 10) -> list[Graph]:
    """Prime factor multiset with respect to the strong product, by exhaustion.

    For each split |V| = a*b the candidate factors on a and b vertices are
    enumerated up to isomorphism, pruned by the exact edge-count identity
    m = nA*mB + nB*mA + 2*mA*mB and the degree identity
    deg(x,y) = (degA(x)+1)(degB(y)+1) - 1, then confirmed by building the
    product and testing isomorphism.  Recurses on any accepted pair.
    """
    if g.n > limit:
        raise GraphInputError(f"oracle limited to {limit} vertices, got {g.n}")
    if not g.is_connected():
        raise GraphInputError("oracle requires a connected graph")
    if g.n == 1:
        return [g]
    g_degrees = sorted(g.degree(v) for v in g.vertices())
    for a, b in _divisor_pairs(g.n):
        for ga in enumerate_connected_graphs(a):
            da = [ga.degree(v) + 1 for v in ga.vertices()]
            for gb in enumerate_connected_graphs(b):
                if g.m != ga.n * gb.m + gb.n * ga.m + 2 * ga.m * gb.m:
                    continue
                db = [gb.degree(v) + 1 for v in gb.vertices()]
                if sorted(x * y - 1 for x in da for y in db) != g_degrees:
                    continue
                prod, _ = strong_product([ga, gb])
                if isomorphic(prod, g) is not None:
                    return brute_force_pfd(ga, limit) + brute_force_pfd(gb, limit)
    return [g]


def is_prime_oracle(g: Graph, limit: int = 10) -> bool:
    """True when the brute-force decomposition yields a single factor."""
    return len(brute_force_pfd(g, limit)) == 1
