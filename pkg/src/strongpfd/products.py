"""Strong and Cartesian products, coordinatizations, fibers and projections.

n-ary products are built directly with row-major vertex numbering: the vertex
with coordinate vector (x1, ..., xn) gets index sum(x_i * stride_i) where the
last factor varies fastest.  An edge of a product is *Cartesian* when its
endpoints differ in exactly one coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Iterable, Optional, Sequence

from .errors import GraphInputError, InternalInvariantError
from .graph import Edge, Graph, edge_key, isomorphic


@dataclass(frozen=True)
class Coordinates:
    """Per-vertex coordinate vectors of a product graph.

    ``factor_sizes[j]`` is the vertex count of factor j; ``vectors[v]`` is the
    coordinate tuple of host vertex v.  The vertex -> vector map is a
    bijection onto the full coordinate grid.
    """

    factor_sizes: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        strides = _strides(self.factor_sizes)
        object.__setattr__(self, "_strides", strides)
        index: dict[tuple[int, ...], int] = {}
        for v, vec in enumerate(self.vectors):
            if len(vec) != len(self.factor_sizes):
                raise GraphInputError("coordinate vector length mismatch")
            index[vec] = v
        if len(index) != len(self.vectors):
            raise GraphInputError("coordinate vectors are not pairwise distinct")
        object.__setattr__(self, "_index", index)

    @property
    def k(self) -> int:
        return len(self.factor_sizes)

    def vector(self, v: int) -> tuple[int, ...]:
        return self.vectors[v]

    def vertex_at(self, vec: tuple[int, ...]) -> int:
        return self._index[vec]

    def differing_positions(self, u: int, v: int) -> tuple[int, ...]:
        a, b = self.vectors[u], self.vectors[v]
        return tuple(j for j in range(len(a)) if a[j] != b[j])


def _strides(sizes: Sequence[int]) -> tuple[int, ...]:
    strides = [1] * len(sizes)
    for j in range(len(sizes) - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]
    return tuple(strides)


def _grid_coordinates(factors: Sequence[Graph]) -> Coordinates:
    sizes = tuple(f.n for f in factors)
    vectors = tuple(iter_product(*(range(s) for s in sizes)))
    return Coordinates(sizes, vectors)


def _product_labels(factors: Sequence[Graph]) -> Optional[tuple[str, ...]]:
    if any(f.labels is None for f in factors):
        return None
    parts = [f.labels for f in factors]
    return tuple(
        ",".join(p[c] for p, c in zip(parts, vec))
        for vec in iter_product(*(range(f.n) for f in factors))
    )


def strong_product(factors: Sequence[Graph]) -> tuple[Graph, Coordinates]:
    """Strong product of the given factors.

    Vertices are adjacent iff they differ in at least one coordinate and every
    differing coordinate pair is an edge of its factor.
    """
    if not factors:
        raise GraphInputError("strong product of an empty factor list")
    if any(f.n == 0 for f in factors):
        raise GraphInputError("factors must be nonempty")
    coords = _grid_coordinates(factors)
    edges: list[Edge] = []
    for v, vec in enumerate(coords.vectors):
        # Enumerate the closed neighborhood of each coordinate and keep the
        # strictly larger product vertices; yields each edge exactly once.
        choices = [sorted(f.closed(c)) for f, c in zip(factors, vec)]
        for wvec in iter_product(*choices):
            if wvec == vec:
                continue
            w = coords.vertex_at(wvec)
            if w > v:
                edges.append((v, w))
    g = Graph(len(coords.vectors), edges, _product_labels(factors))
    return g, coords


def cartesian_product(factors: Sequence[Graph]) -> tuple[Graph, Coordinates]:
    """Cartesian product: adjacency iff exactly one coordinate differs by an edge."""
    if not factors:
        raise GraphInputError("cartesian product of an empty factor list")
    if any(f.n == 0 for f in factors):
        raise GraphInputError("factors must be nonempty")
    coords = _grid_coordinates(factors)
    edges: list[Edge] = []
    for v, vec in enumerate(coords.vectors):
        for j, f in enumerate(factors):
            for c in f.adjacency[vec[j]]:
                wvec = vec[:j] + (c,) + vec[j + 1 :]
                w = coords.vertex_at(wvec)
                if w > v:
                    edges.append((v, w))
    g = Graph(len(coords.vectors), edges, _product_labels(factors))
    return g, coords


@dataclass(frozen=True)
class EdgeClass:
    """Classification of a product edge relative to a coordinatization."""

    cartesian: bool
    positions: tuple[int, ...]

    @property
    def position(self) -> int:
        if not self.cartesian:
            raise GraphInputError("non-Cartesian edge has no single position")
        return self.positions[0]


def classify_edge(coords: Coordinates, e: Edge) -> EdgeClass:
    """Cartesian (one differing position) or non-Cartesian (the full set)."""
    u, v = e
    diff = coords.differing_positions(u, v)
    if not diff:
        raise InternalInvariantError(f"endpoints of {e} share all coordinates")
    return EdgeClass(cartesian=len(diff) == 1, positions=diff)


def fiber(coords: Coordinates, host: Graph, j: int, x: int) -> frozenset[int]:
    """Vertices agreeing with ``x`` everywhere except possibly position ``j``."""
    host._check_vertex(x)
    if not (0 <= j < coords.k):
        raise GraphInputError(f"factor index {j} out of range")
    vec = coords.vector(x)
    out = []
    for c in range(coords.factor_sizes[j]):
        out.append(coords.vertex_at(vec[:j] + (c,) + vec[j + 1 :]))
    return frozenset(out)


def project(coords: Coordinates, w: Iterable[int], j: int) -> frozenset[int]:
    """Set of j-th coordinates over the given host vertices."""
    if not (0 <= j < coords.k):
        raise GraphInputError(f"factor index {j} out of range")
    return frozenset(coords.vector(v)[j] for v in w)


@dataclass(frozen=True)
class Factorization:
    """An ordered factor list plus the coordinatization of the host graph."""

    factors: tuple[Graph, ...]
    coords: Coordinates
    kind: str  # "strong" | "cartesian"

    def __post_init__(self):
        if self.kind not in ("strong", "cartesian"):
            raise GraphInputError(f"unknown product kind {self.kind!r}")

    def nontrivial_factors(self) -> tuple[Graph, ...]:
        return tuple(f for f in self.factors if f.n > 1)

    def reconstruct(self) -> tuple[Graph, Coordinates]:
        build = strong_product if self.kind == "strong" else cartesian_product
        return build(list(self.factors))


def verify_factorization(host: Graph, fz: Factorization) -> bool:
    """Exact check that the factors under the coordinatization rebuild the host."""
    if len(fz.coords.vectors) != host.n:
        return False
    expect = 1
    for f in fz.factors:
        expect *= f.n
    if expect != host.n:
        return False
    prod, pcoords = fz.reconstruct()
    if prod.m != host.m:
        return False
    try:
        to_prod = [pcoords.vertex_at(fz.coords.vector(v)) for v in host.vertices()]
    except KeyError:
        return False
    if len(set(to_prod)) != host.n:
        return False
    return all(prod.has_edge(to_prod[u], to_prod[v]) for u, v in host.edges())


def factor_multiset_key(factors: Iterable[Graph]) -> tuple:
    """Order-insensitive invariant of a factor list, for quick comparisons."""
    return tuple(
        sorted(
            (f.n, f.m, tuple(sorted(f.degree(v) for v in f.vertices())))
            for f in factors
            if f.n > 1
        )
    )


def same_factor_multiset(a: Iterable[Graph], b: Iterable[Graph]) -> bool:
    """Equality of factor multisets up to isomorphism, ignoring K1 units."""
    left = [f for f in a if f.n > 1]
    right = [f for f in b if f.n > 1]
    if factor_multiset_key(left) != factor_multiset_key(right):
        return False
    remaining = list(right)
    for f in left:
        for i, h in enumerate(remaining):
            if f.n == h.n and f.m == h.m and isomorphic(f, h) is not None:
                remaining.pop(i)
                break
        else:
            return False
    return not remaining
