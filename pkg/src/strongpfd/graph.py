"""Core graph representation and small-graph utilities.

Graphs are finite, simple and undirected.  Vertices are the dense integers
``0..n-1``; adjacency is stored as sorted tuples (for deterministic iteration)
with parallel frozensets (for fast membership and intersections, the hot path
of the neighborhood-based algorithms).  Instances are immutable after
construction and safe to share.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import GraphInputError

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Normalize an undirected edge to (min, max) form."""
    return (u, v) if u <= v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertex ids ``0..n-1``.

    Equality compares vertex count and edge set only; labels are carried
    along as presentation metadata and ignored by ``__eq__``.
    """

    __slots__ = ("n", "adjacency", "labels", "_adjsets", "_m")

    def __init__(self, n: int, edges: Iterable[Edge], labels: Optional[Sequence[str]] = None):
        if n < 0:
            raise GraphInputError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adj)
        self._adjsets: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._m = sum(len(s) for s in adj) // 2
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphInputError("label count does not match vertex count")
        self.labels: Optional[tuple[str, ...]] = labels

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self._adjsets[v]

    def closed(self, v: int) -> frozenset[int]:
        """Closed neighborhood N[v] = {v} together with all neighbors."""
        self._check_vertex(v)
        return self._adjsets[v] | {v}

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adjsets[u]

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def label_of(self, v: int) -> str:
        self._check_vertex(v)
        return self.labels[v] if self.labels is not None else str(v)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphInputError(f"vertex {v} not in range 0..{self.n - 1}")

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = _component_of(self, 0, self._adjsets)
        return len(seen) == self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def relabel(self, labels: Optional[Sequence[str]]) -> "Graph":
        """Copy with the given labels (or without labels when None)."""
        return Graph(self.n, self.edges(), labels)


@dataclass(frozen=True)
class VertexMap:
    """A bijection between two vertex id spaces, stored in both directions."""

    forward: tuple[int, ...]

    def __post_init__(self):
        inverse: dict[int, int] = {}
        for src, dst in enumerate(self.forward):
            if dst in inverse:
                raise GraphInputError("vertex map is not injective")
            inverse[dst] = src
        object.__setattr__(self, "_inverse", inverse)

    def apply(self, v: int) -> int:
        return self.forward[v]

    def invert(self, v: int) -> int:
        return self._inverse[v]

    def domain_size(self) -> int:
        return len(self.forward)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(enumerate(self.forward))


@dataclass(frozen=True)
class BfsResult:
    """A BFS ordering with parent pointers; ``complete`` is False when the
    allowed set was disconnected and only the root's component was traversed."""

    order: tuple[int, ...]
    parent: dict[int, int]
    complete: bool


def closed_neighborhood(g: Graph, v: int, k: int = 1) -> frozenset[int]:
    """All vertices at distance at most ``k`` from ``v`` (including ``v``)."""
    g._check_vertex(v)
    if k < 1:
        raise GraphInputError("neighborhood radius must be at least 1")
    frontier = {v}
    seen = {v}
    for _ in range(k):
        frontier = {u for w in frontier for u in g.adjacency[w]} - seen
        if not frontier:
            break
        seen |= frontier
    return frozenset(seen)


def induced_subgraph(g: Graph, w: Iterable[int]) -> tuple[Graph, VertexMap]:
    """Subgraph induced by ``w`` with ids compacted to 0..|w|-1.

    The returned map sends subgraph ids back into the host graph.
    """
    keep = sorted(set(w))
    if not keep:
        raise GraphInputError("cannot induce a subgraph on an empty vertex set")
    for v in keep:
        g._check_vertex(v)
    index = {v: i for i, v in enumerate(keep)}
    keepset = set(keep)
    edges = [
        (index[u], index[v])
        for u in keep
        for v in g.adjacency[u]
        if u < v and v in keepset
    ]
    labels = tuple(g.label_of(v) for v in keep) if g.labels is not None else None
    return Graph(len(keep), edges, labels), VertexMap(tuple(keep))


def bfs_order(
    g: Graph,
    root: int,
    allowed: Optional[Iterable[int]] = None,
    tie_key: Optional[Callable[[int], int]] = None,
) -> BfsResult:
    """Breadth-first ordering of ``allowed`` starting at ``root``.

    Neighbors are visited by ascending vertex id unless ``tie_key`` overrides
    the tie-break.  Each non-root vertex records the vertex it was first
    reached from as its parent.
    """
    allowed_set = set(allowed) if allowed is not None else set(g.vertices())
    if root not in allowed_set:
        raise GraphInputError(f"BFS root {root} is not in the allowed set")
    key = tie_key if tie_key is not None else (lambda v: v)
    order = [root]
    parent: dict[int, int] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        w = queue.popleft()
        for u in sorted(g.adjacency[w], key=key):
            if u in allowed_set and u not in seen:
                seen.add(u)
                parent[u] = w
                order.append(u)
                queue.append(u)
    return BfsResult(tuple(order), parent, complete=len(order) == len(allowed_set))


def connected_components(
    g: Graph, edge_filter: Optional[Callable[[int, int], bool]] = None
) -> list[frozenset[int]]:
    """Vertex sets of the components of the (optionally edge-filtered) graph.

    Components are listed by their smallest contained vertex id.
    """
    if edge_filter is None:
        adjsets = g._adjsets
    else:
        adjsets = _filtered_adjacency(g, edge_filter)
    seen: set[int] = set()
    out: list[frozenset[int]] = []
    for v in g.vertices():
        if v in seen:
            continue
        comp = _component_of(g, v, adjsets)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _filtered_adjacency(g: Graph, edge_filter: Callable[[int, int], bool]):
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges():
        if edge_filter(u, v):
            adj[u].add(v)
            adj[v].add(u)
    return [frozenset(s) for s in adj]


def _component_of(g: Graph, start: int, adjsets) -> set[int]:
    comp = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for u in adjsets[w]:
            if u not in comp:
                comp.add(u)
                queue.append(u)
    return comp


def subgraph_of_edges(n: int, edges: Iterable[Edge], vertices: Iterable[int]) -> tuple[Graph, VertexMap]:
    """Compact the given vertices and edge list into a standalone graph."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    sub_edges = [(index[u], index[v]) for u, v in edges]
    return Graph(len(keep), sub_edges), VertexMap(tuple(keep))


# -- isomorphism ------------------------------------------------------------


def _joint_refinement(g1: Graph, g2: Graph) -> Optional[tuple[list[int], list[int]]]:
    """Iterated neighbor-color refinement computed jointly over both graphs.

    Returns stable color vectors, or None as soon as the color histograms
    diverge (then the graphs cannot be isomorphic).
    """
    colors1 = [g1.degree(v) for v in g1.vertices()]
    colors2 = [g2.degree(v) for v in g2.vertices()]
    for _ in range(max(g1.n, 1)):
        sig1 = [
            (colors1[v], tuple(sorted(colors1[u] for u in g1.adjacency[v])))
            for v in g1.vertices()
        ]
        sig2 = [
            (colors2[v], tuple(sorted(colors2[u] for u in g2.adjacency[v])))
            for v in g2.vertices()
        ]
        if sorted(sig1) != sorted(sig2):
            return None
        rank = {sig: i for i, sig in enumerate(sorted(set(sig1)))}
        new1 = [rank[s] for s in sig1]
        new2 = [rank[s] for s in sig2]
        if new1 == colors1 and new2 == colors2:
            break
        colors1, colors2 = new1, new2
    return colors1, colors2


def isomorphic(g1: Graph, g2: Graph) -> Optional[VertexMap]:
    """Search for an isomorphism g1 -> g2; returns a witness map or None.

    Backtracking over vertices of g1 (rarest refinement color first), with
    candidates restricted to like-colored vertices of g2 and checked against
    the partial map edge by edge.  Intended for desk-scale graphs.
    """
    if g1.n != g2.n or g1.m != g2.m:
        return None
    if g1.n == 0:
        return None
    refined = _joint_refinement(g1, g2)
    if refined is None:
        return None
    colors1, colors2 = refined
    by_color2: dict[int, list[int]] = {}
    for v in g2.vertices():
        by_color2.setdefault(colors2[v], []).append(v)
    # Rarest color class first keeps the branching factor low.
    order = sorted(g1.vertices(), key=lambda v: (len(by_color2[colors1[v]]), v))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_color2[colors1[v]]:
            if w in used:
                continue
            ok = True
            for u in mapping:
                if g1.has_edge(v, u) != g2.has_edge(w, mapping[u]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    if not extend(0):
        return None
    return VertexMap(tuple(mapping[v] for v in g1.vertices()))


def isomorphic_under_map(g1: Graph, g2: Graph, vmap: VertexMap) -> bool:
    """Check whether a fixed bijection is an isomorphism; linear in edges."""
    if g1.n != g2.n or vmap.domain_size() != g1.n:
        raise GraphInputError("map is not a bijection between the vertex sets")
    for v in vmap.forward:
        g2._check_vertex(v)
    if g1.m != g2.m:
        return False
    # Same edge count plus injectivity: forward preservation suffices.
    return all(g2.has_edge(vmap.apply(u), vmap.apply(v)) for u, v in g1.edges())
