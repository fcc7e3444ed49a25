"""The relation S: classes, quotients, thinness, the S1-condition and the backbone.

Two vertices of a graph are S-equivalent when their closed neighborhoods
coincide.  Relative to an induced subgraph H the comparison is restricted to
V(H).  A graph is thin when all S-classes are singletons; thinness is what
makes coordinatizations (and hence Cartesian edges) unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import EmptyBackboneError, GraphInputError
from .graph import BfsResult, Edge, Graph, bfs_order, connected_components


@dataclass(frozen=True)
class SPartition:
    """S-classes of an induced subgraph (the ``domain``) relative to a host graph."""

    domain: frozenset[int]
    classes: tuple[frozenset[int], ...]
    class_of: dict[int, int]

    def class_size(self, v: int) -> int:
        return len(self.classes[self.class_of[v]])

    def is_singleton(self, v: int) -> bool:
        return self.class_size(v) == 1

    def all_singletons(self) -> bool:
        return all(len(c) == 1 for c in self.classes)


def s_partition(g: Graph, domain: Optional[Iterable[int]] = None) -> SPartition:
    """Partition ``domain`` into S-classes: equal closed neighborhoods within it.

    With the full vertex set this is the relation S; restricted fingerprints
    are exact frozensets, so no hash-collision risk is accepted.
    """
    dom = frozenset(domain) if domain is not None else frozenset(g.vertices())
    if not dom:
        raise GraphInputError("S-partition over an empty domain")
    for v in dom:
        g._check_vertex(v)
    groups: dict[frozenset[int], list[int]] = {}
    for v in sorted(dom):
        groups.setdefault(g.closed(v) & dom, []).append(v)
    classes = tuple(
        frozenset(members) for members in sorted(groups.values(), key=lambda ms: ms[0])
    )
    class_of = {v: i for i, cls in enumerate(classes) for v in cls}
    return SPartition(dom, classes, class_of)


def is_thin(g: Graph) -> bool:
    """True when no two vertices share a closed neighborhood."""
    seen = set()
    for v in g.vertices():
        nb = g.closed(v)
        if nb in seen:
            return False
        seen.add(nb)
    return True


@dataclass(frozen=True)
class Quotient:
    """The quotient G/S: one vertex per S-class, adjacency inherited from G."""

    graph: Graph
    class_sizes: tuple[int, ...]
    class_map: dict[int, int]
    partition: SPartition


def quotient(g: Graph) -> Quotient:
    part = s_partition(g)
    k = len(part.classes)
    edges = set()
    for u, v in g.edges():
        cu, cv = part.class_of[u], part.class_of[v]
        if cu != cv:
            edges.add((min(cu, cv), max(cu, cv)))
    qg = Graph(k, sorted(edges))
    sizes = tuple(len(c) for c in part.classes)
    return Quotient(qg, sizes, dict(part.class_of), part)


def expand_quotient(qg: Graph, class_sizes: Iterable[int]) -> Graph:
    """Inverse of ``quotient``: blow each class vertex up into a clique of copies,
    joining all copies across adjacent classes.

    Vertex (class q, copy c) gets id offset(q) + c; copies are consecutive.
    """
    sizes = list(class_sizes)
    if len(sizes) != qg.n or any(s < 1 for s in sizes):
        raise GraphInputError("class sizes must be positive, one per quotient vertex")
    offset = [0] * qg.n
    for q in range(1, qg.n):
        offset[q] = offset[q - 1] + sizes[q - 1]
    n = offset[-1] + sizes[-1] if qg.n else 0
    edges: list[Edge] = []
    for q in range(qg.n):
        for a in range(sizes[q]):
            for b in range(a + 1, sizes[q]):
                edges.append((offset[q] + a, offset[q] + b))
    for qu, qv in qg.edges():
        for a in range(sizes[qu]):
            for b in range(sizes[qv]):
                edges.append((offset[qu] + a, offset[qv] + b))
    return Graph(n, edges)


def satisfies_s1(g: Graph, h_domain: Iterable[int], e: Edge) -> bool:
    """S1-condition: within <h_domain>, at least one endpoint has a singleton S-class."""
    dom = frozenset(h_domain)
    u, v = e
    if u not in dom or v not in dom:
        raise GraphInputError(f"edge {e} has an endpoint outside the domain")
    part = s_partition(g, dom)
    return part.is_singleton(u) or part.is_singleton(v)


@dataclass(frozen=True)
class Backbone:
    """Backbone vertex set; ``reliable`` is False for non-thin hosts, where the
    connected-dominating-set guarantee does not apply."""

    vertices: frozenset[int]
    reliable: bool

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)


def backbone(g: Graph) -> Backbone:
    """Vertices whose S-class within their own closed neighborhood is a singleton.

    For thin connected graphs this is a connected dominating set and coincides
    with the vertices whose closed neighborhood is strictly maximal.  Non-thin
    inputs are allowed (approximate mode runs without the thinness guarantee);
    the result then carries ``reliable=False``.
    """
    members = set()
    for v in g.vertices():
        nv = g.closed(v)
        # |S_v(v)| = 1 iff no other u in N[v] has N[v] subset of N[u].
        if not any(u != v and nv <= g.closed(u) for u in nv):
            members.add(v)
    return Backbone(frozenset(members), reliable=is_thin(g))


def strictly_maximal_vertices(g: Graph) -> frozenset[int]:
    """Vertices v with no w != v satisfying N[v] strictly inside N[w].

    Cross-check only; the backbone computation above is the primary route.
    """
    out = set()
    for v in g.vertices():
        nv = g.closed(v)
        if not any(w != v and nv < g.closed(w) for w in g.vertices()):
            out.add(v)
    return frozenset(out)


@dataclass(frozen=True)
class BackboneOrder:
    """BFS ordering of the backbone; parents point at the first reacher.

    For a disconnected backbone (approximate mode) each component is ordered
    separately, components by their smallest member, and ``complete`` is False.
    """

    order: tuple[int, ...]
    parent: dict[int, int]
    complete: bool


def backbone_bfs(g: Graph, tie_key=None) -> BackboneOrder:
    bb = backbone(g)
    if not bb.vertices:
        raise EmptyBackboneError("graph has no backbone vertices")
    comps = connected_components(g, lambda u, v: u in bb.vertices and v in bb.vertices)
    comps = [c & bb.vertices for c in comps]
    comps = sorted((c for c in comps if c), key=min)
    order: list[int] = []
    parent: dict[int, int] = {}
    key = tie_key if tie_key is not None else (lambda v: v)
    for comp in comps:
        root = min(comp, key=key)
        res: BfsResult = bfs_order(g, root, comp, tie_key=tie_key)
        order.extend(res.order)
        parent.update(res.parent)
    return BackboneOrder(tuple(order), parent, complete=len(comps) == 1)
