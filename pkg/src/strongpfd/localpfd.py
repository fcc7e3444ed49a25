"""Local covering decomposition of thin graphs.

The driver walks the backbone in BFS order and factors one small subproduct
at a time (1-neighborhoods, edge-neighborhoods, N*-neighborhoods).  Each
factored piece contributes a partial product coloring of the host's edges;
colorings are knitted together by color-continuation, with a diagonalized-
hypercube merge repairing continuations that fail between thin neighborhoods.
The prime factors are finally read off the combined coloring by a verified
component-splitting pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Optional

TraceFn = Callable[[str, dict], None]

from .errors import GraphInputError, InternalInvariantError, NotThinError
from .graph import (
    Edge,
    Graph,
    VertexMap,
    closed_neighborhood,
    edge_key,
    induced_subgraph,
    isomorphic_under_map,
)
from .products import Coordinates, Factorization, classify_edge, strong_product
from .skeleton import (
    _trivial_strong,
    classical_strong_pfd,
    is_dispensable,
    reconstruct_from_quotient,
)
from .thinness import backbone_bfs, is_thin, quotient, s_partition
from .unionfind import UnionFind


@dataclass(frozen=True)
class SubproductView:
    """An induced subproduct together with its embedding into the host graph."""

    host: Graph
    kind: str  # "one" | "edge" | "nstar"
    anchors: tuple[int, ...]
    sub: Graph
    embed: VertexMap  # sub vertex id -> host vertex id

    def host_vertices(self) -> frozenset[int]:
        return frozenset(self.embed.forward)

    def host_edges(self) -> frozenset[Edge]:
        return frozenset(
            edge_key(self.embed.apply(a), self.embed.apply(b)) for a, b in self.sub.edges()
        )


def make_subproduct(g: Graph, kind: str, v: int, w: Optional[int] = None) -> SubproductView:
    """Build a 1-neighborhood, edge-neighborhood or N*-neighborhood view.

    The two edge flavors require (v, w) to be an edge of the host.
    """
    if kind == "one":
        verts = closed_neighborhood(g, v, 1)
        anchors = (v,)
    elif kind in ("edge", "nstar"):
        if w is None or not g.has_edge(v, w):
            raise GraphInputError(f"({v},{w}) must be an edge for flavor {kind!r}")
        if kind == "edge":
            verts = g.closed(v) | g.closed(w)
        else:
            common = g.closed(v) & g.closed(w)
            verts = frozenset().union(*(g.closed(x) for x in common))
        anchors = (v, w)
    else:
        raise GraphInputError(f"unknown subproduct flavor {kind!r}")
    sub, embed = induced_subgraph(g, verts)
    return SubproductView(g, kind, anchors, sub, embed)


class PartialColoring:
    """Partial edge coloring of the host plus a union-find over color ids.

    ``color_of`` keeps the first color an edge ever received; later views that
    re-determine the edge merge their color with it instead of overwriting.
    The canonical color of an edge is the union-find root of its entry.
    """

    def __init__(self):
        self.color_of: dict[Edge, int] = {}
        self.merges = UnionFind()
        self.checked_vertices: set[int] = set()
        self.checked_edges: set[Edge] = set()
        self._next = 0

    def fresh(self) -> int:
        c = self._next
        self._next += 1
        self.merges.add(c)
        return c

    def canonical(self, color: int) -> int:
        return self.merges.find(color)

    def canonical_of_edge(self, e: Edge) -> int:
        return self.merges.find(self.color_of[e])

    def canonical_colors(self) -> tuple[int, ...]:
        return tuple(sorted({self.merges.find(c) for c in self.color_of.values()}))

    def domain(self) -> frozenset[Edge]:
        return frozenset(self.color_of)

    def canonical_edge_map(self) -> dict[Edge, int]:
        return {e: self.merges.find(c) for e, c in self.color_of.items()}


@dataclass(frozen=True)
class ViewColoring:
    """Fresh colors a factored view wants to contribute, before combination."""

    view: SubproductView
    factorization: Factorization
    edge_color: dict[Edge, int]  # host edge -> fresh color id
    colors: tuple[int, ...]  # fresh ids that color at least one edge
    singleton_vertices: frozenset[int]  # host ids with singleton local S-class
    s1_edges: frozenset[Edge]  # host edges satisfying the S1-condition locally


@dataclass(frozen=True)
class ContinuationReport:
    ok: bool
    failing_colors: frozenset[int]


def factor_subgraph(
    view: SubproductView, coloring: PartialColoring, min_factors: int = 0
) -> Optional[ViewColoring]:
    """Factor a subproduct and stage its partial product coloring.

    Computes the strong PFD of the view, assigns one fresh color per local
    prime factor to every locally-Cartesian edge satisfying the S1-condition,
    and marks singleton-class vertices and S1 edges as checked.  When the view
    has at most ``min_factors`` nontrivial prime factors it is not used at all
    (approximate mode's region filter) and None is returned.
    """
    fz = classical_strong_pfd(view.sub)
    if min_factors and len(fz.nontrivial_factors()) <= min_factors:
        return None
    part = s_partition(view.sub)
    singles = {a for a in view.sub.vertices() if part.is_singleton(a)}
    color_for_pos: dict[int, int] = {}
    edge_color: dict[Edge, int] = {}
    s1_edges: set[Edge] = set()
    for a, b in view.sub.edges():
        if a not in singles and b not in singles:
            continue
        host_e = edge_key(view.embed.apply(a), view.embed.apply(b))
        s1_edges.add(host_e)
        cls = classify_edge(fz.coords, (a, b))
        if cls.cartesian:
            color = color_for_pos.get(cls.position)
            if color is None:
                color = coloring.fresh()
                color_for_pos[cls.position] = color
            edge_color[host_e] = color
    host_singles = frozenset(view.embed.apply(a) for a in singles)
    coloring.checked_vertices |= host_singles
    coloring.checked_edges |= s1_edges
    return ViewColoring(
        view=view,
        factorization=fz,
        edge_color=edge_color,
        colors=tuple(sorted(set(edge_color.values()))),
        singleton_vertices=host_singles,
        s1_edges=frozenset(s1_edges),
    )


def check_continuation(
    coloring: PartialColoring, old_domain: frozenset[Edge], vc: ViewColoring
) -> ContinuationReport:
    """A fresh color fails when none of its edges was already colored before."""
    failing = set(vc.colors)
    for e, c in vc.edge_color.items():
        if c in failing and e in old_domain:
            failing.discard(c)
    return ContinuationReport(ok=not failing, failing_colors=frozenset(failing))


def combine_colorings(coloring: PartialColoring, vc: ViewColoring) -> PartialColoring:
    """Old colors win on shared edges (merging ids); new edges keep fresh colors."""
    for e in sorted(vc.edge_color):
        c = vc.edge_color[e]
        if e in coloring.color_of:
            coloring.merges.union(coloring.color_of[e], c)
        else:
            coloring.color_of[e] = c
    return coloring


def hypercube_color_repair(
    coloring: PartialColoring,
    old_domain: frozenset[Edge],
    parent_vertex: int,
    new_vc: ViewColoring,
    failing: Iterable[int],
) -> PartialColoring:
    """Repair a failed continuation between thin neighborhoods.

    The previously colored edges inside N[parent] form a product coloring of
    that (thin) neighborhood, so coordinates are well defined: position k of a
    vertex is its component under the edges of every canonical color except k.
    For each failing color c we take the smallest representative edge
    (parent, w) carrying c in the new view; parent and w span a diagonalized
    hypercube over the coordinate set D where they differ, which is S-prime,
    forcing all colors of D and c into a single color.
    """
    host = new_vc.view.host
    nbhd = host.closed(parent_vertex)
    inside = [
        e for e in old_domain if e[0] in nbhd and e[1] in nbhd and e in coloring.color_of
    ]
    canon_of = {e: coloring.canonical_of_edge(e) for e in inside}
    colors_present = sorted(set(canon_of.values()))

    component_id: dict[int, dict[int, int]] = {}
    for k in colors_present:
        uf = UnionFind(nbhd)
        for e, kc in canon_of.items():
            if kc != k:
                uf.union(e[0], e[1])
        component_id[k] = {v: uf.find(v) for v in nbhd}

    for c in sorted(set(failing)):
        reps = sorted(
            e for e, col in new_vc.edge_color.items() if col == c and parent_vertex in e
        )
        if not reps:
            raise InternalInvariantError(
                f"no representative of failing color {c} at vertex {parent_vertex}; "
                "thinness precondition violated"
            )
        e_c = reps[0]
        w = e_c[0] if e_c[1] == parent_vertex else e_c[1]
        targets = [
            k for k in colors_present if component_id[k][parent_vertex] != component_id[k][w]
        ]
        acc = c
        for k in targets:
            acc = coloring.merges.union(acc, k)
    return coloring


# -- Algorithm drivers --------------------------------------------------------


def _neighborhood_thin(g: Graph, v: int) -> bool:
    return s_partition(g, g.closed(v)).all_singletons()


def _process(coloring: PartialColoring, view: SubproductView):
    """Factor, continuation-check and combine one view; returns staging info."""
    old = coloring.domain()
    vc = factor_subgraph(view, coloring)
    report = check_continuation(coloring, old, vc)
    combine_colorings(coloring, vc)
    return vc, report, old


def local_cover(
    g: Graph, order_seed: Optional[int] = None, trace: Optional[TraceFn] = None
) -> PartialColoring:
    """Cover a thin graph by factored subproducts; returns the final coloring.

    This is the covering stage of the local decomposition: after it, the
    colored edges span the graph and every vertex and edge is checked.
    ``order_seed`` permutes the backbone BFS tie-breaks (testing hook).
    ``trace`` receives ("continuation_failed" | "hypercube_repair" |
    "edge_neighborhood" | "nstar" | "second_loop", details) events.
    """
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("local decomposition requires a nonempty connected graph")
    if not is_thin(g):
        raise NotThinError("graph is not thin; use pfd(), which factors the quotient")
    emit = trace if trace is not None else (lambda name, info: None)
    if g.n == 1:
        coloring = PartialColoring()
        coloring.checked_vertices.add(0)
        return coloring

    tie_key = None
    if order_seed is not None:
        perm = list(g.vertices())
        random.Random(order_seed).shuffle(perm)
        rank = {v: i for i, v in enumerate(perm)}
        tie_key = rank.__getitem__

    order = backbone_bfs(g, tie_key=tie_key)
    coloring = PartialColoring()
    key = tie_key if tie_key is not None else (lambda v: v)

    bfs_list = list(order.order)
    _process(coloring, make_subproduct(g, "one", bfs_list[0]))
    remaining = set(bfs_list)
    for x in bfs_list:
        for y in sorted((u for u in g.closed(x) if u in remaining), key=key):
            vc, report, old = _process(coloring, make_subproduct(g, "one", y))
            if report.ok:
                continue
            emit("continuation_failed", {"x": x, "y": y, "colors": report.failing_colors})
            if _neighborhood_thin(g, x) and _neighborhood_thin(g, y):
                hypercube_color_repair(coloring, old, x, vc, report.failing_colors)
                emit("hypercube_repair", {"x": x, "y": y, "colors": report.failing_colors})
                coloring.checked_vertices |= vc.view.host_vertices()
                coloring.checked_edges |= vc.view.host_edges()
            else:
                edge_view = make_subproduct(g, "edge", x, y)
                sx = edge_view.embed.invert(x)
                sy = edge_view.embed.invert(y)
                if is_dispensable(edge_view.sub, edge_key(sx, sy)) is None:
                    emit("edge_neighborhood", {"x": x, "y": y})
                    _process(coloring, edge_view)
                else:
                    emit("nstar", {"x": x, "y": y})
                    _process(coloring, make_subproduct(g, "nstar", x, y))
        remaining.discard(x)

    while True:
        unchecked = [v for v in g.vertices() if v not in coloring.checked_vertices]
        if not unchecked:
            break
        x = min(unchecked)
        partners = [
            v for v in g.adjacency[x] if edge_key(x, v) not in coloring.checked_edges
        ]
        y = min(partners) if partners else min(g.adjacency[x])
        emit("second_loop", {"x": x, "y": y})
        _process(coloring, make_subproduct(g, "nstar", x, y))
        if x not in coloring.checked_vertices:
            raise InternalInvariantError(
                f"vertex {x} still unchecked after factoring its N*-neighborhood"
            )

    return coloring


def local_pfd(
    g: Graph, order_seed: Optional[int] = None, trace: Optional[TraceFn] = None
) -> Factorization:
    """Prime factors of a connected thin graph by local covering.

    Runs ``local_cover`` and reads the factors off the final coloring; the
    factorization is independent of the cover order.
    """
    coloring = local_cover(g, order_seed=order_seed, trace=trace)
    return check_factors(g, coloring)


def pfd(g: Graph, order_seed: Optional[int] = None) -> Factorization:
    """Prime factors of any connected graph.

    Thin graphs go straight to the local algorithm; otherwise the quotient by
    S is factored locally and the factors are lifted via the class sizes.
    """
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("prime factorization requires a nonempty connected graph")
    if is_thin(g):
        return local_pfd(g, order_seed=order_seed)
    q = quotient(g)
    qf = local_pfd(q.graph, order_seed=order_seed)
    return reconstruct_from_quotient(g, q, qf)


# -- reading factors off the coloring -----------------------------------------


def check_factors(g: Graph, coloring: PartialColoring) -> Factorization:
    """Merge locally determined colors into global prime factors.

    Color subsets are tried by increasing size; a subset is accepted when the
    two component projections through the base vertex rebuild the graph as a
    strong product under the induced bijection.  Accepted components are prime
    factors; the cofactor is processed recursively.  When no proper subset is
    accepted the graph is prime.
    """
    return _check_factors_rec(g, coloring.canonical_edge_map())


def _component_labels(g: Graph, edges: Iterable[Edge]) -> list[int]:
    uf = UnionFind(g.vertices())
    for u, v in edges:
        uf.union(u, v)
    return [uf.find(v) for v in g.vertices()]


def _try_color_split(g: Graph, canon: dict[Edge, int], s_colors: set[int]):
    """Attempt to split off the factor spanned by the colors in ``s_colors``."""
    base = 0
    s_edges = [e for e, c in canon.items() if c in s_colors]
    t_edges = [e for e, c in canon.items() if c not in s_colors]
    comp_s = _component_labels(g, s_edges)
    comp_t = _component_labels(g, t_edges)

    a_vertices = sorted(v for v in g.vertices() if comp_s[v] == comp_s[base])
    a2_vertices = sorted(v for v in g.vertices() if comp_t[v] == comp_t[base])

    # Projection onto A follows the complement colors: the unique vertex of A
    # in the same (not-S)-colored component; symmetrically for A'.
    rep_a: dict[int, int] = {}
    for v in a_vertices:
        if comp_t[v] in rep_a:
            return None
        rep_a[comp_t[v]] = v
    rep_a2: dict[int, int] = {}
    for v in a2_vertices:
        if comp_s[v] in rep_a2:
            return None
        rep_a2[comp_s[v]] = v

    h1, map1 = induced_subgraph(g, a_vertices)
    h2, map2 = induced_subgraph(g, a2_vertices)
    if h1.n * h2.n != g.n:
        return None
    prod, pcoords = strong_product([h1, h2])
    forward = []
    for v in g.vertices():
        pa = rep_a.get(comp_t[v])
        pa2 = rep_a2.get(comp_s[v])
        if pa is None or pa2 is None:
            return None
        forward.append(pcoords.vertex_at((map1.invert(pa), map2.invert(pa2))))
    if len(set(forward)) != g.n:
        return None
    if not isomorphic_under_map(g, prod, VertexMap(tuple(forward))):
        return None
    return h1, map1, h2, map2, comp_s, comp_t, rep_a, rep_a2


def _check_factors_rec(g: Graph, canon: dict[Edge, int]) -> Factorization:
    colors = sorted(set(canon.values()))
    if len(colors) <= 1 or g.n == 1:
        return _trivial_strong(g)
    for k in range(1, len(colors)):
        for subset in combinations(colors, k):
            split = _try_color_split(g, canon, set(subset))
            if split is None:
                continue
            h1, map1, h2, map2, comp_s, comp_t, rep_a, rep_a2 = split
            chosen = set(subset)
            a2_set = set(map2.forward)
            sub_canon = {
                edge_key(map2.invert(u), map2.invert(v)): c
                for (u, v), c in canon.items()
                if c not in chosen and u in a2_set and v in a2_set
            }
            rest = _check_factors_rec(h2, sub_canon)
            factors = (h1,) + rest.factors
            vectors = []
            for v in g.vertices():
                head = map1.invert(rep_a[comp_t[v]])
                tail = rest.coords.vector(map2.invert(rep_a2[comp_s[v]]))
                vectors.append((head,) + tail)
            sizes = tuple(f.n for f in factors)
            return Factorization(factors, Coordinates(sizes, tuple(vectors)), "strong")
    return _trivial_strong(g)
