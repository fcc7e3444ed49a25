"""Approximate strong-product recognition, perturbation and test-corpus generators.

The recognizer is the local covering driver with five modifications: no
quotient is taken, the backbone may be disconnected (BFS per component), only
subproducts with more than P nontrivial prime factors contribute, no final
isomorphism test runs, and one connected component per color is selected as a
candidate factor.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import GraphInputError
from .graph import Edge, Graph, edge_key, subgraph_of_edges
from .localpfd import (
    PartialColoring,
    SubproductView,
    check_continuation,
    combine_colorings,
    factor_subgraph,
    hypercube_color_repair,
    make_subproduct,
)
from .oracle import is_prime_oracle, random_connected_graph
from .products import strong_product
from .skeleton import classical_strong_pfd, complete_graph, is_dispensable
from .thinness import backbone, is_thin, s_partition
from .unionfind import UnionFind


@dataclass(frozen=True)
class ApproxConfig:
    """Knobs of the approximate recognizer.

    ``min_prime_factors`` is the region threshold P: a subproduct is used only
    when its decomposition has more than P nontrivial prime factors (P=1 means
    prime regions are skipped).  ``component_strategy`` picks which component
    of each color becomes the candidate factor.
    """

    min_prime_factors: int = 1
    component_strategy: str = "maximal"  # "minimal" | "maximal" | "arbitrary"
    use_edge_and_nstar: bool = True

    def __post_init__(self):
        if self.min_prime_factors < 1:
            raise GraphInputError("the region threshold P must be at least 1")
        if self.component_strategy not in ("minimal", "maximal", "arbitrary"):
            raise GraphInputError(f"unknown strategy {self.component_strategy!r}")


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of a recognition run.

    ``candidate_factors`` holds one chosen component per surviving canonical
    color.  ``skipped_regions`` are vertices never covered by a usable
    subproduct.  ``reconstructed`` is the strong product of the candidates and
    ``aligned_distance`` its label-aligned edit distance to the input, when
    the labels expose a coordinate structure to align on.
    """

    coloring: PartialColoring
    candidate_factors: tuple[Graph, ...]
    skipped_regions: frozenset[int]
    reconstructed: Optional[Graph]
    aligned_distance: Optional[int]


def _usable_factor_count(g: Graph, view: SubproductView, memo: dict) -> int:
    key = view.host_vertices()
    if key not in memo:
        memo[key] = len(classical_strong_pfd(view.sub).nontrivial_factors())
    return memo[key]


def _neighborhood_thin(g: Graph, v: int) -> bool:
    return s_partition(g, g.closed(v)).all_singletons()


def approx_factorize(g: Graph, cfg: ApproxConfig = ApproxConfig()) -> ApproxResult:
    """Run the modified local covering on a (possibly perturbed) graph.

    An empty coloring with all vertices skipped is a documented outcome for
    inputs without any usable subproduct, not an error.
    """
    if g.n == 0 or not g.is_connected():
        raise GraphInputError("approximate recognition requires a connected graph")
    P = cfg.min_prime_factors
    coloring = PartialColoring()
    memo: dict = {}

    def try_process(view: SubproductView):
        old = coloring.domain()
        vc = factor_subgraph(view, coloring, min_factors=P)
        if vc is None:
            return None, None, old
        report = check_continuation(coloring, old, vc)
        combine_colorings(coloring, vc)
        return vc, report, old

    bb = backbone(g)
    usable = [
        v
        for v in sorted(bb.vertices)
        if _usable_factor_count(g, make_subproduct(g, "one", v), memo) > P
    ]
    usable_set = set(usable)
    components = _vertex_components(g, usable_set)
    for comp in components:
        order = _bfs_within(g, comp)
        try_process(make_subproduct(g, "one", order[0]))
        remaining = set(order)
        for x in order:
            for y in sorted(u for u in g.closed(x) if u in remaining):
                vc, report, old = try_process(make_subproduct(g, "one", y))
                if vc is None or report.ok:
                    continue
                if _neighborhood_thin(g, x) and _neighborhood_thin(g, y):
                    hypercube_color_repair(coloring, old, x, vc, report.failing_colors)
                    coloring.checked_vertices |= vc.view.host_vertices()
                    coloring.checked_edges |= vc.view.host_edges()
                elif cfg.use_edge_and_nstar and x != y:
                    edge_view = make_subproduct(g, "edge", x, y)
                    sx, sy = edge_view.embed.invert(x), edge_view.embed.invert(y)
                    if is_dispensable(edge_view.sub, edge_key(sx, sy)) is None:
                        try_process(edge_view)
                    else:
                        try_process(make_subproduct(g, "nstar", x, y))
            remaining.discard(x)

    if not coloring.color_of:
        # No usable region along the backbone: widen to all vertices as centers.
        for v in g.vertices():
            try_process(make_subproduct(g, "one", v))

    if cfg.use_edge_and_nstar and g.n > 1:
        attempted: set[int] = set()
        while True:
            unchecked = [
                v
                for v in g.vertices()
                if v not in coloring.checked_vertices and v not in attempted
            ]
            if not unchecked:
                break
            x = min(unchecked)
            attempted.add(x)
            partners = [
                v for v in g.adjacency[x] if edge_key(x, v) not in coloring.checked_edges
            ]
            y = min(partners) if partners else min(g.adjacency[x])
            try_process(make_subproduct(g, "nstar", x, y))

    candidates = tuple(
        _pick_component(g, coloring, c, cfg.component_strategy)
        for c in coloring.canonical_colors()
    )
    reconstructed, distance = _reconstruct(g, candidates)
    skipped = frozenset(g.vertices()) - frozenset(coloring.checked_vertices)
    return ApproxResult(coloring, candidates, skipped, reconstructed, distance)


def _vertex_components(g: Graph, allowed: set[int]) -> list[list[int]]:
    uf = UnionFind(allowed)
    for u, v in g.edges():
        if u in allowed and v in allowed:
            uf.union(u, v)
    comps: dict[int, list[int]] = {}
    for v in sorted(allowed):
        comps.setdefault(uf.find(v), []).append(v)
    return sorted(comps.values(), key=lambda c: c[0])


def _bfs_within(g: Graph, comp: Sequence[int]) -> list[int]:
    allowed = set(comp)
    from .graph import bfs_order

    return list(bfs_order(g, min(comp), allowed).order)


def _color_components(
    g: Graph, coloring: PartialColoring, color: int
) -> list[tuple[list[int], list[Edge]]]:
    edges = [e for e, c in coloring.color_of.items() if coloring.canonical(c) == color]
    uf = UnionFind()
    for u, v in edges:
        uf.union(u, v)
    grouped: dict[int, list[Edge]] = {}
    for e in edges:
        grouped.setdefault(uf.find(e[0]), []).append(e)
    comps = []
    for root, es in grouped.items():
        verts = sorted({v for e in es for v in e})
        comps.append((verts, sorted(es)))
    return sorted(comps, key=lambda c: c[0][0])


def _pick_component(
    g: Graph, coloring: PartialColoring, color: int, strategy: str
) -> Graph:
    comps = _color_components(g, coloring, color)
    if strategy == "minimal":
        verts, edges = min(comps, key=lambda c: (len(c[0]), c[0][0]))
    elif strategy == "maximal":
        verts, edges = min(comps, key=lambda c: (-len(c[0]), c[0][0]))
    else:  # arbitrary: the component containing the smallest touched vertex
        verts, edges = min(comps, key=lambda c: c[0][0])
    sub, vmap = subgraph_of_edges(g.n, edges, verts)
    if g.labels is not None:
        sub = sub.relabel([g.label_of(v) for v in vmap.forward])
    return sub


def _reconstruct(g: Graph, candidates: tuple[Graph, ...]):
    if not candidates:
        return None, None
    product, _ = strong_product(list(candidates))
    aligned = _align_labels(g, candidates)
    if aligned is not None:
        product = product.relabel(aligned)
        try:
            return product, aligned_distance(g, product)
        except GraphInputError:
            return product, None
    return product, None


def _align_labels(g: Graph, candidates: tuple[Graph, ...]) -> Optional[list[str]]:
    """Rebuild product labels in the host's coordinate order, when detectable.

    Works when host labels are comma tuples of arity len(candidates) and each
    candidate's vertices vary in exactly one distinct tuple position.
    """
    k = len(candidates)
    if g.labels is None or k == 0:
        return None
    arities = {len(lbl.split(",")) for lbl in g.labels}
    if arities != {k}:
        return None
    taken: set[int] = set()
    slot_of: list[Optional[int]] = []
    coords: list[list[str]] = []
    undecided: list[int] = []
    for i, cand in enumerate(candidates):
        if cand.labels is None:
            return None
        tuples = [lbl.split(",") for lbl in cand.labels]
        if any(len(t) != k for t in tuples):
            return None
        varying = [
            j for j in range(k) if len({t[j] for t in tuples}) > 1
        ]
        if len(varying) == 1 and varying[0] not in taken:
            slot = varying[0]
            taken.add(slot)
            slot_of.append(slot)
        elif not varying:
            slot_of.append(None)
            undecided.append(i)
        else:
            return None
        coords.append([t[varying[0]] if varying else None for t in tuples])
    free = [j for j in range(k) if j not in taken]
    if len(undecided) != len(free):
        return None
    for i, slot in zip(undecided, free):
        slot_of[i] = slot
        coords[i] = [cand_label.split(",")[slot] for cand_label in candidates[i].labels]
    labels = []
    from itertools import product as iter_product

    for combo in iter_product(*(range(c.n) for c in candidates)):
        parts = [""] * k
        for i, ci in enumerate(combo):
            parts[slot_of[i]] = coords[i][ci]
        labels.append(",".join(parts))
    return labels


# -- aligned distance ---------------------------------------------------------


def aligned_distance(g: Graph, h: Graph) -> int:
    """Symmetric difference of label-identified vertex and edge sets.

    An upper bound on the true graph distance for this fixed alignment; both
    graphs must carry unique labels.
    """
    for graph in (g, h):
        if graph.labels is None:
            raise GraphInputError("aligned distance requires labeled graphs")
        if len(set(graph.labels)) != graph.n:
            raise GraphInputError("labels must be unique for alignment")
    vg, vh = set(g.labels), set(h.labels)
    eg = {edge_key(g.label_of(u), g.label_of(v)) for u, v in g.edges()}
    eh = {edge_key(h.label_of(u), h.label_of(v)) for u, v in h.edges()}
    return len(vg ^ vh) + len(eg ^ eh)


# -- perturbation -------------------------------------------------------------


def perturb(
    g: Graph, ops: Sequence[tuple], seed: int = 0
) -> tuple[Graph, list[tuple[str, str, str]]]:
    """Apply edit operations, keeping the graph simple and connected.

    Supported ops (labels are the graph's vertex labels):
      ("del_edge", u, v)           ("add_edge", u, v)
      ("del_vertex", u)            ("add_vertex", u, (n1, n2, ...))
      ("del_random_edges", k)      ("add_random_edges", k)
      ("del_random_diagonals", k)  ("del_random_cartesian", k)
    The random diagonal/cartesian variants need comma-tuple coordinate labels.
    An edit that would disconnect the graph, break simplicity, or has no
    eligible target is rejected with a report of the offending op.
    """
    rng = random.Random(seed)
    labels = [g.label_of(v) for v in g.vertices()]
    if len(set(labels)) != g.n:
        raise GraphInputError("perturbation requires unique vertex labels")
    edges: set[tuple[str, str]] = {
        edge_key(labels[u], labels[v]) for u, v in g.edges()
    }
    log: list[tuple[str, str, str]] = []

    def connected_after(vs: list[str], es: set[tuple[str, str]]) -> bool:
        if not vs:
            return False
        adj = {v: set() for v in vs}
        for a, b in es:
            adj[a].add(b)
            adj[b].add(a)
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            for u in adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(vs)

    def del_edge(u: str, v: str, op) -> None:
        e = edge_key(u, v)
        if e not in edges:
            raise GraphInputError(f"rejected {op}: ({u},{v}) is not an edge")
        edges.discard(e)
        if not connected_after(labels, edges):
            edges.add(e)
            raise GraphInputError(f"rejected {op}: deleting ({u},{v}) disconnects the graph")
        log.append(("del", *e))

    def add_edge(u: str, v: str, op) -> None:
        if u == v:
            raise GraphInputError(f"rejected {op}: self-loop at {u}")
        if u not in labels or v not in labels:
            raise GraphInputError(f"rejected {op}: unknown vertex")
        e = edge_key(u, v)
        if e in edges:
            raise GraphInputError(f"rejected {op}: ({u},{v}) already present")
        edges.add(e)
        log.append(("add", *e))

    def diag_split(lbl: str) -> list[str]:
        return lbl.split(",")

    def eligible(kind: str) -> list[tuple[str, str]]:
        if kind == "any":
            return sorted(edges)
        arity = {len(diag_split(l)) for l in labels}
        if len(arity) != 1 or arity == {1}:
            raise GraphInputError("coordinate-filtered edits need tuple labels")
        out = []
        for a, b in sorted(edges):
            diff = sum(x != y for x, y in zip(diag_split(a), diag_split(b)))
            if (kind == "diagonal") == (diff > 1):
                out.append((a, b))
        return out

    for op in ops:
        name = op[0]
        if name == "del_edge":
            del_edge(str(op[1]), str(op[2]), op)
        elif name == "add_edge":
            add_edge(str(op[1]), str(op[2]), op)
        elif name == "del_vertex":
            u = str(op[1])
            if u not in labels:
                raise GraphInputError(f"rejected {op}: unknown vertex {u}")
            keep_edges = {e for e in edges if u not in e}
            keep_labels = [l for l in labels if l != u]
            if not connected_after(keep_labels, keep_edges):
                raise GraphInputError(f"rejected {op}: deleting {u} disconnects the graph")
            removed = edges - keep_edges
            edges.clear()
            edges.update(keep_edges)
            labels.remove(u)
            for e in sorted(removed):
                log.append(("del", *e))
            log.append(("delv", u, ""))
        elif name == "add_vertex":
            u = str(op[1])
            nbrs = [str(x) for x in op[2]]
            if u in labels:
                raise GraphInputError(f"rejected {op}: vertex {u} already present")
            if not nbrs:
                raise GraphInputError(f"rejected {op}: new vertex {u} would be isolated")
            for v in nbrs:
                if v not in labels:
                    raise GraphInputError(f"rejected {op}: unknown neighbor {v}")
            labels.append(u)
            log.append(("addv", u, ""))
            for v in nbrs:
                add_edge(u, v, op)
        elif name in ("del_random_edges", "del_random_diagonals", "del_random_cartesian"):
            k = int(op[1])
            kind = {"del_random_edges": "any", "del_random_diagonals": "diagonal"}.get(
                name, "cartesian"
            )
            for _ in range(k):
                pool = [e for e in eligible(kind) if _deletable(labels, edges, e)]
                if not pool:
                    raise GraphInputError(f"rejected {op}: no deletable edge left")
                e = pool[rng.randrange(len(pool))]
                del_edge(e[0], e[1], op)
        elif name == "add_random_edges":
            k = int(op[1])
            for _ in range(k):
                pool = sorted(
                    edge_key(a, b)
                    for i, a in enumerate(labels)
                    for b in labels[i + 1 :]
                    if edge_key(a, b) not in edges
                )
                if not pool:
                    raise GraphInputError(f"rejected {op}: graph is complete")
                e = pool[rng.randrange(len(pool))]
                add_edge(e[0], e[1], op)
        else:
            raise GraphInputError(f"unknown perturbation op {name!r}")

    index = {l: i for i, l in enumerate(labels)}
    out = Graph(len(labels), [(index[a], index[b]) for a, b in edges], labels)
    return out, log


def _deletable(labels: list[str], edges: set, e: tuple[str, str]) -> bool:
    trial = set(edges)
    trial.discard(e)
    adj = {v: set() for v in labels}
    for a, b in trial:
        adj[a].add(b)
        adj[b].add(a)
    seen = {labels[0]}
    stack = [labels[0]]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(labels)


# -- generators ---------------------------------------------------------------


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphInputError("paths need at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], [str(i) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("cycles need at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], [str(i) for i in range(n)])


def complete_labeled(n: int) -> Graph:
    return complete_graph(n).relabel([str(i) for i in range(n)])


def path_with_triangle(n: int) -> Graph:
    """A path on n vertices plus one extra vertex adjacent to the middle
    consecutive pair, forming a single triangle."""
    if n < 2:
        raise GraphInputError("a path with a triangle needs at least two path vertices")
    m = (n - 1) // 2
    edges = [(i, i + 1) for i in range(n - 1)] + [(m, n), (m + 1, n)]
    return Graph(n + 1, edges, [str(i) for i in range(n)] + ["t"])


def random_thin_prime(n: int, seed: int) -> Graph:
    """Random connected graph that the oracle certifies prime, and is thin."""
    if n < 2 or n > 7:
        raise GraphInputError("random primes supported for 2 <= n <= 7")
    rng = random.Random(seed)
    while True:
        g = random_connected_graph(n, rng)
        if is_thin(g) and is_prime_oracle(g):
            return g.relabel([str(i) for i in range(n)])


Spec = Union[str, tuple]

_CALL_RE = re.compile(r"^\s*([a-z_0-9]+)\s*\((.*)\)\s*$", re.S)


def _split_args(body: str) -> list[str]:
    args, depth, cur = [], 0, []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        args.append(tail)
    return args


def _parse_spec_text(text: str) -> tuple:
    m = _CALL_RE.match(text)
    if not m:
        raise GraphInputError(f"malformed generator spec: {text!r}")
    name, body = m.group(1), m.group(2).strip()
    args = _split_args(body) if body else []
    if name == "product":
        if len(args) != 2 or not args[1].startswith("["):
            raise GraphInputError(f"product spec needs a kind and a factor list: {text!r}")
        inner = _split_args(args[1][1:-1])
        return ("product", args[0], [_parse_spec_text(a) for a in inner])
    values = []
    for a in args:
        a = a.split("=", 1)[-1].strip()
        try:
            values.append(int(a))
        except ValueError:
            raise GraphInputError(f"expected an integer argument in {text!r}")
    return (name, *values)


def generate(spec: Spec) -> Graph:
    """Deterministic construction of corpus graphs from a small spec grammar.

    String form examples: ``path(5)``, ``cycle(4)``, ``complete(3)``,
    ``path_with_triangle(7)``, ``random_connected(6, seed=3)``,
    ``random_prime(5, seed=1)``, ``product(strong, [path(3), path(3)])``.
    Tuple form mirrors the same shapes.
    """
    if isinstance(spec, str):
        spec = _parse_spec_text(spec)
    if not isinstance(spec, tuple) or not spec:
        raise GraphInputError(f"malformed generator spec: {spec!r}")
    name = spec[0]
    try:
        if name == "path":
            return path_graph(spec[1])
        if name == "cycle":
            return cycle_graph(spec[1])
        if name == "complete":
            return complete_labeled(spec[1])
        if name == "path_with_triangle":
            return path_with_triangle(spec[1])
        if name == "random_connected":
            rng = random.Random(spec[2])
            g = random_connected_graph(spec[1], rng)
            return g.relabel([str(i) for i in range(g.n)])
        if name == "random_prime":
            return random_thin_prime(spec[1], spec[2])
        if name == "product":
            kind, parts = spec[1], spec[2]
            if kind not in ("strong", "cartesian"):
                raise GraphInputError(f"unknown product kind {kind!r}")
            factors = [generate(p) for p in parts]
            if kind == "strong":
                return strong_product(factors)[0]
            from .products import cartesian_product

            return cartesian_product(factors)[0]
    except IndexError:
        raise GraphInputError(f"missing arguments in generator spec {spec!r}")
    raise GraphInputError(f"unknown generator {name!r}")
