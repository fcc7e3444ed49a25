"""Classical global decomposition: dispensable edges, the Cartesian skeleton,
Cartesian PFD, complete-factor extraction and the full strong-product pipeline.

The pipeline for an arbitrary connected graph: split off the largest complete
factor, pass to the quotient by the relation S (which is thin), compute the
quotient's skeleton and its Cartesian prime factors, regroup those into strong
factors, and finally blow class sizes back up into factors of the original
graph.  Every stage that involves a search is closed by an exact
reconstruct-and-compare certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product as iter_product
from typing import Iterable, Optional, Sequence

from .errors import GraphInputError, InternalInvariantError
from .graph import (
    Edge,
    Graph,
    VertexMap,
    connected_components,
    edge_key,
    isomorphic_under_map,
)
from .products import (
    Coordinates,
    Factorization,
    cartesian_product,
    strong_product,
    verify_factorization,
)
from .thinness import Quotient, expand_quotient, quotient
from .unionfind import UnionFind


@dataclass(frozen=True)
class SkeletonResult:
    """Partition of the edge set into kept (indispensable) and removed
    (dispensable) edges, with one witness vertex per removed edge."""

    kept: frozenset[Edge]
    removed: frozenset[Edge]
    witness: dict[Edge, int]


def is_dispensable(g: Graph, e: Edge) -> Optional[int]:
    """Return a witness z making the edge (x, y) dispensable, or None.

    z qualifies when [1(a) or 1(b)] and [2(a) or 2(b)] hold, all strictly:
      1(a) N[x]*N[y] < N[x]*N[z]     1(b) N[x] < N[z] < N[y]
      2(a) N[x]*N[y] < N[y]*N[z]     2(b) N[y] < N[z] < N[x]
    (* = intersection, < = proper containment).  Condition 1 forces
    z into N[x] or N[y], so scanning N[x] | N[y] is exhaustive: from 1(a),
    y lies in N[x]*N[y] <= N[z], hence z in N[y]; from 1(b), x in N[z].
    """
    x, y = e
    if not g.has_edge(x, y):
        raise GraphInputError(f"({x},{y}) is not an edge")
    nx, ny = g.closed(x), g.closed(y)
    nxy = nx & ny
    for z in sorted((nx | ny) - {x, y}):
        nz = g.closed(z)
        one = (nxy < (nx & nz)) or (nx < nz < ny)
        if not one:
            continue
        two = (nxy < (ny & nz)) or (ny < nz < nx)
        if two:
            return z
    return None


def cartesian_skeleton(g: Graph) -> SkeletonResult:
    """Remove exactly the dispensable edges; the rest spans g and stays connected."""
    if not g.is_connected():
        raise GraphInputError("Cartesian skeleton requires a connected graph")
    kept: set[Edge] = set()
    removed: set[Edge] = set()
    witness: dict[Edge, int] = {}
    for e in g.edges():
        z = is_dispensable(g, e)
        if z is None:
            kept.add(e)
        else:
            removed.add(e)
            witness[e] = z
    return SkeletonResult(frozenset(kept), frozenset(removed), witness)


# -- Cartesian prime factorization -------------------------------------------


def _square_relation(g: Graph) -> dict[Edge, int]:
    """Finest provably-safe edge partition for Cartesian factoring.

    Edges are merged when they are opposite edges of a chordless square, or
    when they share an endpoint and lie in no (or in more than one) common
    chordless square.  In any Cartesian product, adjacent edges of different
    factors span exactly one chordless square, so the resulting classes
    refine the true product relation.
    """
    uf = UnionFind(g.edges())
    for x in g.vertices():
        for y, z in combinations(g.adjacency[x], 2):
            e, f = edge_key(x, y), edge_key(x, z)
            if g.has_edge(y, z):
                uf.union(e, f)
                continue
            tops = [
                w
                for w in (g.neighbor_set(y) & g.neighbor_set(z))
                if w != x and not g.has_edge(x, w)
            ]
            if len(tops) != 1:
                uf.union(e, f)
            else:
                w = tops[0]
                uf.union(e, edge_key(z, w))
                uf.union(f, edge_key(y, w))
    return {e: uf.find(e) for e in g.edges()}


def _partitions_into(items: Sequence, ngroups: int):
    """All partitions of ``items`` into exactly ``ngroups`` nonempty groups,
    in deterministic (restricted-growth) order."""
    n = len(items)
    if ngroups > n:
        return
    assignment = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == ngroups:
                groups: list[list] = [[] for _ in range(ngroups)]
                for idx, grp in enumerate(assignment):
                    groups[grp].append(items[idx])
                yield [tuple(gr) for gr in groups]
            return
        # Pruning: the remaining items must be able to open enough groups.
        if used + (n - i) < ngroups:
            return
        for grp in range(min(used + 1, ngroups)):
            assignment[i] = grp
            yield from rec(i + 1, max(used, grp + 1))

    yield from rec(0, 0)


def _try_cartesian_grouping(
    g: Graph, class_of: dict[Edge, int], groups: Sequence[tuple]
) -> Optional[Factorization]:
    """Validate one grouping of edge classes as a Cartesian product structure."""
    group_index = {cls: i for i, grp in enumerate(groups) for cls in grp}
    k = len(groups)
    base = 0
    edge_group = {e: group_index[c] for e, c in class_of.items()}

    slice_locals: list[dict[int, int]] = []
    factor_graphs: list[Graph] = []
    projections: list[list[Optional[int]]] = []
    for i in range(k):
        comps = connected_components(g, lambda u, v, i=i: edge_group[edge_key(u, v)] != i)
        comp_of = [0] * g.n
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        slice_comp = connected_components(g, lambda u, v, i=i: edge_group[edge_key(u, v)] == i)
        slice_set = next(c for c in slice_comp if base in c)
        slice_sorted = sorted(slice_set)
        local = {v: li for li, v in enumerate(slice_sorted)}
        # Each "all other groups" component must meet the slice exactly once.
        rep: dict[int, int] = {}
        ok = True
        for s in slice_sorted:
            ci = comp_of[s]
            if ci in rep:
                ok = False
                break
            rep[ci] = s
        if not ok:
            return None
        proj: list[Optional[int]] = [rep.get(comp_of[v]) for v in g.vertices()]
        if any(p is None for p in proj):
            return None
        edges_i = [
            (local[u], local[v])
            for u, v in g.edges()
            if u in local and v in local and edge_group[(u, v)] == i
        ]
        factor = Graph(len(slice_sorted), edges_i)
        slice_locals.append(local)
        factor_graphs.append(factor)
        projections.append(proj)

    sizes = tuple(f.n for f in factor_graphs)
    total = 1
    for s in sizes:
        total *= s
    if total != g.n:
        return None
    vectors = tuple(
        tuple(slice_locals[i][projections[i][v]] for i in range(k)) for v in g.vertices()
    )
    if len(set(vectors)) != g.n:
        return None
    coords = Coordinates(sizes, vectors)
    prod, pcoords = cartesian_product(factor_graphs)
    vmap = VertexMap(tuple(pcoords.vertex_at(vec) for vec in vectors))
    if not isomorphic_under_map(g, prod, vmap):
        return None
    return Factorization(tuple(factor_graphs), coords, "cartesian")


def cartesian_pfd(g: Graph) -> Factorization:
    """Unique prime factorization with respect to the Cartesian product.

    Correctness-first: start from the square-relation classes (a refinement of
    the true product relation), then coarsen by trying groupings with many
    groups first; the first grouping that survives the reconstruct-and-compare
    certificate is the finest valid one, i.e. the PFD.
    """
    if not g.is_connected():
        raise GraphInputError("Cartesian PFD requires a connected graph")
    if g.n == 1:
        return Factorization((g,), Coordinates((1,), ((0,),)), "cartesian")
    class_of = _square_relation(g)
    class_ids = sorted(set(class_of.values()))
    max_groups = min(len(class_ids), max(1, g.n.bit_length() - 1))
    for ngroups in range(max_groups, 0, -1):
        for groups in _partitions_into(class_ids, ngroups):
            fz = _try_cartesian_grouping(g, class_of, groups)
            if fz is not None:
                return fz
    raise InternalInvariantError("no Cartesian grouping validated, not even the trivial one")


# -- strong prime factorization ----------------------------------------------


def _trivial_strong(g: Graph) -> Factorization:
    return Factorization((g,), Coordinates((g.n,), tuple((v,) for v in g.vertices())), "strong")


def _try_strong_grouping(
    h: Graph, chi: Coordinates, groups: Sequence[tuple[int, ...]]
) -> Optional[Factorization]:
    """Group Cartesian-skeleton coordinates into candidate strong factors.

    The candidate factor for a group is the induced slice through the base
    vertex; the grouping is accepted only when the slices rebuild h exactly.
    """
    base_vec = chi.vector(0)
    factor_graphs: list[Graph] = []
    keys: list[dict[tuple[int, ...], int]] = []
    for grp in groups:
        others = [j for j in range(chi.k) if j not in grp]
        slice_vertices = sorted(
            v
            for v in h.vertices()
            if all(chi.vector(v)[j] == base_vec[j] for j in others)
        )
        sub, vmap = _induced(h, slice_vertices)
        factor_graphs.append(sub)
        keys.append(
            {
                tuple(chi.vector(v)[j] for j in grp): li
                for li, v in enumerate(slice_vertices)
            }
        )
    vectors = []
    for v in h.vertices():
        vec = []
        for grp, key in zip(groups, keys):
            restricted = tuple(chi.vector(v)[j] for j in grp)
            if restricted not in key:
                return None
            vec.append(key[restricted])
        vectors.append(tuple(vec))
    sizes = tuple(f.n for f in factor_graphs)
    total = 1
    for s in sizes:
        total *= s
    if total != h.n or len(set(vectors)) != h.n:
        return None
    prod, pcoords = strong_product(factor_graphs)
    vmap = VertexMap(tuple(pcoords.vertex_at(vec) for vec in vectors))
    if not isomorphic_under_map(h, prod, vmap):
        return None
    return Factorization(tuple(factor_graphs), Coordinates(sizes, tuple(vectors)), "strong")


def _induced(g: Graph, vertices: Sequence[int]) -> tuple[Graph, VertexMap]:
    from .graph import induced_subgraph

    return induced_subgraph(g, vertices)


def strong_pfd_thin(h: Graph) -> Factorization:
    """Strong PFD of a thin connected graph via its Cartesian skeleton.

    The skeleton of a strong product of thin graphs is the Cartesian product
    of the factor skeletons, so the Cartesian prime coordinates refine the
    strong factors; regrouping coarsest-count-last recovers them.
    """
    if h.n == 1:
        return _trivial_strong(h)
    sk = cartesian_skeleton(h)
    skg = Graph(h.n, sorted(sk.kept))
    if not skg.is_connected():
        raise InternalInvariantError("skeleton of a connected graph came out disconnected")
    cpf = cartesian_pfd(skg)
    r = cpf.coords.k
    if r == 1:
        return _trivial_strong(h)
    for ngroups in range(r, 0, -1):
        for groups in _partitions_into(tuple(range(r)), ngroups):
            fz = _try_strong_grouping(h, cpf.coords, groups)
            if fz is not None:
                return fz
    raise InternalInvariantError("strong regrouping failed for a thin graph")


# -- complete factors and quotient blow-up ------------------------------------


def _int_gcd(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def _prime_factors_int(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def complete_graph(p: int) -> Graph:
    return Graph(p, [(a, b) for a in range(p) for b in range(a + 1, p)])


def _class_rank_maps(q: Quotient) -> tuple[dict[int, int], dict[int, int]]:
    """Per host vertex: its class index and its rank among sorted class members."""
    cls: dict[int, int] = {}
    rank: dict[int, int] = {}
    for ci, members in enumerate(q.partition.classes):
        for r, v in enumerate(sorted(members)):
            cls[v] = ci
            rank[v] = r
    return cls, rank


def extract_complete_factor(g: Graph) -> tuple[int, Graph]:
    """Largest l with g = (reduced graph) boxtimes K_l.

    l must divide every S-class size, so divisors of their gcd are tested in
    decreasing order with a reconstruct-and-compare certificate; the gcd
    itself always verifies.
    """
    if not g.is_connected():
        raise GraphInputError("complete-factor extraction requires a connected graph")
    q = quotient(g)
    gtotal = _int_gcd(q.class_sizes)
    for d in sorted(_divisors(gtotal), reverse=True):
        if d == 1:
            break
        reduced = expand_quotient(q.graph, [s // d for s in q.class_sizes])
        if _verify_complete_split(g, q, d, reduced):
            return d, reduced
    return 1, g


def _divisors(n: int) -> list[int]:
    if n <= 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _verify_complete_split(g: Graph, q: Quotient, d: int, reduced: Graph) -> bool:
    sizes = [s // d for s in q.class_sizes]
    offset = [0] * q.graph.n
    for ci in range(1, q.graph.n):
        offset[ci] = offset[ci - 1] + sizes[ci - 1]
    cls, rank = _class_rank_maps(q)
    prod, pcoords = strong_product([reduced, complete_graph(d)])
    forward = []
    for v in g.vertices():
        red_id = offset[cls[v]] + rank[v] // d
        forward.append(pcoords.vertex_at((red_id, rank[v] % d)))
    if len(set(forward)) != g.n:
        return False
    return isomorphic_under_map(g, prod, VertexMap(tuple(forward)))


# -- reconstruction of factors from the quotient's factorization --------------


def _split_multiplicities(
    keyed: dict[tuple[int, ...], int], indices: tuple[int, ...]
) -> list[tuple[tuple[int, ...], dict[tuple[int, ...], int]]]:
    """Recursively split quotient-prime indices into blocks whose multiplicity
    functions factor pointwise; unsplittable blocks are the prime blow-ups.

    ``keyed`` maps projections onto ``indices`` to multiplicities with overall
    gcd 1.  A bipartition (C, D) is valid when the per-fiber gcds multiply
    back exactly; validity never cuts a true factor block, so the leaves of
    the recursion are exactly the factors' index sets.
    """
    if len(indices) <= 1:
        return [(indices, keyed)]
    pos = {j: i for i, j in enumerate(indices)}

    def fiber_gcds(side: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        acc: dict[tuple[int, ...], int] = {}
        for key, mult in keyed.items():
            proj = tuple(key[pos[j]] for j in side)
            acc[proj] = math.gcd(acc.get(proj, 0), mult)
        return acc

    for size in range(1, len(indices) // 2 + 1):
        for c_set in combinations(indices[1:], size - 1):
            c = (indices[0],) + c_set
            dside = tuple(j for j in indices if j not in c)
            mc, md = fiber_gcds(c), fiber_gcds(dside)
            if all(
                mc[tuple(key[pos[j]] for j in c)] * md[tuple(key[pos[j]] for j in dside)]
                == mult
                for key, mult in keyed.items()
            ):
                return _split_multiplicities(mc, c) + _split_multiplicities(md, dside)
    return [(indices, keyed)]


def reconstruct_from_quotient(g: Graph, q: Quotient, qf: Factorization) -> Factorization:
    """Lift a strong factorization of G/S to one of G using the S-class sizes.

    The complete factor K_l (l = gcd of the class sizes) comes out first as
    K_p pieces; the remaining size profile factors multiplicatively over
    groups of quotient primes, each group blowing up into one prime factor.
    The result is certified by exact reconstruction.
    """
    sizes = q.class_sizes
    l = _int_gcd(sizes) if sizes else 1
    reduced_sizes = [s // l for s in sizes]
    nontrivial = tuple(j for j, f in enumerate(qf.factors) if f.n > 1)

    keyed = {}
    for ci in range(q.graph.n):
        key = tuple(qf.coords.vector(ci)[j] for j in nontrivial)
        keyed[key] = reduced_sizes[ci]
    if len(keyed) != q.graph.n:
        raise InternalInvariantError("quotient coordinates do not separate the classes")

    leaves = _split_multiplicities(keyed, nontrivial) if nontrivial else []
    pos = {j: i for i, j in enumerate(nontrivial)}

    factors: list[Graph] = []
    leaf_info = []
    for indices, mult in leaves:
        block, bcoords = strong_product([qf.factors[j] for j in indices])
        block_sizes = [mult[bcoords.vector(t)] for t in block.vertices()]
        offset = [0] * block.n
        for t in range(1, block.n):
            offset[t] = offset[t - 1] + block_sizes[t - 1]
        factors.append(expand_quotient(block, block_sizes))
        leaf_info.append((indices, mult, bcoords, offset))
    kparts = _prime_factors_int(l)
    factors.extend(complete_graph(p) for p in kparts)

    cls, rank = _class_rank_maps(q)
    vectors = []
    for v in g.vertices():
        ci = cls[v]
        qvec = qf.coords.vector(ci)
        radices = [mult[tuple(qvec[j] for j in indices)] for indices, mult, _, _ in leaf_info]
        radices += kparts
        digits = _mixed_radix(rank[v], radices)
        vec = []
        for (indices, mult, bcoords, offset), copy in zip(leaf_info, digits):
            t = bcoords.vertex_at(tuple(qvec[j] for j in indices))
            vec.append(offset[t] + copy)
        vec.extend(digits[len(leaf_info):])
        vectors.append(tuple(vec))

    fz = Factorization(
        tuple(factors),
        Coordinates(tuple(f.n for f in factors), tuple(vectors)),
        "strong",
    )
    if not verify_factorization(g, fz):
        raise InternalInvariantError(
            "reconstructed factorization does not rebuild the input graph"
        )
    return fz


def _mixed_radix(value: int, radices: Sequence[int]) -> list[int]:
    digits = [0] * len(radices)
    for i in range(len(radices) - 1, -1, -1):
        digits[i] = value % radices[i]
        value //= radices[i]
    if value:
        raise InternalInvariantError("class rank exceeds the multiplicity profile")
    return digits


def classical_strong_pfd(g: Graph) -> Factorization:
    """Full classical pipeline; certified output (see reconstruct_from_quotient)."""
    if not g.is_connected():
        raise GraphInputError("strong PFD requires a connected graph")
    if g.n == 1:
        return _trivial_strong(g)
    q = quotient(g)
    qf = strong_pfd_thin(q.graph)
    return reconstruct_from_quotient(g, q, qf)
