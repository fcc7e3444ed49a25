"""Command-line surface: file formats, subcommands and reporting.

Exit codes: 0 success, 1 usage error, 2 input-format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .approx import ApproxConfig, approx_factorize, generate, perturb
from .errors import FormatError, GraphError, GraphInputError, InternalInvariantError
from .graph import Graph, edge_key
from .localpfd import PartialColoring, local_pfd, pfd
from .oracle import brute_force_pfd
from .products import Factorization
from .selftest import oracle_agreement_sweep
from .skeleton import cartesian_skeleton, classical_strong_pfd
from .thinness import backbone, backbone_bfs, quotient


class UsageError(Exception):
    pass


# -- formats ------------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse lines of "u v" with string labels; '#' starts a comment.

    Labels are interned to dense ids in order of first appearance; duplicate
    edges collapse; self-loops are format errors carrying the line number.
    """
    ids: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()

    def intern(tok: str) -> int:
        if tok not in ids:
            ids[tok] = len(ids)
        return ids[tok]

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            intern(parts[0])  # isolated vertex declaration
            continue
        if len(parts) != 2:
            raise FormatError(f"expected 'u v', got {raw!r}", line=ln)
        u, v = intern(parts[0]), intern(parts[1])
        if u == v:
            raise FormatError(f"self-loop at {parts[0]!r}", line=ln)
        edges.add(edge_key(u, v))
    if not ids:
        raise FormatError("no vertices found")
    labels = [tok for tok, _ in sorted(ids.items(), key=lambda kv: kv[1])]
    return Graph(len(ids), sorted(edges), labels)


def emit_edge_list(g: Graph) -> str:
    lines = [f"{g.label_of(u)} {g.label_of(v)}" for u, v in g.edges()]
    covered = {v for e in g.edges() for v in e}
    lines.extend(g.label_of(v) for v in g.vertices() if v not in covered)
    return "\n".join(lines) + "\n"


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string (n <= 62); labels default to vertex ids."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise FormatError("empty graph6 input")
    data = [ord(c) - 63 for c in s]
    if any(b < 0 or b > 63 for b in data):
        raise FormatError("invalid graph6 character")
    if data[0] == 63:
        raise FormatError("graph6 inputs beyond 62 vertices are not supported")
    n = data[0]
    bits = []
    for b in data[1:]:
        bits.extend((b >> shift) & 1 for shift in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise FormatError("graph6 string too short for its vertex count")
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges, [str(i) for i in range(n)])


_DOT_PALETTE = (
    "red",
    "blue",
    "forestgreen",
    "orange",
    "purple",
    "brown",
    "magenta",
    "teal",
    "navy",
    "maroon",
    "goldenrod",
    "cyan4",
)


def emit_dot(g: Graph, coloring: Optional[PartialColoring] = None) -> str:
    """Undirected DOT; colored edges use a fixed palette keyed by canonical
    color, uncolored edges render dashed gray."""
    out = ["graph G {"]
    for v in g.vertices():
        out.append(f'  {v} [label="{g.label_of(v)}"];')
    palette_index: dict[int, int] = {}
    if coloring is not None:
        for c in coloring.canonical_colors():
            palette_index[c] = len(palette_index)
    for u, v in g.edges():
        e = (u, v)
        if coloring is not None and e in coloring.color_of:
            c = palette_index[coloring.canonical_of_edge(e)]
            style = f'color="{_DOT_PALETTE[c % len(_DOT_PALETTE)]}", penwidth=2'
        else:
            style = 'color="gray", style="dashed"'
        out.append(f"  {u} -- {v} [{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


# -- reporting ----------------------------------------------------------------


def _factorization_report(g: Graph, fz: Factorization) -> str:
    lines = [f"{len(fz.factors)} prime factor(s), kind={fz.kind}"]
    for i, f in enumerate(fz.factors):
        lines.append(f"factor {i}: {f.n} vertices, {f.m} edges")
        for a, b in f.edges():
            lines.append(f"  {f.label_of(a)} {f.label_of(b)}")
    lines.append("coordinates (host vertex: factor-local ids):")
    for v in g.vertices():
        vec = ",".join(str(c) for c in fz.coords.vector(v))
        lines.append(f"  {g.label_of(v)}: ({vec})")
    return "\n".join(lines)


def _factorization_json(g: Graph, fz: Factorization) -> dict:
    return {
        "kind": fz.kind,
        "factors": [
            {
                "vertices": f.n,
                "edges": [[f.label_of(a), f.label_of(b)] for a, b in f.edges()],
            }
            for f in fz.factors
        ],
        "coordinates": {
            g.label_of(v): list(fz.coords.vector(v)) for v in g.vertices()
        },
    }


def _load_graph(args) -> Graph:
    if getattr(args, "gen", None):
        return generate(args.gen)
    if getattr(args, "infile", None):
        if args.infile == "-":
            text = sys.stdin.read()
        else:
            with open(args.infile, "r", encoding="utf-8") as fh:
                text = fh.read()
        if args.format == "g6":
            return parse_graph6(text)
        return parse_edge_list(text)
    raise UsageError("either --in or --gen is required")


def _write_output(args, text: str) -> None:
    if getattr(args, "out", None) and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="strongpfd", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--in", dest="infile", help="input file ('-' for stdin)")
            sp.add_argument("--gen", help="generator spec, e.g. 'product(strong,[path(3),path(3)])'")
            sp.add_argument("--format", choices=("edgelist", "g6"), default="edgelist")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="output file (default stdout)")

    add_common(sub.add_parser("factor", help="classical strong-product decomposition"))
    sp = sub.add_parser("factor-local", help="local covering decomposition")
    add_common(sp)
    sp.add_argument("--dot", help="also write a DOT rendering of the final coloring")
    sp.add_argument("--order-seed", type=int, default=None, help="permute backbone BFS ties")
    sp = sub.add_parser("skeleton", help="dispensable-edge removal")
    add_common(sp)
    sp.add_argument("--dot", help="write a DOT rendering of kept/removed edges")
    add_common(sub.add_parser("backbone", help="backbone vertices and their BFS order"))
    add_common(sub.add_parser("quotient", help="quotient by the relation S"))
    sp = sub.add_parser("approx", help="approximate product recognition")
    add_common(sp)
    sp.add_argument("-P", "--min-prime-factors", type=int, default=1)
    sp.add_argument("--strategy", choices=("minimal", "maximal", "arbitrary"), default="maximal")
    sp.add_argument("--no-edge-nstar", action="store_true")
    sp.add_argument("--dot", help="write a DOT rendering of the coloring")
    sp = sub.add_parser("generate", help="emit a corpus graph as an edge list")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out", help="output file (default stdout)")
    sp = sub.add_parser("perturb", help="apply edit operations to a graph")
    add_common(sp)
    sp.add_argument("--ops", required=True, help="semicolon-separated ops, e.g. 'del_random_diagonals(2);add_edge(0,1)'")
    sp.add_argument("--seed", type=int, default=0)
    add_common(sub.add_parser("oracle", help="brute-force factorization (small graphs)"))
    sp = sub.add_parser("selftest", help="exhaustive oracle agreement sweep")
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--samples7", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out", help="output file (default stdout)")
    return p


def _parse_ops(text: str) -> list[tuple]:
    ops = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "(" not in chunk or not chunk.endswith(")"):
            raise FormatError(f"malformed op {chunk!r}")
        name, body = chunk.split("(", 1)
        name = name.strip()
        args = [a.strip() for a in body[:-1].split(",") if a.strip()]
        if name in ("del_edge", "add_edge"):
            if len(args) != 2:
                raise FormatError(f"{name} needs two vertex labels")
            ops.append((name, args[0], args[1]))
        elif name == "del_vertex":
            ops.append((name, args[0]))
        elif name == "add_vertex":
            ops.append((name, args[0], tuple(args[1:])))
        elif name in (
            "del_random_edges",
            "add_random_edges",
            "del_random_diagonals",
            "del_random_cartesian",
        ):
            ops.append((name, int(args[0]) if args else 1))
        else:
            raise FormatError(f"unknown op {name!r}")
    return ops


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except GraphInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "factor":
        g = _load_graph(args)
        fz = classical_strong_pfd(g)
        _write_output(args, json.dumps(_factorization_json(g, fz), indent=2) + "\n"
                      if args.json else _factorization_report(g, fz) + "\n")
        return 0
    if cmd == "factor-local":
        g = _load_graph(args)
        fz = pfd(g, order_seed=args.order_seed)
        if args.dot:
            coloring = _coloring_from_factorization(g, fz)
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(emit_dot(g, coloring))
        _write_output(args, json.dumps(_factorization_json(g, fz), indent=2) + "\n"
                      if args.json else _factorization_report(g, fz) + "\n")
        return 0
    if cmd == "skeleton":
        g = _load_graph(args)
        sk = cartesian_skeleton(g)
        if args.dot:
            coloring = PartialColoring()
            c = coloring.fresh()
            for e in sorted(sk.kept):
                coloring.color_of[e] = c
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(emit_dot(g, coloring))
        if args.json:
            payload = {
                "kept": [[g.label_of(u), g.label_of(v)] for u, v in sorted(sk.kept)],
                "removed": [[g.label_of(u), g.label_of(v)] for u, v in sorted(sk.removed)],
            }
            _write_output(args, json.dumps(payload, indent=2) + "\n")
        else:
            lines = [f"kept {len(sk.kept)} edge(s), removed {len(sk.removed)}"]
            lines += [f"keep {g.label_of(u)} {g.label_of(v)}" for u, v in sorted(sk.kept)]
            lines += [f"drop {g.label_of(u)} {g.label_of(v)}" for u, v in sorted(sk.removed)]
            _write_output(args, "\n".join(lines) + "\n")
        return 0
    if cmd == "backbone":
        g = _load_graph(args)
        bb = backbone(g)
        order = backbone_bfs(g) if bb.vertices else None
        if args.json:
            payload = {
                "backbone": [g.label_of(v) for v in sorted(bb.vertices)],
                "reliable": bb.reliable,
                "bfs_order": [g.label_of(v) for v in order.order] if order else [],
            }
            _write_output(args, json.dumps(payload, indent=2) + "\n")
        else:
            lines = [f"backbone size {len(bb)} (reliable={bb.reliable})"]
            if order:
                lines.append("bfs order: " + " ".join(g.label_of(v) for v in order.order))
            _write_output(args, "\n".join(lines) + "\n")
        return 0
    if cmd == "quotient":
        g = _load_graph(args)
        q = quotient(g)
        if args.json:
            payload = {
                "classes": [sorted(g.label_of(v) for v in cls) for cls in q.partition.classes],
                "sizes": list(q.class_sizes),
                "edges": [[a, b] for a, b in q.graph.edges()],
            }
            _write_output(args, json.dumps(payload, indent=2) + "\n")
        else:
            lines = [f"{q.graph.n} class(es)"]
            for i, cls in enumerate(q.partition.classes):
                lines.append(f"class {i} (size {len(cls)}): " + " ".join(sorted(g.label_of(v) for v in cls)))
            lines += [f"edge {a} {b}" for a, b in q.graph.edges()]
            _write_output(args, "\n".join(lines) + "\n")
        return 0
    if cmd == "approx":
        g = _load_graph(args)
        cfg = ApproxConfig(
            min_prime_factors=args.min_prime_factors,
            component_strategy=args.strategy,
            use_edge_and_nstar=not args.no_edge_nstar,
        )
        res = approx_factorize(g, cfg)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(emit_dot(g, res.coloring))
        if args.json:
            payload = {
                "colors": len(res.candidate_factors),
                "candidates": [
                    {"vertices": f.n, "edges": [[f.label_of(a), f.label_of(b)] for a, b in f.edges()]}
                    for f in res.candidate_factors
                ],
                "skipped": sorted(g.label_of(v) for v in res.skipped_regions),
                "aligned_distance": res.aligned_distance,
            }
            _write_output(args, json.dumps(payload, indent=2) + "\n")
        else:
            lines = [f"{len(res.candidate_factors)} color(s)"]
            for i, f in enumerate(res.candidate_factors):
                lines.append(f"candidate {i}: {f.n} vertices, {f.m} edges")
                lines += [f"  {f.label_of(a)} {f.label_of(b)}" for a, b in f.edges()]
            if res.skipped_regions:
                lines.append("skipped: " + " ".join(sorted(g.label_of(v) for v in res.skipped_regions)))
            if res.aligned_distance is not None:
                lines.append(f"aligned distance to reconstructed product: {res.aligned_distance}")
            _write_output(args, "\n".join(lines) + "\n")
        return 0
    if cmd == "generate":
        g = generate(args.spec)
        _write_output(args, emit_edge_list(g))
        return 0
    if cmd == "perturb":
        g = _load_graph(args)
        out, log = perturb(g, _parse_ops(args.ops), seed=args.seed)
        text = emit_edge_list(out)
        text += "".join(f"# {op} {a} {b}\n" for op, a, b in log)
        _write_output(args, text)
        return 0
    if cmd == "oracle":
        g = _load_graph(args)
        factors = brute_force_pfd(g)
        if args.json:
            payload = {
                "prime": len(factors) == 1,
                "factors": [{"vertices": f.n, "edges": [[str(a), str(b)] for a, b in f.edges()]} for f in factors],
            }
            _write_output(args, json.dumps(payload, indent=2) + "\n")
        elif len(factors) == 1:
            _write_output(args, "prime\n")
        else:
            _write_output(args, f"{len(factors)} factors: " + " * ".join(f"({f.n}v,{f.m}e)" for f in factors) + "\n")
        return 0
    if cmd == "selftest":
        mismatches = oracle_agreement_sweep(
            max_n=args.max_n, sample_at_seven=args.samples7, seed=args.seed,
            progress=lambda msg: print(msg, file=sys.stderr),
        )
        if args.json:
            _write_output(args, json.dumps({"mismatches": mismatches}, indent=2) + "\n")
        else:
            _write_output(args, ("all decompositions agree\n" if not mismatches else "\n".join(mismatches) + "\n"))
        return 0 if not mismatches else 3
    raise UsageError(f"unknown command {cmd!r}")


def _coloring_from_factorization(g: Graph, fz) -> PartialColoring:
    """Render helper: color the Cartesian edges of the final coordinatization."""
    from .products import classify_edge

    coloring = PartialColoring()
    by_pos: dict[int, int] = {}
    for e in g.edges():
        cls = classify_edge(fz.coords, e)
        if cls.cartesian:
            c = by_pos.setdefault(cls.position, coloring.fresh())
            coloring.color_of[e] = c
    return coloring


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
