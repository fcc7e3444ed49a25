"""Exhaustive oracle-agreement sweep shared by the CLI and the acceptance suite."""

from __future__ import annotations

import random
from typing import Callable, Optional

from .graph import Graph
from .localpfd import pfd
from .oracle import brute_force_pfd, enumerate_connected_graphs, random_connected_graph
from .products import same_factor_multiset
from .skeleton import classical_strong_pfd


def oracle_agreement_sweep(
    max_n: int = 6,
    sample_at_seven: int = 0,
    seed: int = 0,
    progress: Optional[Callable[[str], None]] = None,
) -> list[str]:
    """Compare pfd, classical_strong_pfd and brute_force_pfd on small graphs.

    Covers every connected graph up to ``max_n`` vertices exactly once per
    isomorphism class, plus a random sample of connected 7-vertex graphs.
    Returns a list of human-readable mismatch reports (empty = agreement).
    """
    mismatches: list[str] = []
    checked = 0
    for n in range(1, max_n + 1):
        for g in enumerate_connected_graphs(n):
            checked += 1
            mismatches.extend(_compare_all(g, f"n={n} #{checked}"))
        if progress:
            progress(f"n={n}: cumulative {checked} graphs checked")
    if sample_at_seven:
        rng = random.Random(seed)
        for i in range(sample_at_seven):
            g = random_connected_graph(7, rng, p=rng.uniform(0.25, 0.75))
            mismatches.extend(_compare_all(g, f"n=7 sample #{i}"))
        if progress:
            progress(f"n=7: {sample_at_seven} random graphs checked")
    return mismatches


def _describe(factors) -> str:
    return "*".join(f"({f.n}v,{f.m}e)" for f in sorted(factors, key=lambda x: (x.n, x.m)))


def _compare_all(g: Graph, tag: str) -> list[str]:
    out = []
    local = pfd(g).factors
    classical = classical_strong_pfd(g).factors
    brute = brute_force_pfd(g)
    if not same_factor_multiset(local, brute):
        out.append(f"{tag}: local {_describe(local)} != oracle {_describe(brute)}")
    if not same_factor_multiset(classical, brute):
        out.append(f"{tag}: classical {_describe(classical)} != oracle {_describe(brute)}")
    return out
