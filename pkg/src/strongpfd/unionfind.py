"""Disjoint-set forest over arbitrary hashable keys."""

from __future__ import annotations

from typing import Hashable, Iterable


class UnionFind:
    """Union-find with path compression; elements are added lazily on first use."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self._parent: dict = {}
        for item in items:
            self.add(item)

    def add(self, item) -> None:
        if item not in self._parent:
            self._parent[item] = item

    def find(self, item):
        self.add(item)
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a, b):
        """Merge the sets of ``a`` and ``b``; the smaller root wins for determinism."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self._parent[rb] = ra
        return ra

    def same(self, a, b) -> bool:
        return self.find(a) == self.find(b)

    def copy(self) -> "UnionFind":
        other = UnionFind()
        other._parent = dict(self._parent)
        return other
