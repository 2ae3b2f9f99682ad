"""Union-find with path compression and union by size."""

from __future__ import annotations

from typing import Hashable, Iterable


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self._parent: dict = {}
        self._size: dict = {}
        for item in items:
            self.add(item)

    def add(self, item) -> None:
        if item not in self._parent:
            self._parent[item] = item
            self._size[item] = 1

    def find(self, item):
        self.add(item)
        root = item
        parent = self._parent
        while parent[root] != root:
            root = parent[root]
        while parent[item] != root:
            parent[item], item = root, parent[item]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]

    def groups(self) -> dict:
        """Map each root to the sorted list of its members."""
        out: dict = {}
        for item in self._parent:
            out.setdefault(self.find(item), []).append(item)
        # canonical representative: smallest member
        canonical = {}
        for members in out.values():
            members.sort()
            canonical[members[0]] = members
        return canonical

    def __len__(self) -> int:
        return len(self._parent)
