"""Disjoint-set forest over arbitrary hashable keys."""

from __future__ import annotations

from typing import Hashable, Iterable


class UnionFind:
    """Union by size with path halving. Keys are added on first touch."""

    __slots__ = ("parent", "size")

    def __init__(self, keys: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.size: dict = {}
        for k in keys:
            self.add(k)

    def add(self, key) -> None:
        if key not in self.parent:
            self.parent[key] = key
            self.size[key] = 1

    def __contains__(self, key) -> bool:
        return key in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, key):
        parent = self.parent
        if key not in parent:
            parent[key] = key
            self.size[key] = 1
            return key
        while parent[key] != key:
            parent[key] = parent[parent[key]]
            key = parent[key]
        return key

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size.pop(rb)
        return ra

    def union_all(self, keys: Iterable) -> None:
        it = iter(keys)
        try:
            first = next(it)
        except StopIteration:
            return
        for k in it:
            self.union(first, k)

    def groups(self) -> dict:
        """Map each root to the list of its members."""
        out: dict = {}
        for k in self.parent:
            out.setdefault(self.find(k), []).append(k)
        return out
