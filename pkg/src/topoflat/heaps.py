"""Mergeable max-priority queue and disjoint-set forest.

The heap is a pairing heap: amortized O(log n) extract, O(1) insert and
merge, which is what the region propagations need (the asymptotic budget is
the same as with Fibonacci heaps; decrease-key is never required).
Priorities are integer order ranks, so comparisons are exact and total.
"""
from __future__ import annotations

import numpy as np


class _Node:
    __slots__ = ("priority", "payload", "children")

    def __init__(self, priority, payload):
        self.priority = priority
        self.payload = payload
        self.children = []


def _meld(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.priority > b.priority:
        a.children.append(b)
        return a
    b.children.append(a)
    return b


def _pair(children):
    # two-pass pairing keeps extract-max amortized logarithmic
    if not children:
        return None
    merged = [_meld(children[i], children[i + 1]) if i + 1 < len(children)
              else children[i] for i in range(0, len(children), 2)]
    root = merged[-1]
    for h in reversed(merged[:-1]):
        root = _meld(h, root)
    return root


class MergeableHeap:
    """Max-heap over (priority, payload) with constant-time destructive merge."""

    __slots__ = ("_root", "_size")

    def __init__(self):
        self._root = None
        self._size = 0

    def __len__(self):
        return self._size

    def __bool__(self):
        return self._size > 0

    def insert(self, priority: int, payload) -> None:
        self._root = _meld(self._root, _Node(priority, payload))
        self._size += 1

    def peek(self):
        if self._root is None:
            raise IndexError("peek on empty heap")
        return self._root.priority, self._root.payload

    def extract_max(self):
        if self._root is None:
            raise IndexError("extract from empty heap")
        node = self._root
        self._root = _pair(node.children)
        self._size -= 1
        return node.priority, node.payload

    def merge(self, other: "MergeableHeap") -> "MergeableHeap":
        """Absorb ``other``; afterwards ``other`` is empty and must not be reused."""
        self._root = _meld(self._root, other._root)
        self._size += other._size
        other._root = None
        other._size = 0
        return self


def heap_insert(h: MergeableHeap, priority: int, payload) -> None:
    h.insert(priority, payload)


def heap_merge(h1: MergeableHeap, h2: MergeableHeap) -> MergeableHeap:
    """Union heap; both inputs are consumed (h1 is reused as the result)."""
    return h1.merge(h2)


class DisjointSet:
    """Union-find over 0..n-1 with union by rank and path compression."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.rank = np.zeros(n, dtype=np.int8)
        self.n_components = n

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.parent):
            raise IndexError(f"id {v} out of range (n={len(self.parent)})")

    def find(self, v: int) -> int:
        self._check(v)
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return int(root)

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.n_components -= 1
        return int(ra)


def ds_find(d: DisjointSet, v: int) -> int:
    return d.find(v)


def ds_union(d: DisjointSet, a: int, b: int) -> int:
    return d.union(a, b)
