"""Degree-proportional node sampling on a Fenwick (binary indexed) tree."""

from __future__ import annotations

import random


class EmptySampler(Exception):
    pass


class PreferentialSampler:
    """Integer weights per node id with O(log n) update and weighted draw.

    Capacity grows by doubling, so callers never need to pre-size it.
    """

    def __init__(self, capacity: int = 16) -> None:
        self._size = 1
        while self._size < max(capacity, 1):
            self._size <<= 1
        self._tree = [0] * (self._size + 1)
        self._weights = [0] * self._size
        self._total = 0

    @property
    def total(self) -> int:
        return self._total

    def __len__(self) -> int:
        return self._size

    def weight(self, node: int) -> int:
        return self._weights[node] if node < self._size else 0

    def _grow(self, node: int) -> None:
        size = self._size
        while size <= node:
            size <<= 1
        weights = self._weights + [0] * (size - self._size)
        # linear-time rebuild
        tree = [0] * (size + 1)
        for i, w in enumerate(weights, start=1):
            tree[i] += w
            parent = i + (i & -i)
            if parent <= size:
                tree[parent] += tree[i]
        self._size, self._tree, self._weights = size, tree, weights

    def add(self, node: int, delta: int) -> None:
        if node >= self._size:
            self._grow(node)
        new = self._weights[node] + delta
        if new < 0:
            raise ValueError(f"weight of node {node} would become negative")
        self._weights[node] = new
        self._total += delta
        tree = self._tree
        size = self._size
        i = node + 1
        while i <= size:
            tree[i] += delta
            i += i & -i

    def set(self, node: int, weight: int) -> None:
        self.add(node, weight - self.weight(node))

    def find(self, r: int) -> int:
        """Node whose cumulative weight interval contains ``r`` (0 <= r < total)."""
        tree = self._tree
        pos = 0
        step = self._size
        while step:
            nxt = pos + step
            if nxt <= self._size and tree[nxt] <= r:
                pos = nxt
                r -= tree[nxt]
            step >>= 1
        return pos

    def sample(self, rng: random.Random) -> int:
        if self._total <= 0:
            raise EmptySampler("no node carries positive weight")
        return self.find(rng.randrange(self._total))
