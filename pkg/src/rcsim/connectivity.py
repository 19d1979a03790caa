"""Isolated (k-1)-faces and hypergraph connectivity via union-find."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from rcsim.complex import SimplicialComplexK, boundary_rank_table


class UnionFind:
    """Disjoint sets over ``range(size)``; path halving, union by size."""

    __slots__ = ("parent", "size", "count")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.count = size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def component_sizes(self) -> list[int]:
        return [self.size[x] for x in range(len(self.parent)) if self.parent[x] == x]


@dataclass(frozen=True)
class ComponentProfile:
    num_components: int
    isolated_count: int
    largest_size: int
    sizes: tuple[int, ...]  # descending

    @property
    def is_giant_plus_isolated(self) -> bool:
        """One component holds every non-isolated (k-1)-face."""
        return self.largest_size + self.isolated_count == sum(self.sizes)

    def size_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items()))


def _degrees(cx: SimplicialComplexK) -> np.ndarray:
    table = boundary_rank_table(cx.n, cx.k)[cx.ranks]
    return np.bincount(table.ravel(), minlength=cx.num_lower)


def isolated_count(cx: SimplicialComplexK) -> int:
    """Number of (k-1)-faces lying in no present k-face."""
    return int(np.count_nonzero(_degrees(cx) == 0))


def components(cx: SimplicialComplexK) -> ComponentProfile:
    uf = UnionFind(cx.num_lower)
    for row in boundary_rank_table(cx.n, cx.k)[cx.ranks].tolist():
        first = row[0]
        for other in row[1:]:
            uf.union(first, other)
    sizes = tuple(sorted(uf.component_sizes(), reverse=True))
    return ComponentProfile(
        num_components=uf.count,
        isolated_count=isolated_count(cx),
        largest_size=sizes[0],
        sizes=sizes,
    )


def is_hypergraph_connected(cx: SimplicialComplexK) -> bool:
    """Every two (k-1)-faces are joined by a chain of present k-faces."""
    return components(cx).num_components == 1
