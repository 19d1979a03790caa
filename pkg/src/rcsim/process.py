"""The growth process Y(n, M) and its three hitting times.

M1: first step with no isolated (k-1)-face.
M2: first step at which the (k-1)-faces are hypergraph connected.
M3: first step at which H^{k-1}(Y; Z/2) vanishes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import comb
from typing import TextIO

from rcsim.cohomology import rank_complete_lower
from rcsim.complex import GrowthOrder, boundary_rank_table
from rcsim.connectivity import UnionFind
from rcsim.errors import InvalidInputError
from rcsim.gf2 import ColumnBasis

TRACE_FIELDS = ("m", "isolated_count", "num_components", "rank")


@dataclass(frozen=True)
class HittingTimes:
    m1: int
    m2: int
    m3: int

    def __post_init__(self) -> None:
        if not 1 <= self.m1 <= self.m2 <= self.m3:
            raise InvalidInputError(f"hitting times out of order: {self}")


def run_hitting_times(
    order: GrowthOrder, early_exit: bool = True, trace: TextIO | None = None
) -> HittingTimes:
    """Insert k-faces in birth order and record M1, M2, M3.

    Isolated faces are tracked with degree counters, connectivity with
    union-find, and the cohomology with a streamed column basis of I_{k-1}:
    H^{k-1} vanishes once that rank reaches C(n, k) - rank_complete_lower.
    With ``trace`` set, one CSV row per step is written there.
    """
    if not isinstance(order, GrowthOrder):
        raise InvalidInputError("expected a GrowthOrder")
    n, k = order.n, order.k
    num_lower = comb(n, k)
    target = num_lower - rank_complete_lower(n, k)

    degree = [0] * num_lower
    zero = num_lower
    uf = UnionFind(num_lower)
    basis = ColumnBasis(num_lower)
    table = boundary_rank_table(n, k)
    m1 = m2 = m3 = None

    writer = None
    if trace is not None:
        writer = csv.writer(trace, lineterminator="\n")
        writer.writerow(TRACE_FIELDS)

    for m, r in enumerate(order.order.tolist(), start=1):
        bnd = table[r].tolist()
        col = 0
        for b in bnd:
            if degree[b] == 0:
                zero -= 1
            degree[b] += 1
            col |= 1 << b
        for b in bnd[1:]:
            uf.union(bnd[0], b)
        basis.insert(col)

        if m1 is None and zero == 0:
            m1 = m
        if m2 is None and uf.count == 1:
            m2 = m
        if m3 is None and basis.rank == target:
            m3 = m
        if writer is not None:
            writer.writerow((m, zero, uf.count, basis.rank))
        if early_exit and m3 is not None:
            break

    if m1 is None or m2 is None or m3 is None:
        # cannot happen: the full k-skeleton of the simplex is acyclic
        raise RuntimeError("process ended before all hitting times were reached")
    return HittingTimes(m1, m2, m3)


def coincidence_flags(h: HittingTimes) -> tuple[bool, bool]:
    """(M1 == M2, M1 == M2 == M3)."""
    eq12 = h.m1 == h.m2
    return eq12, eq12 and h.m2 == h.m3
