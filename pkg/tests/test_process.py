import csv
import io
import time
from math import comb

import pytest

from rcsim.cohomology import betti_top
from rcsim.complex import GrowthOrder, make_rng, sample_growth_order
from rcsim.connectivity import components, is_hypergraph_connected, isolated_count
from rcsim.errors import InvalidInputError
from rcsim.process import HittingTimes, coincidence_flags, run_hitting_times


def recompute_hitting_times(order):
    """First prefix length at which each property holds, from scratch."""
    m1 = m2 = m3 = None
    for m in range(1, len(order) + 1):
        cx = order.prefix(m)
        if m1 is None and isolated_count(cx) == 0:
            m1 = m
        if m2 is None and is_hypergraph_connected(cx):
            m2 = m
        if m3 is None and betti_top(cx).beta == 0:
            m3 = m
            break
    return m1, m2, m3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_single_face_process(k):
    order = sample_growth_order(k + 1, k, make_rng(0))
    assert run_hitting_times(order) == HittingTimes(1, 1, 1)


def test_matches_recomputation_n5():
    for seed in range(100):
        order = sample_growth_order(5, 2, make_rng(seed))
        h = run_hitting_times(order)
        assert (h.m1, h.m2, h.m3) == recompute_hitting_times(order)


@pytest.mark.parametrize("n,k", [(6, 3), (7, 2), (6, 1), (9, 1)])
def test_matches_recomputation_other_sizes(n, k):
    for seed in range(10):
        order = sample_growth_order(n, k, make_rng(seed))
        h = run_hitting_times(order)
        assert (h.m1, h.m2, h.m3) == recompute_hitting_times(order)
        if k == 1:
            assert h.m2 == h.m3


def test_ordering_and_determinism():
    for seed in range(30):
        order = sample_growth_order(12, 2, make_rng(seed))
        h = run_hitting_times(order)
        assert h.m1 <= h.m2 <= h.m3
        assert run_hitting_times(order) == h
        assert run_hitting_times(order, early_exit=False) == h


def test_trace_invariants():
    n, k = 9, 2
    order = sample_growth_order(n, k, make_rng(5))
    buf = io.StringIO()
    h = run_hitting_times(order, early_exit=False, trace=buf)
    rows = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert list(rows[0]) == ["m", "isolated_count", "num_components", "rank"]
    assert len(rows) == comb(n, k + 1)
    prev_comp, prev_rank = comb(n, k), 0
    for row in rows:
        m, comp, rk = int(row["m"]), int(row["num_components"]), int(row["rank"])
        assert 0 <= prev_comp - comp <= k
        assert rk - prev_rank in (0, 1)
        prev_comp, prev_rank = comp, rk
    check = [1, h.m1, h.m2, h.m3 - 1, h.m3, 40]
    for m in check:
        cx = order.prefix(m)
        row = rows[m - 1]
        assert int(row["isolated_count"]) == isolated_count(cx)
        assert int(row["num_components"]) == components(cx).num_components
        assert int(row["rank"]) == betti_top(cx).rank_upper
    assert betti_top(order.prefix(h.m3)).beta == 0
    assert betti_top(order.prefix(h.m3 - 1)).beta >= 1


def test_rejects_non_order():
    with pytest.raises(InvalidInputError):
        run_hitting_times([0, 1, 2])


def test_hitting_times_validates_ordering():
    with pytest.raises(InvalidInputError):
        HittingTimes(5, 4, 6)


def test_coincidence_flags():
    assert coincidence_flags(HittingTimes(5, 5, 5)) == (True, True)
    assert coincidence_flags(HittingTimes(5, 5, 7)) == (True, False)
    assert coincidence_flags(HittingTimes(4, 6, 6)) == (False, False)


def test_full_run_n50_under_10s():
    order = sample_growth_order(50, 2, make_rng(11))
    start = time.perf_counter()
    run_hitting_times(order, early_exit=False)
    assert time.perf_counter() - start < 10
