import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcsim.cohomology import betti_top
from rcsim.complex import SimplicialComplexK, make_rng, sample_ynp
from rcsim.connectivity import (
    UnionFind,
    components,
    is_hypergraph_connected,
    isolated_count,
)


def bfs_components(n, k, faces):
    """Components of (k-1)-faces by graph search over explicit face sets."""
    lower = list(itertools.combinations(range(n), k))
    adj = {f: set() for f in lower}
    for top in faces:
        bnd = list(itertools.combinations(top, k))
        for a in bnd:
            adj[a].update(bnd)
    seen, sizes = set(), []
    for start in lower:
        if start in seen:
            continue
        stack, size = [start], 0
        seen.add(start)
        while stack:
            f = stack.pop()
            size += 1
            for g in adj[f] - seen:
                seen.add(g)
                stack.append(g)
        sizes.append(size)
    return sorted(sizes, reverse=True)


def test_isolated_count_examples():
    assert isolated_count(SimplicialComplexK(6, 2)) == comb(6, 2)
    full = SimplicialComplexK.from_ranks(6, 2, range(comb(6, 3)))
    assert isolated_count(full) == 0
    one = SimplicialComplexK.from_faces(4, 2, [(0, 1, 2)])
    assert isolated_count(one) == 3


def test_component_examples():
    prof = components(SimplicialComplexK(5, 2))
    assert prof.num_components == comb(5, 2)
    assert set(prof.sizes) == {1}
    prof = components(SimplicialComplexK.from_faces(4, 2, [(0, 1, 2)]))
    assert prof.sizes == (3, 1, 1, 1)
    assert prof.isolated_count == 3 and prof.largest_size == 3
    assert prof.is_giant_plus_isolated
    full = SimplicialComplexK.from_ranks(5, 2, range(comb(5, 3)))
    assert components(full).num_components == 1
    assert is_hypergraph_connected(full)
    assert not is_hypergraph_connected(SimplicialComplexK(5, 2))


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 1) and uf.union(3, 4) and not uf.union(1, 0)
    assert uf.count == 3
    assert sorted(uf.component_sizes()) == [1, 2, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(4, 8), st.sampled_from([1, 2, 3]), st.floats(0, 1))
def test_profile_matches_search_and_invariants(seed, n, k, p):
    cx = sample_ynp(n, k, p, make_rng(seed))
    prof = components(cx)
    assert list(prof.sizes) == bfs_components(n, k, cx.faces())
    assert sum(prof.sizes) == comb(n, k)
    assert prof.isolated_count == isolated_count(cx)
    if is_hypergraph_connected(cx):
        assert isolated_count(cx) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(4, 8), st.floats(0, 1))
def test_profile_is_order_independent(seed, n, p):
    rng = make_rng(seed)
    cx = sample_ynp(n, 2, p, rng)
    ranks = list(cx.kfaces)
    rng.shuffle(ranks)
    again = components(SimplicialComplexK.from_ranks(n, 2, ranks))
    assert again == components(cx)


def test_vanishing_cohomology_implies_connected():
    rng = make_rng(17)
    checked = vanishing = 0
    for _ in range(300):
        n = int(rng.integers(4, 8))
        k = int(rng.integers(2, 4))
        cx = sample_ynp(n, k, float(rng.uniform(0.2, 1.0)), rng)
        if betti_top(cx).beta == 0:
            vanishing += 1
            assert is_hypergraph_connected(cx)
        checked += 1
    assert vanishing > 50
