import io
import itertools
import json
from math import comb

import numpy as np
import pytest

from conftest import pure_betti
from rcsim.cohomology import Cochain, betti_top, is_coboundary, is_cocycle
from rcsim.complex import SimplicialComplexK, face_rank, make_rng, sample_ynp
from rcsim.errors import CapacityError
from rcsim.oracle import (
    CocycleSurveyRecord,
    brute_betti,
    check_structure_bounds,
    coboundary_masks,
    cocycle_masks,
    degree_bound,
    minimal_cocycle_survey,
    write_survey_jsonl,
    x_count,
)

ALL_TRIANGLES_4 = list(itertools.combinations(range(4), 3))


def test_brute_betti_examples():
    full = SimplicialComplexK.from_faces(4, 2, ALL_TRIANGLES_4)
    assert len(cocycle_masks(full)) == 8
    assert len(coboundary_masks(4, 2)) == 8
    assert brute_betti(full) == 0
    empty = SimplicialComplexK(4, 2)
    assert len(cocycle_masks(empty)) == 2**6
    assert brute_betti(empty) == 3


def test_brute_betti_agrees_with_pure_enumeration(rng):
    for _ in range(40):
        n = int(rng.integers(3, 7))
        k = int(rng.integers(1, 4))
        if n <= k:
            continue
        cx = sample_ynp(n, k, rng.random(), rng)
        assert brute_betti(cx) == pure_betti(n, k, cx.faces())


def test_brute_betti_matches_betti_top():
    rng = make_rng(99)
    for _ in range(200):
        n = int(rng.integers(4, 7))
        cx = sample_ynp(n, 2, float(rng.choice(np.arange(1, 10) / 10)), rng)
        assert brute_betti(cx) == betti_top(cx).beta


def test_capacity_error():
    with pytest.raises(CapacityError):
        brute_betti(SimplicialComplexK(8, 2))
    with pytest.raises(CapacityError):
        minimal_cocycle_survey(SimplicialComplexK(7, 2))


def test_x_count_examples():
    assert x_count(Cochain(5, 1)) == 0
    assert x_count(Cochain.indicator(5, [(0, 1)])) == 3
    tri = [(0, 1), (1, 2), (0, 2)]
    counts = [sum(e in tri for e in itertools.combinations(t, 2)) for t in ALL_TRIANGLES_4]
    assert counts == [3, 1, 1, 1]
    # all four triangles meet the support oddly
    assert x_count(Cochain.indicator(4, tri)) == sum(c % 2 for c in counts) == 4


def test_x_count_relabel_invariance(rng):
    n = 6
    edges = list(itertools.combinations(range(n), 2))
    for _ in range(30):
        support = [e for e in edges if rng.random() < 0.4]
        if not support:
            continue
        perm = rng.permutation(n)
        moved = [tuple(sorted((int(perm[a]), int(perm[b])))) for a, b in support]
        assert x_count(Cochain.indicator(n, support)) == x_count(Cochain.indicator(n, moved))


def test_survey_examples():
    full = SimplicialComplexK.from_faces(4, 2, ALL_TRIANGLES_4)
    assert minimal_cocycle_survey(full) == []
    recs = minimal_cocycle_survey(SimplicialComplexK(4, 2))
    single = [r for r in recs if r.cochain == 1 << face_rank((0, 1))]
    assert len(single) == 1
    rec = single[0]
    assert rec.support_size == 1 and rec.x_count == 2
    assert rec.is_minimal_in_coset and rec.is_globally_minimal
    assert rec.max_degree == 1 and rec.num_nontrivial_components == 1


def test_survey_records_are_nontrivial_cocycles(rng):
    for _ in range(5):
        cx = sample_ynp(5, 2, rng.uniform(0.2, 0.8), rng)
        recs = minimal_cocycle_survey(cx)
        z = len(cocycle_masks(cx))
        b = len(coboundary_masks(5, 2))
        assert len(recs) == z - b
        for r in recs[:50]:
            f = Cochain(5, 1, r.cochain)
            assert is_cocycle(f, cx) and not is_coboundary(f)
            assert r.x_count == x_count(f)
            assert r.support_size == len(f.support())


def test_coset_minimality_against_cut_enumeration(rng):
    n = 5
    cuts = coboundary_masks(n, 2)
    assert len(cuts) == 2 ** (n - 1)
    cx = sample_ynp(n, 2, 0.3, rng)
    for r in minimal_cocycle_survey(cx):
        best = min(bin(r.cochain ^ int(c)).count("1") for c in cuts)
        assert r.is_minimal_in_coset == (r.support_size == best)


def test_degree_bound_formula():
    assert degree_bound(5, 2) == 2
    assert degree_bound(6, 2) == 2
    assert degree_bound(7, 2) == 3
    assert degree_bound(6, 3) == 2


def test_check_bounds_empty_and_single_edge():
    assert check_structure_bounds([]) == []
    rec = CocycleSurveyRecord(5, 2, 1, 1, 1, 3, 1, True, True)
    assert 3 * rec.x_count >= 5 * rec.support_size
    assert check_structure_bounds([rec]) == []


def test_check_bounds_flags_violations():
    bad = CocycleSurveyRecord(5, 2, 0, 4, 3, 1, 2, True, True)
    kinds = {v.kind for v in check_structure_bounds([bad])}
    assert kinds == {"max_degree", "x_count", "components"}


def test_survey_k2_no_violations():
    rng = make_rng(2024)
    for _ in range(40):
        n = int(rng.integers(5, 7))
        cx = sample_ynp(n, 2, float(rng.uniform(0.05, 0.9)), rng)
        assert check_structure_bounds(minimal_cocycle_survey(cx)) == []


def test_survey_k3_no_violations():
    rng = make_rng(7)
    for _ in range(10):
        n = int(rng.integers(5, 7))
        cx = sample_ynp(n, 3, float(rng.uniform(0.1, 0.9)), rng)
        recs = minimal_cocycle_survey(cx, minimal_only=True)
        assert all(r.is_minimal_in_coset for r in recs)
        assert check_structure_bounds(recs) == []


def test_coset_minimal_cocycles_may_split():
    # two disjoint isolated edges: minimal in their coset, two components
    cx = SimplicialComplexK(5, 2)
    mask = (1 << face_rank((0, 1))) | (1 << face_rank((2, 3)))
    rec = next(r for r in minimal_cocycle_survey(cx) if r.cochain == mask)
    assert rec.is_minimal_in_coset and not rec.is_globally_minimal
    assert rec.num_nontrivial_components == 2
    assert check_structure_bounds([rec]) == []


def test_isolated_edge_is_nontrivial_cocycle(rng):
    for _ in range(20):
        n = int(rng.integers(3, 7))
        cx = sample_ynp(n, 2, rng.uniform(0, 0.5), rng)
        covered = {e for f in cx.faces() for e in itertools.combinations(f, 2)}
        masks = {r.cochain for r in minimal_cocycle_survey(cx)}
        for e in itertools.combinations(range(n), 2):
            if e not in covered:
                assert 1 << face_rank(e) in masks


def test_survey_jsonl():
    recs = minimal_cocycle_survey(SimplicialComplexK(4, 2), minimal_only=True)
    buf = io.StringIO()
    write_survey_jsonl(recs, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == len(recs)
    first = json.loads(lines[0])
    assert {"support_size", "max_degree", "x_count", "is_minimal_in_coset"} <= set(first)
