"""Exhaustive ground truth for small complexes.

Cochains are enumerated as integer bit masks (bit i = value on the face of
colex rank i), so every routine here is exponential in C(n, k) and guarded by
``MAX_ENUM_BITS``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from math import comb
from typing import Iterable, TextIO

import numpy as np

from rcsim.cohomology import Cochain
from rcsim.complex import SimplicialComplexK, boundary_rank_table
from rcsim.connectivity import UnionFind
from rcsim.errors import CapacityError, InvalidInputError

MAX_ENUM_BITS = 24
SURVEY_MAX_N = 6


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _check_capacity(bits: int, what: str) -> None:
    if bits > MAX_ENUM_BITS:
        raise CapacityError(f"{what}: 2^{bits} cochains exceeds the 2^{MAX_ENUM_BITS} limit")


def _face_masks(table: np.ndarray) -> np.ndarray:
    """One bit mask per row of a boundary table."""
    return np.bitwise_or.reduce(np.left_shift(np.uint64(1), table.astype(np.uint64)), axis=1)


def cocycle_masks(cx: SimplicialComplexK) -> np.ndarray:
    """Every (k-1)-cocycle of ``cx`` as a uint64 mask, ascending."""
    bits = cx.num_lower
    _check_capacity(bits, "cocycle enumeration")
    f = np.arange(1 << bits, dtype=np.uint64)
    ok = np.ones(len(f), dtype=bool)
    for mask in _face_masks(boundary_rank_table(cx.n, cx.k)[cx.ranks]):
        ok &= (np.bitwise_count(f & mask) & 1) == 0
    return f[ok]


def _lower_rows(n: int, k: int) -> list[int]:
    """Coboundaries of the indicator cochains one degree down."""
    if k == 1:
        return [(1 << n) - 1]
    rows = [0] * comb(n, k - 1)
    for col, bnd in enumerate(boundary_rank_table(n, k - 1).tolist()):
        for b in bnd:
            rows[b] ^= 1 << col
    return rows


def coboundary_masks(n: int, k: int) -> np.ndarray:
    """All distinct (k-1)-coboundaries on the complete skeleton, ascending."""
    _check_capacity(comb(n, k), "coboundary enumeration")
    rows = _lower_rows(n, k)
    _check_capacity(len(rows), "coboundary enumeration")
    images = np.zeros(1, dtype=np.uint64)
    for r in rows:
        images = np.concatenate([images, images ^ np.uint64(r)])
    return np.unique(images)


def _log2_exact(x: int) -> int:
    if x <= 0 or x & (x - 1):
        raise AssertionError(f"{x} is not a power of two")
    return x.bit_length() - 1


def brute_betti(cx: SimplicialComplexK) -> int:
    """beta^{k-1} as log2|Z| - log2|B| by enumerating every cochain."""
    z = len(cocycle_masks(cx))
    b = len(coboundary_masks(cx.n, cx.k))
    return _log2_exact(z) - _log2_exact(b)


def x_count(f: Cochain) -> int:
    """Number of k-faces of the complete complex whose boundary meets supp(f) oddly.

    For a 1-cochain this counts triangles containing 1 or 3 support edges.
    """
    table = boundary_rank_table(f.n, f.degree + 1)
    if not len(table):
        return 0
    return int(np.count_nonzero(f.bits()[table].sum(axis=1) & 1))


@dataclass(frozen=True)
class CocycleSurveyRecord:
    n: int
    k: int
    cochain: int  # support mask over (k-1)-face ranks
    support_size: int
    max_degree: int
    x_count: int
    num_nontrivial_components: int
    is_minimal_in_coset: bool
    is_globally_minimal: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _canonical(f: np.ndarray, basis: dict[int, int]) -> np.ndarray:
    """Coset representative of f modulo the span of a fully reduced basis."""
    out = f.copy()
    for pivot, vec in basis.items():
        hit = ((f >> np.uint64(pivot)) & np.uint64(1)).astype(bool)
        out[hit] ^= np.uint64(vec)
    return out


def _reduced_basis(rows: Iterable[int]) -> dict[int, int]:
    basis: dict[int, int] = {}
    for r in rows:
        for p, v in basis.items():
            if r >> p & 1:
                r ^= v
        if not r:
            continue
        b = (r & -r).bit_length() - 1
        for p in list(basis):
            if basis[p] >> b & 1:
                basis[p] ^= r
        basis[b] = r
    return basis


def _nontrivial_components(mask: int, hyperedges: list[list[int]], size: int) -> int:
    uf = UnionFind(size)
    touched = set()
    m = mask
    while m:
        low = m & -m
        bnd = hyperedges[low.bit_length() - 1]
        touched.update(bnd)
        for b in bnd[1:]:
            uf.union(bnd[0], b)
        m ^= low
    return len({uf.find(v) for v in touched})


def minimal_cocycle_survey(
    cx: SimplicialComplexK, minimal_only: bool = False
) -> list[CocycleSurveyRecord]:
    """One record per nontrivial (k-1)-cocycle of ``cx``.

    A cocycle is minimal in its coset when no f + g, g a coboundary, has
    smaller support; globally minimal when no nontrivial cocycle does.
    Degrees and components refer to the support hypergraph whose hyperedges
    are the support (k-1)-faces and whose vertices are the (k-2)-faces.
    """
    if cx.k < 2:
        raise InvalidInputError("survey needs k >= 2")
    if cx.n > SURVEY_MAX_N:
        raise CapacityError(f"survey limited to n <= {SURVEY_MAX_N}")
    n, k = cx.n, cx.k
    z = cocycle_masks(cx)
    basis = _reduced_basis(_lower_rows(n, k))
    canon = _canonical(z, basis)
    nontrivial = canon != 0
    z, canon = z[nontrivial], canon[nontrivial]
    if not len(z):
        return []

    support = _popcount(z)
    _, inverse = np.unique(canon, return_inverse=True)
    coset_min = np.full(inverse.max() + 1, np.iinfo(np.int64).max)
    np.minimum.at(coset_min, inverse, support)
    in_coset = support == coset_min[inverse]
    global_min = support == support.min()
    keep = in_coset if minimal_only else np.ones(len(z), dtype=bool)

    hyperedges = boundary_rank_table(n, k - 1)  # (k-1)-face -> its (k-2)-faces
    num_vertices = comb(n, k - 1)
    star = np.zeros(num_vertices, dtype=np.uint64)
    for face, bnd in enumerate(hyperedges.tolist()):
        for v in bnd:
            star[v] |= np.uint64(1 << face)
    degrees = np.stack([_popcount(z & s) for s in star], axis=1)
    max_degree = degrees.max(axis=1)

    top_masks = _face_masks(boundary_rank_table(n, k))
    xs = np.zeros(len(z), dtype=np.int64)
    for mask in top_masks:
        xs += np.bitwise_count(z & mask) & 1

    edges = hyperedges.tolist()
    records = []
    for i in np.flatnonzero(keep).tolist():
        mask = int(z[i])
        records.append(
            CocycleSurveyRecord(
                n=n,
                k=k,
                cochain=mask,
                support_size=int(support[i]),
                max_degree=int(max_degree[i]),
                x_count=int(xs[i]),
                num_nontrivial_components=_nontrivial_components(mask, edges, num_vertices),
                is_minimal_in_coset=bool(in_coset[i]),
                is_globally_minimal=bool(global_min[i]),
            )
        )
    return records


@dataclass(frozen=True)
class Violation:
    record: CocycleSurveyRecord
    kind: str  # "max_degree" | "x_count" | "components"
    detail: str


def degree_bound(n: int, k: int) -> int:
    return (n - k + 1) // 2


def check_structure_bounds(records: Iterable[CocycleSurveyRecord]) -> list[Violation]:
    """Check the extremal-cocycle structure properties.

    Degree bound and X(f) >= n m / (k+1) are checked on every cocycle that
    is minimal in its coset; the single-nontrivial-component property on
    cocycles of globally minimal support.
    """
    out = []
    for r in records:
        if r.is_minimal_in_coset:
            bound = degree_bound(r.n, r.k)
            if r.max_degree > bound:
                out.append(Violation(r, "max_degree", f"{r.max_degree} > {bound}"))
            if (r.k + 1) * r.x_count < r.n * r.support_size:
                out.append(
                    Violation(r, "x_count", f"{r.x_count} < {r.n}*{r.support_size}/{r.k + 1}")
                )
        if r.is_globally_minimal and r.num_nontrivial_components > 1:
            out.append(Violation(r, "components", f"{r.num_nontrivial_components} components"))
    return out


def write_survey_jsonl(records: Iterable[CocycleSurveyRecord], fh: TextIO) -> None:
    for r in records:
        fh.write(r.to_json() + "\n")
