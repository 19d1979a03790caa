"""Incidence matrices and Z/2 cohomology in the top-minus-one degree.

Matrices are indexed by their row degree: ``incidence_matrix(n, j, ...)`` has
the j-faces as rows and (j+1)-faces as columns. For a k-complex with complete
(k-1)-skeleton

    beta^{k-1} = C(n, k) - rank(I_{k-1} on present k-faces) - rank(I_{k-2} complete)

where for k = 1 the lower matrix is the single all-ones row of reduced
cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from rcsim.complex import SimplicialComplexK, boundary_rank_table, face_rank
from rcsim.errors import InvalidInputError
from rcsim.gf2 import BitMatrix, as_int, in_row_space, rank


@dataclass(frozen=True)
class Cochain:
    """Z/2-valued function on the j-faces of ``[0, n)``, as a bit mask by rank."""

    n: int
    degree: int
    values: int = 0

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise InvalidInputError("cochain degree must be >= 0")
        object.__setattr__(self, "values", as_int(self.values, self.length))

    @property
    def length(self) -> int:
        return comb(self.n, self.degree + 1)

    @classmethod
    def indicator(cls, n: int, faces: Iterable[Sequence[int]]) -> Cochain:
        faces = [tuple(f) for f in faces]
        if not faces:
            raise InvalidInputError("use Cochain(n, degree) for the zero cochain")
        degree = len(faces[0]) - 1
        mask = 0
        for f in faces:
            if len(f) != degree + 1:
                raise InvalidInputError("faces of mixed dimension")
            mask ^= 1 << face_rank(f, n)
        return cls(n, degree, mask)

    def support(self) -> list[int]:
        v, out = self.values, []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def bits(self) -> np.ndarray:
        raw = self.values.to_bytes((self.length + 7) // 8, "little")
        unpacked = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return unpacked[: self.length].astype(bool)

    def __add__(self, other: Cochain) -> Cochain:
        if (self.n, self.degree) != (other.n, other.degree):
            raise InvalidInputError("cochains live on different spaces")
        return Cochain(self.n, self.degree, self.values ^ other.values)


@dataclass(frozen=True)
class BettiResult:
    beta: int
    rank_upper: int
    rank_lower: int


def incidence_matrix(n: int, j: int, present: Iterable[int] | None = None) -> BitMatrix:
    """Rows: all j-faces. Columns: present (j+1)-faces in ascending rank.

    ``present=None`` means every (j+1)-face. ``j = -1`` gives the reduced
    all-ones row over the present vertices.
    """
    if j < -1:
        raise InvalidInputError("j must be >= -1")
    total = comb(n, j + 2)
    cols = np.arange(total, dtype=np.int64) if present is None else np.unique(
        np.fromiter((int(r) for r in present), dtype=np.int64)
    )
    if len(cols) and (cols[0] < 0 or cols[-1] >= total):
        raise InvalidInputError(f"({j + 1})-face rank out of range [0, {total})")
    if j == -1:
        return BitMatrix.from_dense(np.ones((1, len(cols)), dtype=bool))
    table = boundary_rank_table(n, j + 1)[cols]
    row_idx = table.ravel()
    col_idx = np.repeat(np.arange(len(cols)), j + 2)
    return BitMatrix.from_entries(comb(n, j + 1), len(cols), row_idx, col_idx)


@lru_cache(maxsize=None)
def rank_complete_lower(n: int, k: int) -> int:
    """Rank of I_{k-2} over the complete skeleton (1 for the reduced row at k=1)."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if k == 1:
        return 1
    return rank(incidence_matrix(n, k - 2))


def betti_top(cx: SimplicialComplexK) -> BettiResult:
    """beta^{k-1} of ``cx`` over Z/2 via two rank computations."""
    upper = rank(incidence_matrix(cx.n, cx.k - 1, cx.ranks))
    lower = rank_complete_lower(cx.n, cx.k)
    return BettiResult(cx.num_lower - upper - lower, upper, lower)


def _check_degree(f: Cochain, cx: SimplicialComplexK) -> None:
    if f.n != cx.n or f.degree != cx.k - 1:
        raise InvalidInputError(
            f"need a degree-{cx.k - 1} cochain on n={cx.n}, got degree {f.degree} on n={f.n}"
        )


def is_cocycle(f: Cochain, cx: SimplicialComplexK) -> bool:
    """True iff f sums to 0 over the boundary of every present k-face."""
    _check_degree(f, cx)
    if not len(cx.ranks):
        return True
    bits = f.bits()
    table = boundary_rank_table(cx.n, cx.k)[cx.ranks]
    return not np.any(bits[table].sum(axis=1) & 1)


def is_coboundary(f: Cochain) -> bool:
    """True iff f lies in the row space of the complete lower incidence matrix."""
    lower = incidence_matrix(f.n, f.degree - 1)
    return in_row_space(lower, f.values)
