"""Face combinatorics, random complexes and the growth order.

Faces are sorted tuples of 0-based vertices. A j-face is identified with its
colexicographic rank ``sum(C(v_i, i + 1))``, which does not depend on the
ambient vertex count, so the faces supported on ``[0, n)`` keep their ranks
when ``n`` grows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from rcsim.errors import InvalidInputError

Face = tuple[int, ...]


def _check_face(face: Sequence[int], n: int | None) -> Face:
    face = tuple(int(v) for v in face)
    if not face:
        raise InvalidInputError("a face needs at least one vertex")
    if face[0] < 0:
        raise InvalidInputError(f"negative vertex in {face}")
    for a, b in zip(face, face[1:]):
        if a >= b:
            raise InvalidInputError(f"face {face} is not strictly increasing")
    if n is not None and face[-1] >= n:
        raise InvalidInputError(f"vertex {face[-1]} out of range for n={n}")
    return face


def face_rank(face: Sequence[int], n: int | None = None) -> int:
    """Colex rank of ``face``. ``n`` only adds a range check."""
    face = _check_face(face, n)
    return sum(comb(v, i + 1) for i, v in enumerate(face))


def face_unrank(rank: int, size: int, n: int | None = None) -> Face:
    """Inverse of :func:`face_rank` for faces with ``size`` vertices."""
    if size < 1:
        raise InvalidInputError("size must be >= 1")
    if rank < 0 or (n is not None and rank >= comb(n, size)):
        raise InvalidInputError(f"rank {rank} out of range for size={size}, n={n}")
    out = []
    r = rank
    for i in range(size, 0, -1):
        # largest v with C(v, i) <= r
        v = i - 1
        while comb(v + 1, i) <= r:
            v += 1
        out.append(v)
        r -= comb(v, i)
    return tuple(reversed(out))


def boundary_faces(face: Sequence[int]) -> list[Face]:
    """Faces obtained by deleting one vertex, in deletion-index order."""
    face = _check_face(face, None)
    if len(face) < 2:
        raise InvalidInputError("boundary needs a face with at least two vertices")
    return [face[:i] + face[i + 1:] for i in range(len(face))]


@lru_cache(maxsize=None)
def _binom_table(n: int, size: int) -> np.ndarray:
    table = np.zeros((n + 1, size + 1), dtype=np.int64)
    for v in range(n + 1):
        for i in range(size + 1):
            table[v, i] = comb(v, i)
    return table


@lru_cache(maxsize=32)
def all_faces(n: int, size: int) -> np.ndarray:
    """All ``size``-subsets of ``[0, n)`` as rows, indexed by colex rank."""
    if size < 1 or size > n:
        return np.zeros((0, max(size, 0)), dtype=np.int64)
    total = comb(n, size)
    faces = np.empty((total, size), dtype=np.int64)
    # colex order: the top vertex grows slowest
    faces[:, 0] = np.arange(total) if size == 1 else 0
    if size > 1:
        lower = all_faces(n, size - 1)
        row = 0
        for top in range(size - 1, n):
            block = comb(top, size - 1)
            faces[row:row + block, :-1] = lower[:block]
            faces[row:row + block, -1] = top
            row += block
    faces.setflags(write=False)
    return faces


def face_ranks_array(faces: np.ndarray, n: int) -> np.ndarray:
    """Vectorised colex ranks of an ``(m, size)`` array of sorted faces."""
    faces = np.asarray(faces, dtype=np.int64)
    size = faces.shape[1]
    table = _binom_table(n, size)
    return table[faces, np.arange(1, size + 1)].sum(axis=1)


@lru_cache(maxsize=32)
def boundary_rank_table(n: int, k: int) -> np.ndarray:
    """Ranks of the boundary (k-1)-faces of every k-face, shape (C(n,k+1), k+1)."""
    faces = all_faces(n, k + 1)
    cols = []
    for i in range(k + 1):
        sub = np.delete(faces, i, axis=1)
        cols.append(face_ranks_array(sub, n))
    table = np.stack(cols, axis=1) if cols else np.zeros((0, k + 1), dtype=np.int64)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class SimplicialComplexK:
    """k-complex on ``n`` vertices with a complete (k-1)-skeleton.

    Only the present k-faces are stored, as colex ranks.
    """

    n: int
    k: int
    kfaces: frozenset[int] = frozenset()
    ranks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError("k must be >= 1")
        if self.n <= self.k:
            raise InvalidInputError(f"need n > k, got n={self.n}, k={self.k}")
        kfaces = frozenset(int(r) for r in self.kfaces)
        total = comb(self.n, self.k + 1)
        ranks = np.array(sorted(kfaces), dtype=np.int64)
        if len(ranks) and (ranks[0] < 0 or ranks[-1] >= total):
            raise InvalidInputError(f"k-face rank out of range [0, {total})")
        ranks.setflags(write=False)
        object.__setattr__(self, "kfaces", kfaces)
        object.__setattr__(self, "ranks", ranks)

    @classmethod
    def from_ranks(cls, n: int, k: int, ranks: Iterable[int]) -> SimplicialComplexK:
        return cls(n, k, frozenset(int(r) for r in ranks))

    @classmethod
    def from_faces(cls, n: int, k: int, faces: Iterable[Sequence[int]]) -> SimplicialComplexK:
        ranks = []
        for f in faces:
            if len(f) != k + 1:
                raise InvalidInputError(f"face {tuple(f)} is not a {k}-face")
            ranks.append(face_rank(f, n))
        return cls(n, k, frozenset(ranks))

    @property
    def num_lower(self) -> int:
        """Number of (k-1)-faces, all present."""
        return comb(self.n, self.k)

    @property
    def num_possible(self) -> int:
        return comb(self.n, self.k + 1)

    def faces(self) -> list[Face]:
        return [face_unrank(int(r), self.k + 1) for r in self.ranks]

    def with_face(self, rank: int) -> SimplicialComplexK:
        return SimplicialComplexK(self.n, self.k, self.kfaces | {int(rank)})

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "faces": [list(f) for f in self.faces()]}

    @classmethod
    def from_dict(cls, data: dict) -> SimplicialComplexK:
        try:
            n, k, faces = int(data["n"]), int(data["k"]), data["faces"]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad complex record: {exc}") from None
        return cls.from_faces(n, k, faces)


@dataclass(frozen=True)
class GrowthOrder:
    """Birth order of all k-faces; the first ``m`` entries form Y(n, m)."""

    n: int
    k: int
    order: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        order = np.asarray(self.order, dtype=np.int64)
        total = comb(self.n, self.k + 1)
        if order.ndim != 1 or len(order) != total:
            raise InvalidInputError(f"order must list all {total} k-faces")
        if not np.array_equal(np.sort(order), np.arange(total)):
            raise InvalidInputError("order is not a permutation of the k-face ranks")
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.order)

    def prefix(self, m: int) -> SimplicialComplexK:
        return SimplicialComplexK.from_ranks(self.n, self.k, self.order[:m].tolist())

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "order": self.order.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> GrowthOrder:
        try:
            return cls(int(data["n"]), int(data["k"]), data["order"])
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad growth-order record: {exc}") from None


def make_rng(seed: int | Sequence[int]) -> np.random.Generator:
    """PCG64 generator seeded through SeedSequence hashing."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial; depends only on (master_seed, trial)."""
    return make_rng([int(master_seed), int(trial)])


def sample_ynp(n: int, k: int, p: float, rng: np.random.Generator) -> SimplicialComplexK:
    """Y_k(n, p): every k-face present independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p={p} outside [0, 1]")
    if n <= k:
        raise InvalidInputError(f"need n > k, got n={n}, k={k}")
    draws = rng.random(comb(n, k + 1))
    return SimplicialComplexK.from_ranks(n, k, np.flatnonzero(draws < p).tolist())


def sample_growth_order(n: int, k: int, rng: np.random.Generator) -> GrowthOrder:
    """Uniform random permutation of all k-faces (Fisher-Yates)."""
    if n <= k:
        raise InvalidInputError(f"need n > k, got n={n}, k={k}")
    return GrowthOrder(n, k, rng.permutation(comb(n, k + 1)))


def link(cx: SimplicialComplexK, v: int) -> SimplicialComplexK:
    """Link of vertex ``v``, relabelled onto ``[0, n - 1)``.

    Each present k-face through ``v`` loses ``v``; vertices above ``v`` shift
    down by one. The result is a (k-1)-complex with complete (k-2)-skeleton.
    """
    if not 0 <= v < cx.n:
        raise InvalidInputError(f"vertex {v} out of range for n={cx.n}")
    if cx.k < 2:
        raise InvalidInputError("link of a graph is not a complex with k >= 1")
    faces = all_faces(cx.n, cx.k + 1)[cx.ranks]
    through = faces[(faces == v).any(axis=1)]
    rest = through[through != v].reshape(len(through), cx.k)
    rest = rest - (rest > v)
    ranks = face_ranks_array(rest, cx.n - 1) if len(rest) else []
    return SimplicialComplexK.from_ranks(cx.n - 1, cx.k - 1, ranks)


def save_json(obj: SimplicialComplexK | GrowthOrder, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj.to_dict()) + "\n")


def load_complex(path: str | Path) -> SimplicialComplexK:
    return SimplicialComplexK.from_dict(json.loads(Path(path).read_text()))


def load_growth_order(path: str | Path) -> GrowthOrder:
    return GrowthOrder.from_dict(json.loads(Path(path).read_text()))
