"""Dense bit-packed linear algebra over GF(2).

Storage is row-major ``uint64`` words (bit ``j`` of a row lives in word
``j // 64`` at position ``j % 64``). Elimination converts rows to Python ints,
whose XOR runs word-parallel over arbitrarily long rows.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

import numpy as np

from rcsim.errors import InvalidInputError

BitVector = Union[int, Sequence[int], np.ndarray]

WORD = 64


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def as_int(v: BitVector, length: int) -> int:
    """Convert a bit-vector (int mask or 0/1 sequence) to an int mask."""
    if isinstance(v, (int, np.integer)):
        v = int(v)
        if v < 0 or v.bit_length() > length:
            raise InvalidInputError(f"bit-vector does not fit in {length} bits")
        return v
    arr = np.asarray(v)
    if arr.ndim != 1 or len(arr) != length:
        raise InvalidInputError(f"bit-vector length {arr.size} != {length}")
    packed = np.packbits(arr.astype(bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


class BitMatrix:
    """Immutable packed GF(2) matrix. Build with the ``from_*`` constructors."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (rows, _nwords(cols)):
            raise InvalidInputError(
                f"storage shape {words.shape} inconsistent with {rows}x{cols}"
            )
        tail = cols % WORD
        if tail and rows and np.any(words[:, -1] >> np.uint64(tail)):
            raise InvalidInputError("padding bits must be zero")
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.ascontiguousarray(dense, dtype=bool)
        if dense.ndim != 2:
            raise InvalidInputError("dense matrix must be 2-D")
        rows, cols = dense.shape
        pad = _nwords(cols) * WORD - cols
        padded = np.pad(dense, ((0, 0), (0, pad)))
        packed = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder="little"))
        words = packed.view("<u8").astype(np.uint64) if cols else np.zeros((rows, 0), np.uint64)
        return cls(rows, cols, words.reshape(rows, _nwords(cols)))

    @classmethod
    def from_entries(cls, rows: int, cols: int, row_idx, col_idx) -> BitMatrix:
        """Matrix with ones at (row_idx[t], col_idx[t]); repeated entries XOR."""
        row_idx = np.asarray(row_idx, dtype=np.int64)
        col_idx = np.asarray(col_idx, dtype=np.int64)
        words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        if len(row_idx):
            if row_idx.min() < 0 or row_idx.max() >= rows or col_idx.min() < 0 or col_idx.max() >= cols:
                raise InvalidInputError("entry index out of range")
            bits = np.left_shift(np.uint64(1), (col_idx % WORD).astype(np.uint64))
            np.bitwise_xor.at(words, (row_idx, col_idx // WORD), bits)
        return cls(rows, cols, words)

    @classmethod
    def from_row_ints(cls, rows: Iterable[int], cols: int) -> BitMatrix:
        rows = list(rows)
        nbytes = _nwords(cols) * 8
        buf = b"".join(as_int(r, cols).to_bytes(nbytes, "little") for r in rows)
        words = np.frombuffer(buf, dtype="<u8").astype(np.uint64).reshape(len(rows), _nwords(cols))
        return cls(len(rows), cols, words)

    def row_int(self, i: int) -> int:
        return int.from_bytes(self.words[i].astype("<u8").tobytes(), "little")

    def row_ints(self) -> list[int]:
        step = self.words.shape[1] * 8
        if step == 0:
            return [0] * self.rows
        raw = self.words.astype("<u8").tobytes()
        return [int.from_bytes(raw[i:i + step], "little") for i in range(0, len(raw), step)]

    def to_dense(self) -> np.ndarray:
        if self.cols == 0:
            return np.zeros((self.rows, 0), dtype=bool)
        raw = self.words.astype("<u8").view(np.uint8).reshape(self.rows, -1)
        bits = np.unpackbits(raw, axis=1, bitorder="little")
        return bits[:, : self.cols].astype(bool)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(
            self.words, other.words
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    """Row echelon basis keyed by pivot (lowest set bit)."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            b = _lowest_bit(r)
            q = pivots.get(b)
            if q is None:
                pivots[b] = r
                break
            r ^= q
    return pivots


def rank(m: BitMatrix) -> int:
    """Rank over GF(2). The matrix is not modified."""
    return len(_echelon(m.row_ints()))


def in_row_space(m: BitMatrix, v: BitVector) -> bool:
    """Whether ``v`` is a GF(2) combination of the rows of ``m``."""
    r = as_int(v, m.cols)
    pivots = _echelon(m.row_ints())
    while r:
        q = pivots.get(_lowest_bit(r))
        if q is None:
            return False
        r ^= q
    return True


class ColumnBasis:
    """Incrementally maintained, fully reduced basis of a column space.

    Every stored column has a 1 at its own pivot and 0 at every other pivot,
    so reducing a new column costs one XOR per pivot bit it carries.
    """

    __slots__ = ("ambient_dim", "_pivots")

    def __init__(self, ambient_dim: int):
        if ambient_dim < 0:
            raise InvalidInputError("ambient_dim must be >= 0")
        self.ambient_dim = ambient_dim
        self._pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> list[tuple[int, int]]:
        return sorted(self._pivots.items())

    def reduce(self, col: BitVector) -> int:
        c = as_int(col, self.ambient_dim)
        out = c
        while c:
            b = _lowest_bit(c)
            c ^= 1 << b
            q = self._pivots.get(b)
            if q is not None:
                out ^= q
        return out

    def insert(self, col: BitVector) -> bool:
        """Add ``col``; return True iff the rank increased."""
        r = self.reduce(col)
        if not r:
            return False
        b = _lowest_bit(r)
        pivots = self._pivots
        for key, q in pivots.items():
            if q >> b & 1:
                pivots[key] = q ^ r
        pivots[b] = r
        return True

    def contains(self, col: BitVector) -> bool:
        return self.reduce(col) == 0

    def copy(self) -> ColumnBasis:
        other = ColumnBasis(self.ambient_dim)
        other._pivots = dict(self._pivots)
        return other


def insert_column(basis: ColumnBasis, col: BitVector) -> tuple[ColumnBasis, bool]:
    """Functional form of :meth:`ColumnBasis.insert`; updates ``basis`` in place."""
    increased = basis.insert(col)
    return basis, increased
