"""Dense GF(2) linear algebra on bit-packed rows.

Column ``j`` of a row lives in word ``j // 64`` at bit ``j % 64``.  Padding
bits past the last column are always zero.  Elimination is done by numba
kernels on a private copy, so input matrices are never modified.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from numba import njit


def words_for(cols: int) -> int:
    return max(1, (cols + 63) >> 6)


@njit(cache=True)
def eliminate(a, cols, full):
    """Gaussian elimination in place; returns ``(rank, pivot_columns)``.

    Pivots are taken left to right.  With ``full`` set the result is the
    reduced row echelon form, otherwise only entries below each pivot are
    cleared.  Rows ``[0, rank)`` end up holding the pivot rows in order.
    """
    nrows, nwords = a.shape
    pivots = np.empty(min(nrows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if a[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nwords):
                t = a[p, k]
                a[p, k] = a[r, k]
                a[r, k] = t
        start = 0 if full else r + 1
        for i in range(start, nrows):
            if i != r and a[i, w] & bit:
                for k in range(w, nwords):
                    a[i, k] ^= a[r, k]
        pivots[r] = c
        r += 1
    return r, pivots[:r]


@njit(cache=True)
def _rank_words(lo, hi, nrows, cols):
    # rows split into two word columns; branchless updates keep random bit
    # patterns from stalling the pipeline
    one = np.uint64(1)
    zero = np.uint64(0)
    r = 0
    for c in range(cols):
        if r == nrows:
            break
        if c < 64:
            b = np.uint64(c)
            p = -1
            for i in range(r, nrows):
                if (lo[i] >> b) & one:
                    p = i
                    break
            if p < 0:
                continue
            t = lo[p]
            lo[p] = lo[r]
            lo[r] = t
            t = hi[p]
            hi[p] = hi[r]
            hi[r] = t
            pl = lo[r]
            ph = hi[r]
            for i in range(r + 1, nrows):
                m = zero - ((lo[i] >> b) & one)
                lo[i] ^= pl & m
                hi[i] ^= ph & m
        else:
            b = np.uint64(c - 64)
            p = -1
            for i in range(r, nrows):
                if (hi[i] >> b) & one:
                    p = i
                    break
            if p < 0:
                continue
            t = hi[p]
            hi[p] = hi[r]
            hi[r] = t
            ph = hi[r]
            for i in range(r + 1, nrows):
                hi[i] ^= ph & (zero - ((hi[i] >> b) & one))
        r += 1
    return r


@njit(cache=True)
def _rank_wide(a, cols):
    nrows, nwords = a.shape
    one = np.uint64(1)
    zero = np.uint64(0)
    r = 0
    for c in range(cols):
        if r == nrows:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if (a[i, w] >> b) & one:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(w, nwords):
                t = a[p, k]
                a[p, k] = a[r, k]
                a[r, k] = t
        pivot = a[r]
        for i in range(r + 1, nrows):
            m = zero - ((a[i, w] >> b) & one)
            row = a[i]
            for k in range(w, nwords):
                row[k] ^= pivot[k] & m
        r += 1
    return r


@njit(cache=True)
def rank_inplace(a, cols):
    """Rank of a packed matrix; ``a`` may be overwritten."""
    nrows, nwords = a.shape
    if nwords > 2:
        return _rank_wide(a, cols)
    lo = np.empty(nrows, dtype=np.uint64)
    hi = np.zeros(nrows, dtype=np.uint64)
    for i in range(nrows):
        lo[i] = a[i, 0]
    if nwords == 2:
        for i in range(nrows):
            hi[i] = a[i, 1]
    return _rank_words(lo, hi, nrows, cols)


@njit(cache=True)
def full_column_rank_or_rank(a, cols, slack):
    """Rank, trying the first ``cols + slack`` rows before the whole matrix.

    Worth it when rows arrive in random order and full column rank is the
    common outcome: the short prefix usually settles it.
    """
    nrows = a.shape[0]
    head = cols + slack
    if head < nrows:
        if rank_inplace(a[:head].copy(), cols) == cols:
            return cols
    return rank_inplace(a, cols)


@dataclass(frozen=True, eq=False)
class Gf2Matrix:
    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.uint64)
        if data.ndim != 2 or data.shape != (self.rows, words_for(self.cols)):
            raise ValueError(f"data shape {data.shape} does not match {self.rows}x{self.cols}")
        tail = self.cols & 63
        if tail and self.rows and (data[:, -1] >> np.uint64(tail)).any():
            raise ValueError("padding bits past the last column must be zero")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols, np.zeros((rows, words_for(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, size: int) -> Gf2Matrix:
        return cls.from_dense(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense) -> Gf2Matrix:
        dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
        rows, cols = dense.shape
        padded = np.zeros((rows, words_for(cols) * 64), dtype=np.uint8)
        padded[:, :cols] = dense
        data = np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)
        return cls(rows, cols, data.reshape(rows, words_for(cols)))

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> Gf2Matrix:
        return cls.from_dense(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        raw = np.unpackbits(self.data.astype("<u8").view(np.uint8), axis=1, bitorder="little")
        return raw[:, : self.cols]

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.data, other.data)

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """``M·v`` for a packed column vector ``v``; returns a 0/1 array of length ``rows``."""
        v = np.asarray(v, dtype=np.uint64).reshape(-1)
        return (np.bitwise_count(self.data & v).sum(axis=1) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class NullSpaceBasis:
    cols: int
    vectors: np.ndarray  # (dim, words) packed

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def dense(self) -> np.ndarray:
        return Gf2Matrix(self.dim, self.cols, self.vectors).to_dense()


def rank(m: Gf2Matrix) -> int:
    return int(rank_inplace(np.array(m.data, copy=True), m.cols))


def row_echelon(m: Gf2Matrix) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form (packed) and the pivot columns."""
    a = np.array(m.data, copy=True)
    r, pivots = eliminate(a, m.cols, True)
    return a[:r], pivots.copy()


def null_space(m: Gf2Matrix) -> NullSpaceBasis:
    """Basis of ``{v : M·v = 0}``, one vector per non-pivot column.

    The vector for free column ``f`` has bit ``f`` set and, for each pivot
    row whose entry in column ``f`` is 1, the bit of that row's pivot.
    """
    reduced, pivots = row_echelon(m)
    is_pivot = np.zeros(m.cols, dtype=bool)
    is_pivot[pivots] = True
    free = np.flatnonzero(~is_pivot)
    nwords = words_for(m.cols)
    vectors = np.zeros((free.size, nwords), dtype=np.uint64)
    for k, f in enumerate(free):
        vectors[k, f >> 6] |= np.uint64(1) << np.uint64(f & 63)
        if reduced.shape[0]:
            hit = ((reduced[:, f >> 6] >> np.uint64(f & 63)) & np.uint64(1)).astype(bool)
            for p in pivots[hit]:
                vectors[k, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
    return NullSpaceBasis(m.cols, vectors)


def _low_block(vectors: np.ndarray) -> np.ndarray:
    """All ``2^k`` XOR combinations of ``k`` packed vectors, combination ``c`` at row ``c``."""
    k, nwords = vectors.shape
    block = np.zeros((1 << k, nwords), dtype=np.uint64)
    for j in range(k):
        half = 1 << j
        np.bitwise_xor(block[:half], vectors[j], out=block[half : 2 * half])
    return block


def span_weight_counts(vectors: np.ndarray, nbits: int, block_words: int = 1 << 21) -> Counter:
    """Hamming-weight histogram of every vector in the GF(2) span (zero included).

    Each of the ``2^k`` coefficient vectors is visited once.  The low
    coefficients are tabulated in one numpy block; the high coefficients are
    walked in Gray-code order so each step XORs a single generator onto the
    running offset.
    """
    vectors = np.asarray(vectors, dtype=np.uint64)
    if vectors.ndim == 1:
        vectors = vectors.reshape(1, -1)
    k, nwords = vectors.shape
    low = 0
    while low < k and (2 << low) * nwords <= block_words:
        low += 1
    block = _low_block(vectors[:low])
    high = vectors[low:]
    hist = np.zeros(nbits + 1, dtype=np.int64)
    offset = np.zeros(nwords, dtype=np.uint64)
    scratch = np.empty_like(block)
    for step in range(1 << (k - low)):
        if step:
            offset ^= high[(step & -step).bit_length() - 1]
        np.bitwise_xor(block, offset, out=scratch)
        weights = np.bitwise_count(scratch).sum(axis=1, dtype=np.int64)
        hist += np.bincount(weights, minlength=nbits + 1)
    return Counter({w: int(c) for w, c in enumerate(hist) if c})
