"""Boolean functions as bit-packed truth tables and ANF coefficient vectors.

Bit ``x`` of a table is ``f(x)``, where bit ``i`` of the argument ``x`` is the
variable ``x_{i+1}``.  ANF coefficient vectors use the same layout: bit ``m``
is the coefficient of the monomial ``prod(x_{i+1} for i in m)``.  Tables are
stored little-endian in ``uint64`` words; when ``n < 6`` only the low ``2^n``
bits of the single word are used and the rest stay zero.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from . import _rng

MAX_VARS = int(os.environ.get("BOOLANN_MAX_VARS", "26"))

# positions whose bit i is clear, for the in-word butterfly steps
_LOW_MASKS = [
    np.uint64(0x5555555555555555),
    np.uint64(0x3333333333333333),
    np.uint64(0x0F0F0F0F0F0F0F0F),
    np.uint64(0x00FF00FF00FF00FF),
    np.uint64(0x0000FFFF0000FFFF),
    np.uint64(0x00000000FFFFFFFF),
]


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"variable count n={n} outside [1, {MAX_VARS}] (set BOOLANN_MAX_VARS to raise the cap)")


def num_words(n: int) -> int:
    return max(1, (1 << n) >> 6)


def _tail_mask(n: int) -> np.uint64:
    if n >= 6:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << (1 << n)) - 1)


def _freeze(words: np.ndarray) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    words.flags.writeable = False
    return words


def _words_from_int(value: int, n: int) -> np.ndarray:
    nbytes = num_words(n) * 8
    return np.frombuffer(value.to_bytes(nbytes, "little"), dtype="<u8").astype(np.uint64)


def _int_from_words(words: np.ndarray) -> int:
    return int.from_bytes(words.astype("<u8").tobytes(), "little")


class _Packed:
    """Shared storage and bit access for truth tables and ANF vectors."""

    n: int
    words: np.ndarray

    def __init__(self, n: int, words: np.ndarray):
        _check_n(n)
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if words.shape[0] != num_words(n):
            raise ValueError(f"expected {num_words(n)} words for n={n}, got {words.shape[0]}")
        if n < 6 and words[0] & ~_tail_mask(n):
            raise ValueError("padding bits beyond 2^n must be zero")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "words", _freeze(words))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.words.tobytes()))

    @property
    def size(self) -> int:
        return 1 << self.n

    def bit(self, index: int) -> int:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} outside [0, {self.size})")
        return int(self.words[index >> 6] >> np.uint64(index & 63)) & 1

    def bits(self) -> np.ndarray:
        """Unpacked 0/1 array of length ``2^n``."""
        raw = np.unpackbits(self.words.astype("<u8").view(np.uint8), bitorder="little")
        return raw[: self.size]

    def support(self) -> np.ndarray:
        """Indices of the set bits, ascending."""
        return np.flatnonzero(self.bits())

    def popcount(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def to_int(self) -> int:
        return _int_from_words(self.words)

    def is_zero(self) -> bool:
        return not self.words.any()


class BooleanFunction(_Packed):
    """Truth table of an ``n``-variable Boolean function."""

    def __repr__(self):
        return f"BooleanFunction({self.to_text()!r})"

    @classmethod
    def from_bits(cls, bits, n: int | None = None) -> BooleanFunction:
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        if n is None:
            n = int(bits.shape[0]).bit_length() - 1
        if bits.shape[0] != 1 << n:
            raise ValueError(f"truth table length {bits.shape[0]} is not 2^{n}")
        padded = np.zeros(num_words(n) * 64, dtype=np.uint8)
        padded[: bits.shape[0]] = bits & 1
        words = np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)
        return cls(n, words)

    @classmethod
    def from_int(cls, n: int, value: int) -> BooleanFunction:
        _check_n(n)
        if not 0 <= value < 1 << (1 << n):
            raise ValueError(f"table value does not fit in 2^{n} bits")
        return cls(n, _words_from_int(value, n))

    @classmethod
    def from_support(cls, n: int, support) -> BooleanFunction:
        bits = np.zeros(1 << n, dtype=np.uint8)
        bits[np.asarray(support, dtype=np.int64)] = 1
        return cls.from_bits(bits, n)

    @classmethod
    def constant(cls, n: int, value: int) -> BooleanFunction:
        _check_n(n)
        words = np.zeros(num_words(n), dtype=np.uint64)
        if value:
            words[:] = _tail_mask(n)
        return cls(n, words)

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    @property
    def weight(self) -> int:
        return self.popcount()

    def is_balanced(self) -> bool:
        return self.weight == 1 << (self.n - 1)

    def complement(self) -> BooleanFunction:
        return BooleanFunction(self.n, ~self.words & _tail_mask(self.n))

    def __and__(self, other: BooleanFunction) -> BooleanFunction:
        _same_n(self, other)
        return BooleanFunction(self.n, self.words & other.words)

    def __xor__(self, other: BooleanFunction) -> BooleanFunction:
        _same_n(self, other)
        return BooleanFunction(self.n, self.words ^ other.words)

    def to_text(self) -> str:
        return format_truth_table(self)


class AnfForm(_Packed):
    """ANF coefficient vector; bit ``m`` is the coefficient of monomial ``m``."""

    def __repr__(self):
        return f"AnfForm(n={self.n}, {format_anf(self)!r})"

    @classmethod
    def from_masks(cls, n: int, masks) -> AnfForm:
        bits = np.zeros(1 << n, dtype=np.uint8)
        for m in masks:
            if not 0 <= m < 1 << n:
                raise ValueError(f"monomial mask {m} outside n={n}")
            bits[m] ^= 1
        return cls(n, BooleanFunction.from_bits(bits, n).words)

    @classmethod
    def zero(cls, n: int) -> AnfForm:
        _check_n(n)
        return cls(n, np.zeros(num_words(n), dtype=np.uint64))

    def masks(self) -> list[int]:
        """Set monomial masks in graded order (degree, then numeric value)."""
        return sorted((int(m) for m in self.support()), key=lambda m: (bin(m).count("1"), m))

    @property
    def degree(self) -> int:
        """Algebraic degree; -1 for the zero function."""
        found = self.support()
        if found.size == 0:
            return -1
        return int(np.bitwise_count(found.astype(np.uint64)).max())

    def to_text(self) -> str:
        return format_anf(self)


def _same_n(a: _Packed, b: _Packed) -> None:
    if a.n != b.n:
        raise ValueError(f"variable counts differ: {a.n} vs {b.n}")


def evaluate(f: BooleanFunction, x: int) -> int:
    return f.bit(x)


def mobius(words: np.ndarray, n: int) -> np.ndarray:
    """Binary Möbius transform of a packed table (its own inverse over GF(2))."""
    out = np.array(words, dtype=np.uint64, copy=True)
    for i in range(min(n, 6)):
        shift = np.uint64(1 << i)
        out ^= (out & _LOW_MASKS[i]) << shift
    for i in range(6, n):
        block = 1 << (i - 6)
        view = out.reshape(-1, 2, block)
        view[:, 1, :] ^= view[:, 0, :]
    return out


def anf_from_truth_table(f: BooleanFunction) -> AnfForm:
    return AnfForm(f.n, mobius(f.words, f.n))


def truth_table_from_anf(g: AnfForm) -> BooleanFunction:
    return BooleanFunction(g.n, mobius(g.words, g.n))


def random_of_weight(n: int, w: int, seed: int) -> BooleanFunction:
    """Uniformly random function with exactly ``w`` ones.

    The support is the first ``w`` positions of a partial Fisher-Yates
    shuffle of ``range(2^n)`` driven by a SplitMix64 stream keyed by ``seed``.
    """
    _check_n(n)
    if not 0 <= w <= 1 << n:
        raise ValueError(f"weight {w} outside [0, 2^{n}]")
    return BooleanFunction.from_support(n, _rng.random_subset(1 << n, w, seed))


def random_balanced(n: int, seed: int) -> BooleanFunction:
    return random_of_weight(n, 1 << (n - 1), seed)


# ---------------------------------------------------------------- text formats

_TT_RE = re.compile(r"^\s*n\s*:\s*(\d+)\s*;\s*tt\s*:\s*(?:0x)?([0-9a-fA-F]+)\s*$")
_VAR_RE = re.compile(r"^x(\d+)$")


def format_truth_table(f: BooleanFunction) -> str:
    digits = max(1, (1 << f.n) // 4)
    return f"n:{f.n};tt:{f.to_int():0{digits}x}"


def parse_truth_table(text: str, n: int | None = None) -> BooleanFunction:
    """Parse ``n:<int>;tt:<hex>``, or a bare hex string when ``n`` is given."""
    m = _TT_RE.match(text)
    if m:
        n_text, hex_text = int(m.group(1)), m.group(2)
        if n is not None and n != n_text:
            raise ValueError(f"n={n} disagrees with table header n={n_text}")
        n = n_text
    else:
        if n is None:
            raise ValueError(f"cannot parse truth table {text!r}; expected n:<int>;tt:<hex>")
        hex_text = text.strip().removeprefix("0x")
    try:
        value = int(hex_text, 16)
    except ValueError:
        raise ValueError(f"invalid hex digits in {text!r}") from None
    return BooleanFunction.from_int(n, value)


def _monomial_text(mask: int) -> str:
    if mask == 0:
        return "1"
    return "*".join(f"x{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


def format_anf(g: AnfForm) -> str:
    masks = g.masks()
    if not masks:
        return "0"
    return " + ".join(_monomial_text(m) for m in masks)


def parse_anf(text: str, n: int) -> AnfForm:
    """Parse a monomial sum such as ``1 + x1 + x2*x3``; repeated terms cancel."""
    masks = []
    for term in text.split("+"):
        term = term.strip()
        if term == "1":
            masks.append(0)
            continue
        if term == "0":
            continue
        if not term:
            raise ValueError(f"empty term in ANF {text!r}")
        mask = 0
        for factor in term.split("*"):
            var = _VAR_RE.match(factor.strip())
            if not var:
                raise ValueError(f"bad factor {factor!r} in ANF {text!r}")
            i = int(var.group(1))
            if not 1 <= i <= n:
                raise ValueError(f"variable x{i} outside x1..x{n}")
            mask |= 1 << (i - 1)
        masks.append(mask)
    return AnfForm.from_masks(n, masks)
