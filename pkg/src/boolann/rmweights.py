"""Weight enumerators of the Reed-Muller code RM(d, n).

Codewords of RM(d, n) are the truth tables of functions of degree at most
``d``.  All counts here are exact Python integers.
"""

from __future__ import annotations

import io
import os
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .annihilator import monomial_basis
from .boolfn import AnfForm, truth_table_from_anf
from .gf2linalg import span_weight_counts

MAX_CENSUS_S = int(os.environ.get("BOOLANN_MAX_CENSUS_S", "26"))


class CensusTooLarge(RuntimeError):
    pass


class Unavailable(LookupError):
    """Required weight counts are not covered by the supplied data."""


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    d: int
    counts: dict[int, int]
    complete: bool = True
    # inclusive weight range whose counts are known when not complete
    covered: tuple[int, int] | None = field(default=None)

    @property
    def s(self) -> int:
        return monomial_basis(self.n, self.d).s

    def __getitem__(self, w: int) -> int:
        if not self.covers(w, w):
            raise Unavailable(f"A_{w} of RM({self.d},{self.n}) is not covered")
        return self.counts.get(w, 0)

    def covers(self, lo: int, hi: int) -> bool:
        if self.complete:
            return True
        if self.covered is None:
            return False
        return self.covered[0] <= lo and hi <= self.covered[1]

    def total(self) -> int:
        return sum(self.counts.values())

    def is_symmetric(self) -> bool:
        length = 1 << self.n
        return all(self.counts.get(length - w, 0) == c for w, c in self.counts.items())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# n={self.n} d={self.d} s={self.s} complete={str(self.complete).lower()}")
        if self.covered is not None:
            buf.write(f" covered={self.covered[0]}-{self.covered[1]}")
        buf.write("\nw,A_w\n")
        for w in sorted(self.counts):
            buf.write(f"{w},{self.counts[w]}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> WeightDistribution:
        header = {}
        counts = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, value = item.partition("=")
                    header[key] = value
                continue
            if line.replace(" ", "") == "w,A_w":
                continue
            w, a = line.split(",")
            counts[int(w)] = int(a)
        covered = None
        if "covered" in header:
            lo, hi = header["covered"].split("-")
            covered = (int(lo), int(hi))
        return cls(int(header["n"]), int(header["d"]), counts, header.get("complete") == "true", covered)


def min_weight_count(n: int, d: int) -> int:
    """Number of minimum-weight (``2^(n-d)``) codewords of RM(d, n)."""
    if not 0 <= d <= n:
        raise ValueError(f"degree d={d} outside [0, n={n}]")
    num, den = 1 << d, 1
    for i in range(n - d):
        num *= (1 << (n - i)) - 1
        den *= (1 << (n - d - i)) - 1
    count, rem = divmod(num, den)
    assert rem == 0
    return count


def monomial_tables(n: int, d: int) -> np.ndarray:
    """Packed truth tables of the basis monomials, one row each."""
    return np.array(
        [truth_table_from_anf(AnfForm.from_masks(n, [m])).words for m in monomial_basis(n, d).masks],
        dtype=np.uint64,
    )


def brute_force_distribution(n: int, d: int, max_s: int | None = None) -> WeightDistribution:
    """Full census over all ``2^s`` codewords."""
    cap = MAX_CENSUS_S if max_s is None else max_s
    s = monomial_basis(n, d).s
    if s > cap:
        raise CensusTooLarge(f"RM({d},{n}) has s={s} generators; census cap is s<={cap} (BOOLANN_MAX_CENSUS_S)")
    counts = span_weight_counts(monomial_tables(n, d), 1 << n)
    return WeightDistribution(n, d, dict(sorted(counts.items())), complete=True)


def allowed_low_weights(n: int, d: int) -> list[int]:
    """Weights ``2^(n-d+1) - 2^(n-d+1-mu)`` for ``mu = 1..n-d+1``.

    Every nonzero codeword lighter than twice the minimum weight has one of
    these weights.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    top = n - d + 1
    return [(1 << top) - (1 << (top - mu)) for mu in range(1, top + 1)]


def second_order_top_weight_count(n: int, low_counts: Mapping[int, int] | WeightDistribution) -> int:
    """``A_{2^(n-1)}`` of RM(2, n) from the counts of weights in ``[2^(n-2), 2^(n-1))``.

    Uses symmetry of the enumerator about ``2^(n-1)`` together with
    ``sum(A_w) = 2^s``; the two words of weight 0 and ``2^n`` are counted
    separately from the band.
    """
    lo, hi = 1 << (n - 2), 1 << (n - 1)
    if isinstance(low_counts, WeightDistribution):
        if low_counts.d != 2 or low_counts.n != n:
            raise ValueError("distribution is not RM(2, n)")
        if not low_counts.covers(lo, hi - 1):
            raise Unavailable(f"counts for weights {lo}..{hi - 1} not available")
        counts = low_counts.counts
    else:
        counts = low_counts
        if lo not in counts:
            raise Unavailable(f"count for minimum weight {lo} missing")
    band = sum(c for w, c in counts.items() if lo <= w < hi)
    s = monomial_basis(n, 2).s
    return (1 << s) - 2 - 2 * band
