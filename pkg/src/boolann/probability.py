"""Probability that a random balanced function admits a degree-d annihilator.

Values span thousands of decimal orders of magnitude, so everything is held
as a base-2 logarithm.  Where the operands are small enough an exact
``Fraction`` rides along and is used for rendering.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import comb

import numpy as np

from .annihilator import classify_degree
from .rmweights import Unavailable, WeightDistribution, min_weight_count, second_order_top_weight_count

EXACT_MAX_N = 12
DEFAULT_DIGITS = 3
ODD_HALF_FLOOR = 0.7

# (n, d) pairs tabulated for d < floor(n/2)
GRID_PAIRS = (
    (6, 2), (7, 2), (8, 2), (8, 3), (9, 2), (9, 3), (10, 2), (10, 3), (10, 4),
    (11, 2), (11, 3), (11, 4), (12, 2), (12, 3), (12, 4), (12, 5),
    (13, 2), (13, 3), (13, 4), (13, 5), (14, 2), (14, 3), (14, 4), (14, 5), (14, 6),
    (18, 5), (18, 6), (18, 7), (18, 8), (19, 6), (19, 7), (19, 8),
    (20, 7), (20, 8), (20, 9), (21, 8), (21, 9), (22, 9), (22, 10), (23, 10),
)

_PREC = 60
_NUM_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+)\s*[eE]\s*([+-]?\d+)\s*$")


def _log10_2() -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        return Decimal(2).log10()


def _fraction_log2(value: Fraction) -> float:
    if value <= 0:
        return -math.inf
    with localcontext() as ctx:
        ctx.prec = _PREC
        ratio = Decimal(value.numerator) / Decimal(value.denominator)
        return float(ratio.log10() / _log10_2())


@functools.total_ordering
@dataclass(frozen=True)
class LogProbability:
    """A nonnegative quantity stored as ``log2``; ``-inf`` encodes zero."""

    log2: float
    exact: Fraction | None = None

    @classmethod
    def zero(cls) -> LogProbability:
        return cls(-math.inf, Fraction(0))

    @classmethod
    def one(cls) -> LogProbability:
        return cls(0.0, Fraction(1))

    @classmethod
    def from_fraction(cls, value: Fraction) -> LogProbability:
        value = Fraction(value)
        if value < 0:
            raise ValueError("probabilities are nonnegative")
        return cls(_fraction_log2(value), value)

    @property
    def is_zero(self) -> bool:
        return self.log2 == -math.inf

    @property
    def value(self) -> float:
        """As a float; underflows to 0.0 below about 1e-308."""
        if self.exact is not None:
            return float(self.exact)
        return 2.0**self.log2 if self.log2 > -1075 else 0.0

    def __add__(self, other: LogProbability) -> LogProbability:
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        exact = self.exact + other.exact if self.exact is not None and other.exact is not None else None
        if exact is not None:
            return LogProbability.from_fraction(exact)
        hi, lo = max(self.log2, other.log2), min(self.log2, other.log2)
        return LogProbability(hi + math.log2(1.0 + 2.0 ** (lo - hi)))

    def __mul__(self, other: LogProbability) -> LogProbability:
        if self.is_zero or other.is_zero:
            return LogProbability.zero()
        if self.exact is not None and other.exact is not None:
            return LogProbability.from_fraction(self.exact * other.exact)
        return LogProbability(self.log2 + other.log2)

    def scaled(self, count: int) -> LogProbability:
        """Multiply by a nonnegative (big) integer."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0 or self.is_zero:
            return LogProbability.zero()
        if self.exact is not None:
            return LogProbability.from_fraction(self.exact * count)
        return LogProbability(self.log2 + _int_log2(count))

    def __eq__(self, other):
        if not isinstance(other, LogProbability):
            return NotImplemented
        return self.log2 == other.log2

    def __lt__(self, other: LogProbability) -> bool:
        return self.log2 < other.log2

    def __hash__(self):
        return hash(self.log2)

    def mantissa_exponent(self, digits: int = DEFAULT_DIGITS) -> tuple[Decimal, int]:
        """``(m, k)`` with ``value ~= m * 10**k`` and ``1 <= m < 10`` rounded to ``digits`` significant digits."""
        if self.is_zero:
            return Decimal(0), 0
        with localcontext() as ctx:
            ctx.prec = _PREC
            if self.exact is not None:
                log10 = (Decimal(self.exact.numerator) / Decimal(self.exact.denominator)).log10()
            else:
                log10 = Decimal(repr(self.log2)) * _log10_2()
            k = int(log10.to_integral_value(rounding="ROUND_FLOOR"))
            m = Decimal(10) ** (log10 - k)
            m = m.quantize(Decimal(1).scaleb(1 - digits), rounding=ROUND_HALF_EVEN)
            if m >= 10:
                m = (m / 10).quantize(Decimal(1).scaleb(1 - digits), rounding=ROUND_HALF_EVEN)
                k += 1
        return m, k

    def render(self, digits: int = DEFAULT_DIGITS) -> str:
        if self.is_zero:
            return "0"
        m, k = self.mantissa_exponent(digits)
        return f"{m}E{k}"

    def __str__(self):
        return self.render()

    @classmethod
    def parse(cls, text: str) -> LogProbability:
        """Inverse of ``render``: ``'3.20E-3'`` or ``'0'``."""
        if text.strip() in ("0", "0.0"):
            return cls.zero()
        match = _NUM_RE.match(text)
        if not match:
            raise ValueError(f"cannot parse {text!r} as mEk")
        with localcontext() as ctx:
            ctx.prec = _PREC
            log10 = Decimal(match.group(1)).log10() + int(match.group(2))
            return cls(float(log10 / _log10_2()))


def _int_log2(value: int) -> float:
    # math.log2 is correctly handled for arbitrarily large ints
    return math.log2(value)


def _check_weight(n: int, w: int) -> None:
    if not 0 <= w <= 1 << (n - 1):
        raise ValueError(f"weight {w} outside [0, 2^{n - 1}]")


def binomial_ratio_log2(n: int, w: int, exact: bool = False) -> LogProbability:
    """``C(2^n - w, 2^(n-1) - w) / C(2^n, 2^(n-1))``.

    This is the fraction of balanced functions whose zero set contains a
    given set of ``w`` points.  The log-space path sums
    ``log2((2^(n-1) - i) / (2^n - i))`` for ``i < w``.
    """
    _check_weight(n, w)
    if exact:
        if n > EXACT_MAX_N:
            raise ValueError(f"exact evaluation limited to n <= {EXACT_MAX_N}")
        full, half = 1 << n, 1 << (n - 1)
        return LogProbability.from_fraction(Fraction(comb(full - w, half - w), comb(full, half)))
    if w == 0:
        return LogProbability(0.0)
    i = np.arange(w, dtype=np.float64)
    terms = np.log2((float(1 << (n - 1)) - i) / (float(1 << n) - i))
    return LogProbability(math.fsum(terms))


def prob_weight(n: int, d: int, w: int, count: int, exact: bool = False) -> LogProbability:
    """Probability mass contributed by the ``count`` degree-``d`` functions of weight ``w``."""
    _check_weight(n, w)
    if count < 0:
        raise ValueError("weight count must be nonnegative")
    if count == 0:
        return LogProbability.zero()
    return binomial_ratio_log2(n, w, exact).scaled(count)


def alpha1(n: int, d: int, exact: bool = False) -> LogProbability:
    """Contribution of the minimum-weight annihilator candidates."""
    return prob_weight(n, d, 1 << (n - d), min_weight_count(n, d), exact)


def _band(n: int, d: int, dist: WeightDistribution, lo: int, hi: int, exact: bool) -> LogProbability:
    """Sum of P(w) over ``lo <= w <= hi`` (clipped to ``2^(n-1)``)."""
    if dist.n != n or dist.d != d:
        raise ValueError(f"distribution is for RM({dist.d},{dist.n}), not RM({d},{n})")
    hi = min(hi, 1 << (n - 1))
    total = LogProbability.zero()
    if lo > hi:
        return total
    if not dist.covers(lo, hi):
        raise Unavailable(f"weights {lo}..{hi} of RM({d},{n}) not covered by the distribution")
    for w in range(lo, hi + 1):
        count = dist.counts.get(w, 0)
        if count:
            total = total + prob_weight(n, d, w, count, exact)
    return total


def alpha2(n: int, d: int, dist: WeightDistribution, exact: bool = False) -> LogProbability:
    """Weights strictly between the minimum ``2^(n-d)`` and twice it."""
    return _band(n, d, dist, (1 << (n - d)) + 1, (1 << (n - d + 1)) - 1, exact)


def alpha3(n: int, d: int, dist: WeightDistribution, exact: bool = False) -> LogProbability:
    """Weights from ``2^(n-d+1)`` up to ``2^(n-1)``."""
    if d == 2 and not dist.complete:
        return alpha3_d2(n, dist, exact)
    return _band(n, d, dist, 1 << (n - d + 1), 1 << (n - 1), exact)


def alpha3_d2(n: int, source: WeightDistribution | int | None, exact: bool = False) -> LogProbability:
    """``A_{2^(n-1)} / C(2^n, 2^(n-1))`` for ``d = 2``.

    ``source`` is the count itself, a complete RM(2, n) census, or a partial
    one covering weights ``[2^(n-2), 2^(n-1))``.
    """
    top = 1 << (n - 1)
    if source is None:
        raise Unavailable(f"A_{top} of RM(2,{n}) is required")
    if isinstance(source, WeightDistribution):
        if source.covers(top, top):
            count = source.counts.get(top, 0)
        else:
            count = second_order_top_weight_count(n, source)
    else:
        count = int(source)
    return prob_weight(n, 2, top, count, exact)


def upper_bound8(n: int, d: int) -> LogProbability:
    """Closed-form bound ``2^(n(d+1) - d^2 - 2^(n-d))`` on the minimum-weight term."""
    if d < 1:
        raise ValueError("bound defined for d >= 1")
    return LogProbability(float(n * (d + 1) - d * d - (1 << (n - d))))


@dataclass(frozen=True)
class ProbabilityBreakdown:
    n: int
    d: int
    case: str
    alpha1: LogProbability | None
    alpha2: LogProbability | None = None
    alpha3: LogProbability | None = None
    p_an: LogProbability | None = None
    bound8: LogProbability | None = None
    approximate: bool = False
    note: str = ""

    CSV_COLUMNS = ("n", "d", "alpha1", "alpha2", "alpha3", "p_an", "bound8", "case")
    LOG2_COLUMNS = ("alpha1_log2", "alpha2_log2", "alpha3_log2", "p_an_log2", "bound8_log2")

    def _parts(self):
        return (self.alpha1, self.alpha2, self.alpha3, self.p_an, self.bound8)

    def csv_row(self, digits: int = DEFAULT_DIGITS, with_log2: bool = True) -> list[str]:
        row = [str(self.n), str(self.d)]
        row += ["" if p is None else p.render(digits) for p in self._parts()]
        row.append(self.case)
        if with_log2:
            row += ["" if p is None else repr(p.log2) for p in self._parts()]
        return row

    def human(self, digits: int = DEFAULT_DIGITS) -> str:
        def show(p):
            return "-" if p is None else p.render(digits)

        text = (
            f"n={self.n} d={self.d} case={self.case} alpha1={show(self.alpha1)} alpha2={show(self.alpha2)} "
            f"alpha3={show(self.alpha3)} p_an={show(self.p_an)}{' (approx.)' if self.approximate else ''} "
            f"bound8={show(self.bound8)}"
        )
        return text + (f"  # {self.note}" if self.note else "")


def p_an(n: int, d: int, dist: WeightDistribution | None = None, exact: bool = False) -> ProbabilityBreakdown:
    """Existence probability of a degree-``d`` annihilator, split by weight band.

    Below half degree the minimum-weight term alone is returned as an
    approximation unless a weight distribution is supplied, in which case the
    full sum is evaluated.  For even ``n`` with ``d = n/2``, and for any
    ``d > n/2``, the system has fewer equations than unknowns and the
    probability is exactly 1.  For odd ``n`` with ``d = floor(n/2)`` no
    value is computed.
    """
    case = classify_degree(n, d)
    a1 = alpha1(n, d, exact)
    bound = upper_bound8(n, d) if d >= 1 else None
    if case == "below-half":
        if dist is None:
            return ProbabilityBreakdown(n, d, case, a1, p_an=a1, bound8=bound, approximate=True,
                                        note="minimum-weight term only")
        a2 = alpha2(n, d, dist, exact)
        a3 = alpha3(n, d, dist, exact)
        return ProbabilityBreakdown(n, d, case, a1, a2, a3, a1 + a2 + a3, bound)
    if case == "even-half":
        return ProbabilityBreakdown(n, d, case, a1, p_an=LogProbability.one(), bound8=bound,
                                    note="fewer equations than unknowns")
    if case == "above-half":
        return ProbabilityBreakdown(n, d, case, a1, p_an=LogProbability.one(), bound8=bound,
                                    note="fewer equations than unknowns")
    return ProbabilityBreakdown(n, d, case, a1, bound8=bound,
                                note=f"no closed form; experiments suggest p > {ODD_HALF_FLOOR}")
