"""Annihilators of Boolean functions.

``g`` annihilates ``f`` when ``g != 0`` and ``f·g = 0``, i.e. ``g`` vanishes on
every point of the support of ``f``.  Writing ``g`` over the monomials of
degree at most ``d`` turns this into one homogeneous GF(2) equation per
support point; annihilators are the nonzero vectors of its null space.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _rng
from .boolfn import AnfForm, BooleanFunction, format_anf, truth_table_from_anf
from .gf2linalg import Gf2Matrix, null_space, span_weight_counts, words_for

log = logging.getLogger(__name__)

MAX_WEIGHT_ENUM = 20
ALG2_RETRIES = 3


class DomainError(ValueError):
    """Input is well-formed but outside the operation's domain."""


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    d: int
    masks: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.masks)

    def case(self) -> str:
        return classify_degree(self.n, self.d)


def classify_degree(n: int, d: int) -> str:
    """Which of the four (n, d) regimes applies: below-half, odd-half, even-half, above-half."""
    half = n // 2
    if d < half:
        return "below-half"
    if d == half:
        return "odd-half" if n % 2 else "even-half"
    return "above-half"


def basis_size(n: int, d: int) -> int:
    return sum(comb(n, i) for i in range(min(d, n) + 1))


@functools.lru_cache(maxsize=64)
def monomial_basis(n: int, d: int) -> MonomialBasis:
    """Monomials of degree ``<= d`` ordered by (degree, mask)."""
    if not 0 <= d <= n:
        raise ValueError(f"degree d={d} outside [0, n={n}]")
    masks = sorted((m for m in range(1 << n) if m.bit_count() <= d), key=lambda m: (m.bit_count(), m))
    return MonomialBasis(n, d, tuple(masks))


@functools.lru_cache(maxsize=16)
def evaluation_rows(n: int, d: int) -> np.ndarray:
    """Packed row for every argument ``x``: bit ``j`` set iff basis monomial ``j`` divides ``x``."""
    masks = np.array(monomial_basis(n, d).masks, dtype=np.int64)
    xs = np.arange(1 << n, dtype=np.int64)
    s = masks.size
    nwords = words_for(s)
    rows = np.zeros((1 << n, nwords), dtype=np.uint64)
    weights = np.left_shift(np.uint64(1), np.arange(64, dtype=np.uint64))
    for w in range(nwords):
        chunk = masks[64 * w : 64 * (w + 1)]
        hits = (xs[:, None] & chunk[None, :]) == chunk[None, :]
        rows[:, w] = np.bitwise_or.reduce(np.where(hits, weights[: chunk.size], np.uint64(0)), axis=1)
    rows.flags.writeable = False
    return rows


def build_system(f: BooleanFunction, d: int) -> Gf2Matrix:
    """One equation ``g(x) = 0`` per support point ``x`` of ``f``, ascending in ``x``."""
    basis = monomial_basis(f.n, d)
    rows = evaluation_rows(f.n, d)[f.support()]
    return Gf2Matrix(rows.shape[0], basis.s, rows)


def vector_to_anf(basis: MonomialBasis, vector: np.ndarray) -> AnfForm:
    bits = Gf2Matrix(1, basis.s, np.asarray(vector).reshape(1, -1)).to_dense()[0]
    return AnfForm.from_masks(basis.n, [basis.masks[j] for j in np.flatnonzero(bits)])


@dataclass(frozen=True)
class SolveReport:
    n: int
    d: int
    s: int
    num_equations: int
    rank: int
    annihilators: tuple[AnfForm, ...]
    verified: tuple[bool, ...]
    method: str = "algorithm1"
    fallback: bool = False
    attempts: int = 1
    # packed coefficient vectors over the monomial basis, parallel to ``annihilators``
    vectors: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def nullity(self) -> int:
        return len(self.annihilators)

    @property
    def found(self) -> bool:
        return bool(self.annihilators)

    def to_text(self, f: BooleanFunction | None = None) -> str:
        lines = [
            f"n={self.n} d={self.d} s={self.s} N={self.num_equations} rank={self.rank} nullity={self.nullity}"
            + (f" method={self.method}" + (" fallback=yes" if self.fallback else "")),
        ]
        if not self.annihilators:
            lines.append("no annihilator")
        for g, ok in zip(self.annihilators, self.verified):
            wt = truth_table_from_anf(g).weight
            lines.append(f"annihilator weight={wt} verified={'yes' if ok else 'no'} anf={format_anf(g)}")
        return "\n".join(lines)


def verify_annihilator(f: BooleanFunction, g: AnfForm) -> bool:
    """True iff ``g`` is nonzero and ``f·g`` vanishes identically."""
    if f.n != g.n:
        raise ValueError(f"variable counts differ: f has {f.n}, g has {g.n}")
    if g.is_zero():
        return False
    return not (truth_table_from_anf(g).words & f.words).any()


def _report(f, basis, num_equations, rank_, vectors, **extra) -> SolveReport:
    anfs = tuple(vector_to_anf(basis, v) for v in vectors)
    checks = tuple(verify_annihilator(f, g) for g in anfs)
    return SolveReport(
        f.n, basis.d, basis.s, num_equations, rank_, anfs, checks, vectors=np.asarray(vectors), **extra
    )


def find_annihilators(f: BooleanFunction, d: int) -> SolveReport:
    """Exhaustive solve: null space of the full support system."""
    basis = monomial_basis(f.n, d)
    system = build_system(f, d)
    kernel = null_space(system)
    report = _report(f, basis, system.rows, basis.s - kernel.dim, kernel.vectors)
    if not all(report.verified):
        raise AssertionError("null-space vector failed pointwise verification")
    return report


def _pack_int(value: int, nwords: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(nwords * 8, "little"), dtype="<u8").astype(np.uint64)


def find_annihilators_incremental(f: BooleanFunction, d: int, seed: int = 0) -> SolveReport:
    """Low-weight substitution followed by a random square subsystem.

    Support points of weight ``1..d`` each pin the coefficient of their own
    monomial to a sum of lower-weight coefficients, which removes it as an
    unknown.  Random further support points are then substituted until there
    are as many nonzero equations as remaining unknowns.  A trivial null
    space proves there is no annihilator.  Otherwise every candidate is
    checked against the whole support; on failure more random points are
    added, and after ``ALG2_RETRIES`` rounds the exhaustive solver decides.
    """
    n = f.n
    basis = monomial_basis(n, d)
    index = {m: j for j, m in enumerate(basis.masks)}
    in_support = f.bits().astype(bool)

    # expr[m]: coefficient of monomial m as a bitmask over the full basis
    expr = {m: 1 << j for j, m in enumerate(basis.masks)}
    eliminated = set()
    for m in basis.masks:
        if 1 <= m.bit_count() <= d and in_support[m]:
            acc = 0
            sub = (m - 1) & m
            while True:
                acc ^= expr[sub]
                if sub == 0:
                    break
                sub = (sub - 1) & m
            expr[m] = acc
            eliminated.add(m)
    free = [j for j, m in enumerate(basis.masks) if m not in eliminated]
    unknowns = len(free)

    def equation(x: int) -> int:
        acc = 0
        for m in basis.masks:
            if m & x == m:
                acc ^= expr[m]
        return acc

    def compress(value: int) -> int:
        out = 0
        for k, j in enumerate(free):
            if value >> j & 1:
                out |= 1 << k
        return out

    def expand(free_bits: int) -> int:
        full = 0
        for k, j in enumerate(free):
            if free_bits >> k & 1:
                full ^= 1 << j
        for m in eliminated:
            if (expr[m] & full).bit_count() & 1:
                full |= 1 << index[m]
        return full

    remaining = _rng.shuffled(np.array([x for x in f.support() if int(x) not in eliminated]), seed)
    cursor = 0
    equations: list[int] = []
    nwords = words_for(unknowns)
    for attempt in range(1, ALG2_RETRIES + 2):
        target = len(equations) + max(unknowns, 1)
        while len(equations) < target and cursor < remaining.size:
            eq = compress(equation(int(remaining[cursor])))
            cursor += 1
            if eq:
                equations.append(eq)
        rows = np.array([_pack_int(e, nwords) for e in equations], dtype=np.uint64).reshape(-1, nwords)
        system = Gf2Matrix(len(equations), unknowns, rows)
        kernel = null_space(system)
        exhausted = cursor >= remaining.size
        if kernel.dim == 0:
            return SolveReport(n, d, basis.s, f.weight, basis.s, (), (), method="incremental", attempts=attempt)
        full = []
        for v in kernel.vectors:
            free_bits = int.from_bytes(v.astype("<u8").tobytes(), "little")
            full.append(_pack_int(expand(free_bits), words_for(basis.s)))
        report = _report(
            f, basis, f.weight, basis.s - kernel.dim, full, method="incremental", attempts=attempt
        )
        # candidates contain every true annihilator, so verified candidates are all of them
        if all(report.verified):
            return report
        if exhausted:
            break
    log.debug("incremental solve did not settle after %d attempts; using exhaustive solve", ALG2_RETRIES + 1)
    exact = find_annihilators(f, d)
    return SolveReport(
        exact.n, exact.d, exact.s, exact.num_equations, exact.rank, exact.annihilators, exact.verified,
        method="incremental", fallback=True, attempts=ALG2_RETRIES + 1, vectors=exact.vectors,
    )


def min_annihilator_degree(f: BooleanFunction) -> int:
    """Smallest ``d`` admitting an annihilator of degree ``<= d``."""
    if f.weight == f.size:
        raise DomainError("the constant-one function has no annihilator")
    for d in range(f.n + 1):
        if find_annihilators(f, d).found:
            return d
    raise AssertionError("unreachable: 1 ^ f annihilates f")


def annihilator_weights(
    report: SolveReport, f: BooleanFunction | None = None, max_enum: int = MAX_WEIGHT_ENUM
) -> tuple[list[int], bool]:
    """Weights of annihilators in the solution space, and a truncation flag.

    With nullity ``<= max_enum`` every nonzero element of the space is
    weighed; beyond that only the basis vectors are.
    """
    if not report.found:
        raise DomainError("report has no annihilators")
    tables = np.array([truth_table_from_anf(g).words for g in report.annihilators], dtype=np.uint64)
    if report.nullity > max_enum:
        return [int(np.bitwise_count(t).sum()) for t in tables], True
    counts = span_weight_counts(tables, 1 << report.n)
    counts[0] -= 1
    return sorted(counts.elements()), False
