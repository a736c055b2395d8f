"""Seeded Monte-Carlo campaigns over random functions of fixed weight.

Trial ``i`` at weight point ``wt`` draws
``random_of_weight(n, wt, derive_seed(derive_seed(master_seed, wt), i))``.
The rank of its annihilator system is computed in a fused numba kernel; the
rare trials with a nontrivial null space are replayed in Python to extract
and weigh the annihilators.  Results depend only on the configuration, never
on chunking or worker count.
"""

from __future__ import annotations

import io
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import _rng
from ._rng import _derive, _partial_shuffle
from .annihilator import annihilator_weights, evaluation_rows, find_annihilators, monomial_basis
from .boolfn import random_of_weight
from .gf2linalg import full_column_rank_or_rank

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240521
CHUNK = 1 << 15
PREFIX_SLACK = 8
Z95 = 1.959963984540054


@njit(cache=True)
def _scan_ranks(n, weight, point_seed, start, count, rows, s, out):
    size = 1 << n
    perm = np.empty(size, dtype=np.int32)
    a = np.empty((weight, rows.shape[1]), dtype=np.uint64)
    for t in range(count):
        seed = _derive(point_seed, np.uint64(start + t))
        for x in range(size):
            perm[x] = x
        _partial_shuffle(perm, weight, seed)
        for i in range(weight):
            a[i, :] = rows[perm[i], :]
        out[t] = full_column_rank_or_rank(a, s, PREFIX_SLACK)


def scan_ranks(n: int, d: int, weight: int, point_seed: int, start: int, count: int) -> np.ndarray:
    """System ranks for trials ``start .. start+count-1`` at one weight point."""
    rows = evaluation_rows(n, d)
    out = np.empty(count, dtype=np.int64)
    _scan_ranks(n, weight, _rng.as_seed(point_seed), start, count, rows, monomial_basis(n, d).s, out)
    return out


def point_seed(master_seed: int, weight: int) -> int:
    return _rng.derive_seed(master_seed, weight)


def trial_function(n: int, weight: int, master_seed: int, index: int):
    return random_of_weight(n, weight, _rng.derive_seed(point_seed(master_seed, weight), index))


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class Hit:
    trial: int
    rank: int
    weights: tuple[int, ...] = ()
    truncated: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    d: int
    trials: int
    master_seed: int = DEFAULT_SEED
    weight_sweep: tuple[int, ...] | None = None
    max_nullspace_enum: int = 20
    # stop a weight point early once this many hits are in (checked per chunk)
    min_hits: int | None = None
    collect_weights: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.d <= self.n:
            raise ValueError(f"degree d={self.d} outside [0, n={self.n}]")
        if self.weight_sweep is not None:
            s, top = self.s, 1 << (self.n - 1)
            bad = [w for w in self.weight_sweep if not s <= w <= top]
            if bad:
                raise ValueError(f"sweep weights {bad} outside [s={s}, 2^(n-1)={top}]")

    @property
    def s(self) -> int:
        return monomial_basis(self.n, self.d).s

    def header(self, kind: str) -> str:
        fields = [
            f"experiment={kind}", f"n={self.n}", f"d={self.d}", f"s={self.s}", f"trials={self.trials}",
            f"master_seed={self.master_seed}", f"max_nullspace_enum={self.max_nullspace_enum}",
        ]
        if self.min_hits is not None:
            fields.append(f"min_hits={self.min_hits}")
        return "# " + " ".join(fields)


@dataclass(frozen=True)
class ExperimentResult:
    n: int
    d: int
    s: int
    wtf: int
    trials: int
    hits: tuple[Hit, ...] = field(repr=False)

    @property
    def hit_count(self) -> int:
        return len(self.hits)

    @property
    def p_ex(self) -> float:
        return self.hit_count / self.trials

    @property
    def confidence(self) -> tuple[float, float]:
        return wilson_interval(self.hit_count, self.trials)

    @property
    def weight_histogram(self) -> Counter:
        hist = Counter()
        for h in self.hits:
            hist.update(h.weights)
        return hist

    @property
    def annihilator_count(self) -> int:
        return sum(len(h.weights) for h in self.hits)

    @property
    def avg_annihilator_weight(self) -> float | None:
        total = self.annihilator_count
        if not total:
            return None
        return sum(sum(h.weights) for h in self.hits) / total

    @property
    def avg_rank_given_hit(self) -> float | None:
        if not self.hits:
            return None
        return sum(h.rank for h in self.hits) / len(self.hits)

    @property
    def weights_divisible_by_4(self) -> bool:
        return all(w % 4 == 0 for w in self.weight_histogram)

    def normalized(self) -> tuple[float | None, float | None]:
        """(avg wt(g) / 2^(n-d), avg rank / (s-1))."""
        wt, rk = self.avg_annihilator_weight, self.avg_rank_given_hit
        return (
            None if wt is None else wt / (1 << (self.n - self.d)),
            None if rk is None or self.s < 2 else rk / (self.s - 1),
        )

    def prefix(self, trials: int) -> ExperimentResult:
        """The same run restricted to its first ``trials`` trials."""
        if trials > self.trials:
            raise ValueError(f"run has only {self.trials} trials")
        return ExperimentResult(
            self.n, self.d, self.s, self.wtf, trials, tuple(h for h in self.hits if h.trial < trials)
        )


def _scan_job(args):
    n, d, weight, seed, start, count = args
    return scan_ranks(n, d, weight, seed, start, count)


def run_point(cfg: ExperimentConfig, wtf: int) -> ExperimentResult:
    """All trials of ``cfg`` at truth-table weight ``wtf``."""
    n, d, s = cfg.n, cfg.d, cfg.s
    seed = point_seed(cfg.master_seed, wtf)
    hits: list[Hit] = []
    done = 0
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        while done < cfg.trials:
            span = min(CHUNK * max(1, cfg.workers), cfg.trials - done)
            jobs = [
                (n, d, wtf, seed, start, min(CHUNK, done + span - start))
                for start in range(done, done + span, CHUNK)
            ]
            parts = list(pool.map(_scan_job, jobs)) if pool else [_scan_job(j) for j in jobs]
            ranks = np.concatenate(parts)
            for offset in np.flatnonzero(ranks < s):
                hits.append(_inspect_hit(cfg, wtf, done + int(offset), int(ranks[offset])))
            done += span
            log.info("n=%d d=%d wt=%d: %d/%d trials, %d hits", n, d, wtf, done, cfg.trials, len(hits))
            if cfg.min_hits is not None and len(hits) >= cfg.min_hits:
                break
    finally:
        if pool:
            pool.shutdown()
    return ExperimentResult(n, d, s, wtf, done, tuple(hits))


def _inspect_hit(cfg: ExperimentConfig, wtf: int, trial: int, rank: int) -> Hit:
    if not cfg.collect_weights:
        return Hit(trial, rank)
    f = trial_function(cfg.n, wtf, cfg.master_seed, trial)
    report = find_annihilators(f, cfg.d)
    if report.rank != rank:
        raise AssertionError(f"trial {trial}: kernel rank {rank} != solver rank {report.rank}")
    weights, truncated = annihilator_weights(report, f, cfg.max_nullspace_enum)
    return Hit(trial, rank, tuple(weights), truncated)


def estimate_p_ex(cfg: ExperimentConfig) -> ExperimentResult:
    """Existence frequency over random balanced functions."""
    return run_point(cfg, 1 << (cfg.n - 1))


def default_sweep(n: int, d: int, points: int = 8) -> tuple[int, ...]:
    s, top = monomial_basis(n, d).s, 1 << (n - 1)
    return tuple(sorted({round(s + (top - s) * k / (points - 1)) for k in range(points)}))


def sweep_weights(cfg: ExperimentConfig) -> list[ExperimentResult]:
    weights = cfg.weight_sweep or default_sweep(cfg.n, cfg.d)
    return [run_point(cfg, w) for w in weights]


def observation1_histogram(cfg: ExperimentConfig) -> Counter:
    """Annihilator weight histogram at balanced weight (``d < floor(n/2)``)."""
    if not cfg.d < cfg.n // 2:
        raise ValueError("histogram campaign needs d < floor(n/2)")
    return estimate_p_ex(cfg).weight_histogram


TABLE6_TRIALS = 10_000
TABLE6_TRIALS_LARGE = 100


def table6_trials(n: int) -> int:
    return TABLE6_TRIALS if n < 13 else TABLE6_TRIALS_LARGE


def table6_campaign(
    n_list, trials: int | dict[int, int] | None = None, master_seed: int = DEFAULT_SEED, soft_floor: float = 0.6
) -> list[ExperimentResult]:
    """Existence frequency for odd ``n`` at ``d = floor(n/2)``."""
    even = [n for n in n_list if n % 2 == 0]
    if even:
        raise ValueError(f"odd n required, got {even}")
    rows = []
    for n in n_list:
        if trials is None:
            count = table6_trials(n)
        elif isinstance(trials, dict):
            count = trials.get(n, table6_trials(n))
        else:
            count = trials
        cfg = ExperimentConfig(n, n // 2, count, master_seed, collect_weights=False)
        row = estimate_p_ex(cfg)
        if row.p_ex <= soft_floor:
            log.warning("n=%d d=%d: p_ex=%.3f at or below soft floor %.2f", n, n // 2, row.p_ex, soft_floor)
        rows.append(row)
    return rows


# ------------------------------------------------------------------ CSV output


def _num(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def sweep_csv(cfg: ExperimentConfig, rows: list[ExperimentResult]) -> str:
    buf = io.StringIO()
    buf.write(cfg.header("sweep") + "\n")
    buf.write("wtf,wtf_minus_s,trials,hits,p_ex,ci_lo,ci_hi,avg_wt_g,avg_wt_g_norm,avg_rank,avg_rank_norm\n")
    for r in rows:
        lo, hi = r.confidence
        wt_norm, rank_norm = r.normalized()
        buf.write(",".join([
            str(r.wtf), str(r.wtf - r.s), str(r.trials), str(r.hit_count), _num(r.p_ex), _num(lo), _num(hi),
            _num(r.avg_annihilator_weight), _num(wt_norm), _num(r.avg_rank_given_hit), _num(rank_norm),
        ]) + "\n")
    return buf.getvalue()


def histogram_csv(cfg: ExperimentConfig, hist: Counter) -> str:
    buf = io.StringIO()
    buf.write(cfg.header("histogram") + "\n")
    buf.write("weight,count\n")
    for w in sorted(hist):
        buf.write(f"{w},{hist[w]}\n")
    return buf.getvalue()


def campaign_csv(rows: list[ExperimentResult], master_seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# experiment=table6 master_seed={master_seed}\n")
    buf.write("n,d,trials,p_ex,ci_lo,ci_hi\n")
    for r in rows:
        lo, hi = r.confidence
        buf.write(f"{r.n},{r.d},{r.trials},{_num(r.p_ex)},{_num(lo)},{_num(hi)}\n")
    return buf.getvalue()
