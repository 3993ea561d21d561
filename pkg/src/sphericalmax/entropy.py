"""Covering numbers in the multiplicative metric and multi-scale scans.

All counts are exact minimum covers by closed intervals of log-length
``delta``, computed with the left-to-right greedy sweep on the components of
a :class:`~sphericalmax.setgen.SampledSet`.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .setgen import (DEFAULT_GUARD_BITS, LogInterval, SampledSet, SamplingResourceError, SetSpec,
                     sample)

__all__ = [
    "ResolutionError",
    "UnboundedSpecError",
    "CoverScan",
    "CountTable",
    "cover_count",
    "brute_force_cover_count",
    "scan_sup",
    "count_table",
    "check_mainassu",
    "mainassu_terms",
    "resolve_scan_range",
]

BRUTE_FORCE_CAP = 16
# table cost grows like 4**j_max
J_MAX_CAP = 28


class ResolutionError(ValueError):
    """The sample is too coarse for the requested covering scale."""


class UnboundedSpecError(ValueError):
    """An unbounded set without periodic structure and no declared range."""


def cover_count(S: SampledSet, I: LogInterval, delta: float) -> int:
    """Minimum number of closed ``delta``-intervals covering ``S cap I``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if S.spacing > delta / 4 * (1 + 1e-12):
        raise ResolutionError(
            f"sample spacing {S.spacing:g} too coarse for delta={delta:g} (needs <= delta/4)")
    if S.empty:
        return 0
    return int(_kernels.greedy_count(S.comp_lo, S.comp_hi, float(I.lo), float(I.hi), float(delta)))


def brute_force_cover_count(points: Sequence[float], delta: float) -> int:
    """Exact minimum cover by exhaustive search over point-anchored intervals.

    Any cover can be slid right until each interval starts at a point, so
    trying every subset of anchors in increasing size finds the optimum.
    """
    pts = sorted(float(p) for p in points)
    n = len(pts)
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force is capped at {BRUTE_FORCE_CAP} points, got {n}")
    if n == 0:
        return 0
    full = (1 << n) - 1
    masks = []
    for a in pts:
        m = 0
        for i, q in enumerate(pts):
            if a <= q <= a + delta:
                m |= 1 << i
        masks.append(m)
    for k in range(1, n + 1):
        for combo in itertools.combinations(masks, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return k
    return n  # pragma: no cover


@dataclass
class CoverScan:
    """All windows of one scan at scale ``2**-j`` with their counts."""

    j: int
    rho: float
    window_lo: np.ndarray
    window_hi: np.ndarray
    count: np.ndarray
    argmax_window: LogInterval
    range: LogInterval

    @property
    def value(self) -> np.ndarray:
        length = self.window_hi - self.window_lo
        return length ** (-self.rho) * self.count

    @property
    def max_value(self) -> float:
        return float(self.value.max())

    @property
    def rows(self):
        for lo, hi, c in zip(self.window_lo, self.window_hi, self.count):
            yield LogInterval(float(lo), float(hi)), int(c)

    def to_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["j", "window_lo", "window_hi", "count", "value"])
            for lo, hi, c, v in zip(self.window_lo, self.window_hi, self.count, self.value):
                w.writerow([self.j, repr(float(lo)), repr(float(hi)), int(c), repr(float(v))])


def resolve_scan_range(spec: SetSpec, log_range: LogInterval | None = None) -> LogInterval:
    if log_range is not None:
        return log_range
    rng = spec.scan_range()
    if rng is None:
        raise UnboundedSpecError(
            f"'{spec.to_text()}' is unbounded without periodic structure; declare a log range")
    return rng


def _sample_for_range(spec, rng, j, guard_bits):
    # level-0 windows reach at most 1.5 past the last start offset
    return sample(spec, LogInterval(rng.lo, rng.hi + 1.5), j, guard_bits)


def _windows(rng: LogInterval, i: int):
    w = 2.0 ** (-i)
    m = max(1, math.ceil(rng.diameter() / w - 1e-12))
    base = rng.lo + np.arange(m) * w
    starts = np.empty(2 * m)
    starts[0::2] = base
    starts[1::2] = base + 0.5 * w
    return starts, w


def scan_sup(spec: SetSpec, j: int, rho: float, *, guard_bits: int = DEFAULT_GUARD_BITS,
             log_range: LogInterval | None = None, S: SampledSet | None = None) -> CoverScan:
    """Evaluate ``|J|**-rho * N(E cap J, 2**-j)`` over the two-phase dyadic
    window family of lengths ``2**-i``, ``i = 0..j``.

    The maximum over the family is within a factor 4 of the supremum over all
    intervals of length in ``[2**-j, 1]``.
    """
    if j < 1:
        raise ValueError("scan_sup needs j >= 1")
    rng = resolve_scan_range(spec, log_range)
    if S is None:
        S = _sample_for_range(spec, rng, j, guard_bits)
    delta = 2.0 ** (-j)
    if S.spacing > delta / 4 * (1 + 1e-12):
        raise ResolutionError("sample too coarse for this scan")
    los, his, cnts = [], [], []
    for i in range(j + 1):
        starts, w = _windows(rng, i)
        if S.empty:
            c = np.zeros(starts.size, dtype=np.int64)
        else:
            c = _kernels.count_windows(S.comp_lo, S.comp_hi, starts, w, delta)
        los.append(starts)
        his.append(starts + w)
        cnts.append(c)
    lo = np.concatenate(los)
    hi = np.concatenate(his)
    cnt = np.concatenate(cnts)
    value = (hi - lo) ** (-rho) * cnt
    top = value.max()
    # ties: lexicographically smallest window
    cand = np.flatnonzero(value >= top * (1 - 1e-12))
    order = np.lexsort((hi[cand], lo[cand]))
    k = cand[order[0]]
    return CoverScan(j, rho, lo, hi, cnt, LogInterval(float(lo[k]), float(hi[k])), rng)


@dataclass
class CountTable:
    """Per-level maxima ``M[j, i] = max_{|J| = 2**-i} N(E cap J, 2**-j)``.

    Entries with ``i > j`` are ``-1``.  ``starts[j, i]`` is the start of the
    lexicographically smallest maximizing window.
    """

    j_max: int
    counts: np.ndarray
    starts: np.ndarray
    range: LogInterval
    spec_text: str = ""
    n_components: int = 0

    def log2_counts(self, j: int) -> np.ndarray:
        row = self.counts[j, : j + 1].astype(float)
        with np.errstate(divide="ignore"):
            return np.log2(row)

    def log2_sup(self, j: int, rho: float) -> float:
        """``log2 max_i 2**(i*rho) M[j, i]``, the scan value at ``(j, rho)``."""
        i = np.arange(j + 1)
        return float(np.max(i * rho + self.log2_counts(j)))

    def unit_window_log2(self) -> np.ndarray:
        """``log2 M[j, 0]`` for ``j = 1..j_max``."""
        return np.array([self.log2_counts(j)[0] for j in range(1, self.j_max + 1)])


def count_table(spec: SetSpec, j_max: int, *, guard_bits: int = DEFAULT_GUARD_BITS,
                log_range: LogInterval | None = None, threads: int = 1) -> CountTable:
    """Multi-scale covering table for ``j = 1..j_max`` from one fine sample."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    if j_max > J_MAX_CAP:
        raise SamplingResourceError(f"j_max={j_max} exceeds the cap {J_MAX_CAP}")
    rng = resolve_scan_range(spec, log_range)
    S = _sample_for_range(spec, rng, j_max, guard_bits)
    counts = np.full((j_max + 1, j_max + 1), -1, dtype=np.int64)
    starts = np.full((j_max + 1, j_max + 1), np.nan)
    if S.empty:
        counts[:] = 0
        return CountTable(j_max, counts, starts, rng, spec.to_text(), 0)

    def one(j):
        return j, _kernels.level_maxima(S.comp_lo, S.comp_hi, rng.lo, rng.diameter(), j)

    js = range(1, j_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(one, js))
    else:
        results = [one(j) for j in js]
    for j, (best, best_start) in results:
        counts[j, : j + 1] = best
        starts[j, : j + 1] = best_start
    counts[0, 0] = 1
    return CountTable(j_max, counts, starts, rng, spec.to_text(), S.n_components)


def _check_unit_subset(spec: SetSpec):
    ext = spec.extent()
    if ext is None or ext.lo < -1e-12 or ext.hi > 1 + 1e-12:
        raise ValueError("check_mainassu needs a subset of [1, 2]; apply window_restrict first")


def mainassu_terms(spec: SetSpec, p: float, alpha: float, eps: float, j_max: int, d: int = 2,
                   *, table: CountTable | None = None) -> np.ndarray:
    """Per-scale maxima of ``N(E cap I, d) d**((d-1)(p-1)-eps) |I|**(alpha+(d-1)(2-p))``.

    Entry ``j - 1`` is the maximum over scanned windows at ``delta = 2**-j``.
    """
    _check_unit_subset(spec)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if table is None or table.j_max < j_max:
        table = count_table(spec, j_max, log_range=LogInterval(0.0, 1.0))
    a_delta = (d - 1) * (p - 1) - eps
    a_len = alpha + (d - 1) * (2 - p)
    out = np.empty(j_max)
    for j in range(1, j_max + 1):
        i = np.arange(j + 1)
        logs = table.log2_counts(j) - j * a_delta - i * a_len
        out[j - 1] = 2.0 ** np.max(logs)
    return out


def check_mainassu(spec: SetSpec, p: float, alpha: float, eps: float, j_max: int, d: int = 2,
                   *, table: CountTable | None = None) -> float:
    """Estimated ``A**p``: the running maximum of :func:`mainassu_terms`."""
    return float(mainassu_terms(spec, p, alpha, eps, j_max, d, table=table).max())
