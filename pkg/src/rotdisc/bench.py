"""Runtime ladders for the branch construction and the naive sampler."""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from rotdisc.cf import named_rho
from rotdisc.core import build_branches
from rotdisc.oracle import fit_line, naive_sample

REPEATS = 5


@dataclass(frozen=True)
class BenchRow:
    N: int
    algo: str
    seconds: float


def geometric_ladder(n_min: int, n_max: int):
    """Powers of two from ``n_min`` up to ``n_max`` (both rounded down to a
    power of two)."""
    if n_min < 1 or n_max < n_min:
        raise ValueError("need 1 <= n_min <= n_max")
    lo = int(math.floor(math.log2(n_min)))
    hi = int(math.floor(math.log2(n_max)))
    return [2 ** j for j in range(lo, hi + 1)]


def median_time(fn, repeats=REPEATS) -> float:
    """Median wall time of ``repeats`` calls after one warm-up call."""
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def time_dta(rho, N, repeats=REPEATS, sort="bucket") -> float:
    return median_time(lambda: build_branches(rho, N, sort=sort), repeats)


def time_naive(rho, N, repeats=REPEATS) -> float:
    return median_time(lambda: naive_sample(rho, N, N), repeats)


def loglog_slope(rows):
    """Slope and R^2 of ``log seconds`` against ``log N``."""
    n = np.array([r.N for r in rows], dtype=float)
    t = np.array([r.seconds for r in rows], dtype=float)
    slope, _, r2 = fit_line(np.log(n), np.log(t))
    return slope, r2


def run_bench(rho=None, dta_ladder=None, naive_ladder=None, repeats=REPEATS, threads=1):
    """Time both algorithms; returns ``(rows, {algo: (slope, r2)})``.

    Defaults: golden rho, DTA over 2^10..2^20, naive with ``n_samples = N``
    over 2^7..2^12.
    """
    rho = named_rho("golden") if rho is None else rho
    dta_ladder = geometric_ladder(2 ** 10, 2 ** 20) if dta_ladder is None else list(dta_ladder)
    naive_ladder = geometric_ladder(2 ** 7, 2 ** 12) if naive_ladder is None else list(naive_ladder)
    jobs = [("dta", N) for N in dta_ladder] + [("naive", N) for N in naive_ladder]

    def one(job):
        algo, N = job
        fn = time_dta if algo == "dta" else time_naive
        return BenchRow(N, algo, fn(rho, N, repeats))

    if threads <= 1:
        rows = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, jobs))
    fits = {}
    for algo in ("dta", "naive"):
        sub = [r for r in rows if r.algo == algo]
        if len(sub) >= 2:
            fits[algo] = loglog_slope(sub)
    return rows, fits
