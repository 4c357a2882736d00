"""Monte Carlo traces of products of independent patterned matrices."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .patterns import Distribution, Pattern, draw_values, link_range, matrix_from_array
from .words import parse_monomial


@dataclass
class SimulationStats:
    monomial: tuple
    pattern: Pattern
    n: int
    reps: int
    seed: int
    distribution: Distribution
    per_replicate: np.ndarray = field(repr=False)
    mean: float = 0.0
    std_error: float = 0.0


@dataclass
class DecayFit:
    n_grid: list[int]
    fourth_moment_estimates: list[float]
    slope: float
    intercept: float
    error: str | None = None


def replicate_rng(seed: int, n: int, replicate: int, color: int) -> np.random.Generator:
    """Independent stream for (seed, n, replicate, color); stateless so any schedule gives the same draws."""
    key = (n, replicate, color)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def trace_moment_replicate(p: Pattern, q: Sequence[int], n: int, rngs: dict[int, np.random.Generator],
                           dist: Distribution = Distribution.RADEMACHER) -> float:
    """One realization of ``n^-(1 + k/2) Tr(X_{c1} ... X_{ck})``; ``rngs`` maps color -> generator."""
    p = Pattern.parse(p)
    q = parse_monomial(q)
    dist = Distribution.parse(dist)
    if n < 2:
        raise ValueError("n must be >= 2")
    n_values = len(link_range(p, n))
    mats = {c: matrix_from_array(p, n, draw_values(dist, n_values, rngs[c])) for c in sorted(set(q))}
    k = len(q)
    if k == 1:
        tr = float(np.trace(mats[q[0]]))
    else:
        head = mats[q[0]]
        for c in q[1:-1]:
            head = head @ mats[c]
        # Tr(AB) = sum(A * B^T); every factor is symmetric
        tr = float(np.einsum("ij,ji->", head, mats[q[-1]]))
    return tr / n ** (1 + k / 2)


def simulate_moment(p: Pattern, q: Sequence[int], n: int, reps: int, dist="rademacher", seed: int = 0,
                    threads: int | None = None) -> SimulationStats:
    p = Pattern.parse(p)
    q = parse_monomial(q)
    dist = Distribution.parse(dist)
    if reps < 2:
        raise ValueError("reps must be >= 2")
    colors = sorted(set(q))

    def one(r: int) -> float:
        rngs = {c: replicate_rng(seed, n, r, c) for c in colors}
        return trace_moment_replicate(p, q, n, rngs, dist)

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            vals = np.array(list(pool.map(one, range(reps))))
    else:
        vals = np.array([one(r) for r in range(reps)])
    mean = float(vals.sum() / reps)
    se = float(vals.std(ddof=1) / math.sqrt(reps))
    return SimulationStats(q, p, n, reps, seed, dist, vals, mean, se)


def fourth_moment_decay(p: Pattern, q: Sequence[int], n_grid: Sequence[int] = (64, 128, 256, 512),
                        reps: int = 200, dist="rademacher", seed: int = 0,
                        threads: int | None = None) -> DecayFit:
    """Fit the log-log slope of the centered fourth moment of the normalized trace against n."""
    grid = [int(x) for x in n_grid]
    if len(grid) < 3 or grid != sorted(grid):
        raise ValueError("n_grid must be ascending with at least 3 points")
    if reps < 50:
        raise ValueError("reps must be >= 50")
    estimates = []
    for n in grid:
        stats = simulate_moment(p, q, n, reps, dist, seed, threads)
        centered = stats.per_replicate - stats.mean
        estimates.append(float(np.mean(centered**4)))
    est = np.array(estimates)
    if np.any(est <= 0) or not np.all(np.isfinite(est)):
        return DecayFit(grid, estimates, float("nan"), float("nan"), error="degenerate replicates")
    slope, intercept = np.polyfit(np.log(grid), np.log(est), 1)
    return DecayFit(grid, estimates, float(slope), float(intercept))
