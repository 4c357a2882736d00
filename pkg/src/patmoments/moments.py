"""Limiting joint moments and the three reference independence functionals.

The reference functionals (free semicircular, classical Gaussian, half
independent symmetrized Rayleigh) are computed from their own defining
formulas and never through the word/circuit machinery, so comparing them
with :func:`limit_joint_moment` is a genuine cross-check.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .circuits import PConfig, PEstimate, p_limit
from .patterns import Pattern
from .words import (
    ColoredWord,
    drop_colors,
    enumerate_colored_pair_matched,
    is_symmetric_monomial,
    noncrossing_pairings,
    parse_monomial,
)

DEFAULT_BATTERY = (
    (1, 2, 1, 2),
    (1, 2, 2, 1),
    (1, 2, 3, 1, 2, 3),
    (1, 2, 3, 2, 3, 1),
    (1, 2, 3, 3, 1, 2),
    (1, 1, 1, 1),
)

FREE = "free"
CLASSICAL = "classical"
HALF = "half_independent"
NOTIONS = (FREE, CLASSICAL, HALF)

# extrapolated values are only trusted to this absolute accuracy
ESTIMATE_FLOOR = 0.02


@dataclass
class MomentValue:
    value: float
    exact: Fraction | None = None
    stderr: float = 0.0
    flagged: bool = False
    contributions: list[tuple[ColoredWord, PEstimate]] = field(default_factory=list)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


def _odd_vanishing(q: Sequence[int]) -> bool:
    return len(q) % 2 == 1 or any(v % 2 for v in Counter(q).values())


def moment_bound(p: Pattern, k: int) -> float:
    if k % 2:
        return 0.0
    return math.factorial(k) * Pattern.parse(p).delta ** (k // 2) / (math.factorial(k // 2) * 2 ** (k // 2))


def limit_joint_moment(p: Pattern, q: Sequence[int], config: PConfig | None = None,
                       threads: int | None = None) -> MomentValue:
    """Sum of ``p(w)`` over colored pair-matched words of ``q`` (zero in the vanishing cases)."""
    p = Pattern.parse(p)
    q = parse_monomial(q)
    if _odd_vanishing(q):
        return MomentValue(0.0, exact=Fraction(0))
    words = enumerate_colored_pair_matched(q)
    if threads and threads > 1 and len(words) > 1:
        with ThreadPoolExecutor(threads) as pool:
            ests = list(pool.map(lambda cw: p_limit(p, drop_colors(cw), config), words))
    else:
        ests = [p_limit(p, drop_colors(cw), config) for cw in words]
    total = 0.0
    for e in ests:
        total += e.value
    exact = None
    if all(e.exact is not None for e in ests):
        exact = sum((e.exact for e in ests), Fraction(0))
        total = float(exact)
    return MomentValue(
        value=total,
        exact=exact,
        stderr=math.sqrt(sum(e.stderr ** 2 for e in ests)),
        flagged=any(e.flagged for e in ests),
        contributions=list(zip(words, ests)),
    )


def free_semicircular_moment(q: Sequence[int]) -> MomentValue:
    """Number of noncrossing pairings of the positions joining equal colors only."""
    q = parse_monomial(q)
    if len(q) % 2:
        return MomentValue(0.0, exact=Fraction(0))
    count = sum(
        all(q[i - 1] == q[j - 1] for i, j in pairing)
        for pairing in noncrossing_pairings(len(q))
    )
    return MomentValue(float(count), exact=Fraction(count))


def _double_factorial_moment(m: int) -> int:
    # (2m)! / (m! 2^m): the 2m-th standard Gaussian moment
    return math.factorial(2 * m) // (math.factorial(m) * 2**m)


def classical_gaussian_moment(q: Sequence[int]) -> MomentValue:
    q = parse_monomial(q)
    counts = Counter(q)
    if len(q) % 2 or any(v % 2 for v in counts.values()):
        return MomentValue(0.0, exact=Fraction(0))
    val = math.prod(_double_factorial_moment(v // 2) for v in counts.values())
    return MomentValue(float(val), exact=Fraction(val))


def half_independent_rayleigh_moment(q: Sequence[int]) -> MomentValue:
    q = parse_monomial(q)
    counts = Counter(q)
    if len(q) % 2 or any(v % 2 for v in counts.values()) or not is_symmetric_monomial(q):
        return MomentValue(0.0, exact=Fraction(0))
    val = math.prod(math.factorial(v // 2) for v in counts.values())
    return MomentValue(float(val), exact=Fraction(val))


REFERENCES = {
    FREE: free_semicircular_moment,
    CLASSICAL: classical_gaussian_moment,
    HALF: half_independent_rayleigh_moment,
}


@dataclass
class HalfModelStats:
    monomial: tuple
    reps: int
    seed: int
    mean: float
    std_error: float


def simulate_half_independent_model(q: Sequence[int], reps: int = 100_000, seed: int = 0,
                                    chunk: int = 50_000) -> HalfModelStats:
    """Normalized trace of products of ``[[0, eta], [conj(eta), 0]]`` with complex Gaussian ``eta``.

    Real and imaginary parts of ``eta`` have variance 1/2 each, so ``E|eta|^2 = 1``.
    """
    q = parse_monomial(q)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    colors = sorted(set(q))
    ss = np.random.SeedSequence(seed)
    rng = np.random.Generator(np.random.Philox(ss))
    values = np.empty(reps)
    done = 0
    while done < reps:
        size = min(chunk, reps - done)
        eta = {c: (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2) for c in colors}
        # the product of these off-diagonal factors alternates between diagonal and off-diagonal;
        # track the (0,0)/(1,1) entries of the diagonal part and (0,1)/(1,0) of the off-diagonal part
        top = np.ones(size, dtype=complex)
        bottom = np.ones(size, dtype=complex)
        diagonal = True
        for c in q:
            e = eta[c]
            if diagonal:
                top, bottom = top * e, bottom * np.conj(e)
            else:
                top, bottom = top * np.conj(e), bottom * e
            diagonal = not diagonal
        if diagonal:
            tr = (top + bottom).real / 2.0
        else:
            tr = np.zeros(size)
        values[done:done + size] = tr
        done += size
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(reps)) if reps > 1 else float("nan")
    return HalfModelStats(q, reps, seed, mean, se)


@dataclass
class Witness:
    monomial: tuple
    notion: str
    ensemble: float
    reference: float
    tolerance: float

    @property
    def gap(self) -> float:
        return abs(self.ensemble - self.reference)


@dataclass
class ClassificationReport:
    pattern: Pattern
    verdicts: dict[str, str]
    witnesses: dict[str, list[Witness]]
    moments: dict[tuple, MomentValue]
    note: str = "consistent means agreement on the listed battery only, not a proof"


def classify(p: Pattern, battery: Sequence[Sequence[int]] = DEFAULT_BATTERY, tolerance: float = 1e-9,
             config: PConfig | None = None, threads: int | None = None) -> ClassificationReport:
    """Compare the ensemble's limit with each reference functional on a battery of monomials.

    Exact pairs use ``tolerance``; an estimated moment uses
    ``max(3 * stderr, ESTIMATE_FLOOR, tolerance)``. A flagged estimate that would
    decide a verdict makes it ``inconclusive``.
    """
    p = Pattern.parse(p)
    battery = [parse_monomial(q) for q in battery]
    for q in battery:
        if _odd_vanishing(q):
            raise ValueError(f"battery monomial {q} needs even length and even color multiplicities")
    moments = {q: limit_joint_moment(p, q, config, threads) for q in battery}
    verdicts: dict[str, str] = {}
    witnesses: dict[str, list[Witness]] = {}
    for notion in NOTIONS:
        ref_fn = REFERENCES[notion]
        found: list[Witness] = []
        unsure = False
        for q in battery:
            m = moments[q]
            ref = ref_fn(q).value
            tol = tolerance if m.is_exact else max(3 * m.stderr, ESTIMATE_FLOOR, tolerance)
            w = Witness(q, notion, m.value, ref, tol)
            if w.gap > tol:
                if m.flagged:
                    unsure = True
                else:
                    found.append(w)
            elif m.flagged:
                unsure = True
        witnesses[notion] = found
        if found:
            verdicts[notion] = "refuted"
        elif unsure:
            verdicts[notion] = "inconclusive"
        else:
            verdicts[notion] = "consistent"
    return ClassificationReport(p, verdicts, witnesses, moments)


def read_battery(path) -> list[tuple]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(parse_monomial(line))
    if not out:
        raise ValueError(f"battery file {path} has no monomials")
    return out
