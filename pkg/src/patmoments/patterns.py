"""Link functions for the five symmetric patterned ensembles and matrix construction.

All indices are 1-based in the public API. A link value is an ``int`` for
every pattern except Wigner, whose link value is the pair ``(min(i, j), max(i, j))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Union

import numpy as np

LinkValue = Union[int, tuple]


class Pattern(enum.Enum):
    WIGNER = "wigner"
    TOEPLITZ = "toeplitz"
    HANKEL = "hankel"
    REVERSE_CIRCULANT = "reversecirculant"
    SYMMETRIC_CIRCULANT = "symmetriccirculant"

    @classmethod
    def parse(cls, name: str | "Pattern") -> "Pattern":
        if isinstance(name, Pattern):
            return name
        key = name.strip().lower().replace("_", "").replace("-", "")
        for p in cls:
            if p.value == key:
                return p
        valid = ", ".join(p.value for p in cls)
        raise ValueError(f"unknown pattern {name!r}; valid names: {valid}")

    @property
    def code(self) -> int:
        return _CODES[self]

    @property
    def delta(self) -> int:
        """Supremum of row-wise level-set sizes (2 for Toeplitz and symmetric circulant, else 1)."""
        return 2 if self in (Pattern.TOEPLITZ, Pattern.SYMMETRIC_CIRCULANT) else 1


_CODES = {
    Pattern.WIGNER: 0,
    Pattern.TOEPLITZ: 1,
    Pattern.HANKEL: 2,
    Pattern.REVERSE_CIRCULANT: 3,
    Pattern.SYMMETRIC_CIRCULANT: 4,
}


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"index {i} outside 1..{n}")


def link(p: Pattern, i: int, j: int, n: int) -> LinkValue:
    p = Pattern.parse(p)
    _check_index(i, n)
    _check_index(j, n)
    if p is Pattern.WIGNER:
        return (min(i, j), max(i, j))
    if p is Pattern.TOEPLITZ:
        return abs(i - j)
    if p is Pattern.HANKEL:
        return i + j
    if p is Pattern.REVERSE_CIRCULANT:
        return (i + j) % n
    d = abs(i - j)
    # equals n/2 - |n/2 - d| for integer 0 <= d <= n
    return min(d, n - d)


def inverse_link(p: Pattern, i: int, t: LinkValue, n: int) -> set[int]:
    """All ``j`` in ``1..n`` with ``link(p, i, j, n) == t``."""
    p = Pattern.parse(p)
    _check_index(i, n)
    if p is Pattern.WIGNER:
        a, b = t
        if i == a:
            cands = [b]
        elif i == b:
            cands = [a]
        else:
            cands = []
        return {j for j in cands if 1 <= j <= n and link(p, i, j, n) == t}
    t = int(t)
    if p is Pattern.TOEPLITZ:
        cands = [i - t, i + t]
    elif p is Pattern.HANKEL:
        cands = [t - i]
    elif p is Pattern.REVERSE_CIRCULANT:
        if not 0 <= t < n:
            return set()
        r = (t - i) % n
        cands = [r if r else n]
    else:
        cands = [i - t, i + t, i - (n - t), i + (n - t)]
    return {j for j in cands if 1 <= j <= n and link(p, i, j, n) == t}


def delta_empirical(p: Pattern, n: int) -> int:
    """Largest ``|inverse_link(p, i, t, n)|`` over rows ``i`` and targets ``t``."""
    p = Pattern.parse(p)
    if n < 3:
        raise ValueError("delta_empirical needs n >= 3")
    codes = link_codes(p, n)
    best = 0
    for row in codes:
        best = max(best, int(np.bincount(row).max()))
    return best


@lru_cache(maxsize=32)
def _link_table(p: Pattern, n: int) -> tuple[np.ndarray, tuple]:
    idx = np.arange(1, n + 1)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    if p is Pattern.WIGNER:
        raw = np.minimum(i, j) * (n + 1) + np.maximum(i, j)
    elif p is Pattern.TOEPLITZ:
        raw = np.abs(i - j)
    elif p is Pattern.HANKEL:
        raw = i + j
    elif p is Pattern.REVERSE_CIRCULANT:
        raw = (i + j) % n
    else:
        d = np.abs(i - j)
        raw = np.minimum(d, n - d)
    uniq, inv = np.unique(raw, return_inverse=True)
    if p is Pattern.WIGNER:
        keys = tuple((int(u) // (n + 1), int(u) % (n + 1)) for u in uniq)
    else:
        keys = tuple(int(u) for u in uniq)
    codes = inv.reshape(n, n).astype(np.intp)
    codes.setflags(write=False)
    return codes, keys


def link_codes(p: Pattern, n: int) -> np.ndarray:
    """``n x n`` array mapping each cell to the rank of its link value in :func:`link_range`."""
    return _link_table(Pattern.parse(p), n)[0]


def link_range(p: Pattern, n: int) -> tuple:
    """Sorted distinct link values taken on ``{1..n}^2``."""
    return _link_table(Pattern.parse(p), n)[1]


class Distribution(enum.Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, name: str | "Distribution") -> "Distribution":
        if isinstance(name, Distribution):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown distribution {name!r}; valid: rademacher, gaussian") from None


def draw_values(dist: Distribution, size: int, rng: np.random.Generator) -> np.ndarray:
    if dist is Distribution.RADEMACHER:
        return rng.integers(0, 2, size=size).astype(np.float64) * 2.0 - 1.0
    return rng.standard_normal(size)


@dataclass(frozen=True)
class InputSequence:
    """Independent mean-zero unit-variance values, one per link value."""

    distribution: Distribution
    seed: int
    values: Mapping[LinkValue, float] = field(repr=False)

    @classmethod
    def generate(cls, p: Pattern, n: int, distribution="rademacher", seed: int = 0) -> "InputSequence":
        dist = Distribution.parse(distribution)
        keys = link_range(p, n)
        vals = draw_values(dist, len(keys), np.random.default_rng(seed))
        return cls(dist, seed, dict(zip(keys, vals.tolist())))


@dataclass(frozen=True)
class PatternedMatrix:
    pattern: Pattern
    n: int
    entries: np.ndarray = field(repr=False)


def build_matrix(p: Pattern, n: int, inputs: InputSequence | Mapping[LinkValue, float]) -> PatternedMatrix:
    p = Pattern.parse(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    values = inputs.values if isinstance(inputs, InputSequence) else inputs
    keys = link_range(p, n)
    missing = [k for k in keys if k not in values]
    if missing:
        raise KeyError(f"input sequence has no value for link value(s) {missing[:5]}")
    vec = np.array([values[k] for k in keys], dtype=np.float64)
    entries = vec[link_codes(p, n)]
    entries.setflags(write=False)
    return PatternedMatrix(p, n, entries)


def matrix_from_array(p: Pattern, n: int, vec: np.ndarray) -> np.ndarray:
    """Fast path: ``vec[r]`` is the value of the ``r``-th link value in :func:`link_range`."""
    return vec[link_codes(p, n)]
