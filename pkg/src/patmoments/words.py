"""Pair-matched words, colored words and their Catalan / symmetric classification.

Words are tuples of positive integers in canonical form: letter ``m`` first
appears only after letters ``1..m-1``. ``"abab"`` is ``(1, 2, 1, 2)``.
Positions are numbered from 1, so position 1 is odd.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Iterable, NamedTuple, Sequence

Word = tuple
Monomial = tuple

MAX_K = 16


class ColoredWord(NamedTuple):
    letters: tuple
    colors: tuple

    def __str__(self) -> str:
        return "".join(f"{_LETTERS[a - 1]}{c}" for a, c in zip(self.letters, self.colors))


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def canonicalize(labels: Iterable[Hashable]) -> Word:
    labels = list(labels)
    if not labels:
        raise ValueError("cannot canonicalize an empty sequence")
    seen: dict = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen) + 1
        out.append(seen[x])
    return tuple(out)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text or not text.isalpha() or not text.islower():
        raise ValueError(f"word must be lowercase letters, got {text!r}")
    return canonicalize(text)


def format_word(w: Sequence[int]) -> str:
    return "".join(_LETTERS[a - 1] for a in w)


def parse_monomial(text: str | Sequence[int]) -> Monomial:
    if isinstance(text, str):
        tokens = [t.strip() for t in text.split(",")]
        try:
            colors = tuple(int(t) for t in tokens)
        except ValueError:
            raise ValueError(f"monomial must be comma-separated integers, got {text!r}") from None
    else:
        colors = tuple(int(c) for c in text)
    if not colors:
        raise ValueError("monomial must be nonempty")
    if any(c <= 0 for c in colors):
        raise ValueError(f"colors must be positive integers, got {colors}")
    return colors


def is_pair_matched(w: Sequence) -> bool:
    return len(w) > 0 and all(v == 2 for v in Counter(w).values())


def _pairings(positions: list[int]):
    if not positions:
        yield []
        return
    first, rest = positions[0], positions[1:]
    for idx, other in enumerate(rest):
        for tail in _pairings(rest[:idx] + rest[idx + 1:]):
            yield [(first, other)] + tail


def pairing_to_word(pairs: Iterable[tuple[int, int]], k: int) -> Word:
    """Word of a perfect matching of ``{0..k-1}`` (0-based positions)."""
    labels = [0] * k
    for tag, (i, j) in enumerate(pairs, start=1):
        labels[i] = labels[j] = tag
    return canonicalize(labels)


def pair_count(k: int) -> int:
    """Number of perfect matchings of ``k`` points, ``k!/((k/2)! 2^(k/2))``."""
    return math.factorial(k) // (math.factorial(k // 2) * 2 ** (k // 2))


def _check_k(k: int) -> None:
    if k < 2 or k % 2:
        raise ValueError(f"k must be even and >= 2, got {k}")
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds enumeration cap {MAX_K}")


def enumerate_pair_matched(k: int) -> list[Word]:
    """All pair-matched canonical words of length ``k``, sorted lexicographically."""
    _check_k(k)
    return sorted(pairing_to_word(p, k) for p in _pairings(list(range(k))))


def enumerate_colored_pair_matched(q: Sequence[int]) -> list[ColoredWord]:
    """Colored pair-matched words of monomial ``q``; empty when some color has odd multiplicity."""
    q = tuple(q)
    k = len(q)
    if k % 2 or any(v % 2 for v in Counter(q).values()):
        return []
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds enumeration cap {MAX_K}")
    by_color: dict[int, list[int]] = {}
    for pos, c in enumerate(q):
        by_color.setdefault(c, []).append(pos)

    out = []

    def rec(colors: list[int], acc: list) -> None:
        if not colors:
            out.append(ColoredWord(pairing_to_word(sorted(acc), k), q))
            return
        for pairs in _pairings(by_color[colors[0]]):
            rec(colors[1:], acc + pairs)

    rec(list(by_color), [])
    out.sort()
    return out


def colored_word_count(q: Sequence[int]) -> int:
    counts = Counter(q)
    if len(q) % 2 or any(v % 2 for v in counts.values()):
        return 0
    return math.prod(pair_count(v) for v in counts.values())


def is_valid_colored_word(w: ColoredWord) -> bool:
    """Letters pair within a color and the letters are canonical."""
    if len(w.letters) != len(w.colors) or not is_pair_matched(w.letters):
        return False
    if canonicalize(w.letters) != tuple(w.letters):
        return False
    color_of: dict = {}
    for a, c in zip(w.letters, w.colors):
        if color_of.setdefault(a, c) != c:
            return False
    return True


def fits_monomial(w: ColoredWord, q: Sequence[int]) -> bool:
    return is_valid_colored_word(w) and tuple(w.colors) == tuple(q)


def drop_colors(w: ColoredWord) -> Word:
    return tuple(w.letters)


def is_catalan(w: Sequence) -> bool:
    """Iterated deletion of adjacent equal pairs empties the word."""
    stack: list = []
    for x in w:
        if stack and stack[-1] == x:
            stack.pop()
        else:
            stack.append(x)
    return not stack


def is_colored_catalan(w: ColoredWord) -> bool:
    return is_catalan(list(zip(w.letters, w.colors)))


def is_symmetric(w: Sequence) -> bool:
    """Every letter sits once at an odd and once at an even position."""
    parity: dict = {}
    for pos, x in enumerate(w, start=1):
        parity.setdefault(x, []).append(pos % 2)
    return all(sorted(v) == [0, 1] for v in parity.values())


def is_colored_symmetric(w: ColoredWord) -> bool:
    return is_symmetric(list(zip(w.letters, w.colors)))


def symmetry_profile(q: Sequence[int]) -> dict[int, tuple[int, int]]:
    """Map color -> (even-position count, odd-position count)."""
    prof: dict[int, list[int]] = {}
    for pos, c in enumerate(q, start=1):
        e_o = prof.setdefault(c, [0, 0])
        e_o[pos % 2] += 1
    return {c: (v[0], v[1]) for c, v in sorted(prof.items())}


def is_symmetric_monomial(q: Sequence[int]) -> bool:
    return all(e == o for e, o in symmetry_profile(q).values())


def noncrossing_pairings(k: int) -> list[tuple[tuple[int, int], ...]]:
    """Noncrossing perfect matchings of ``{1..k}`` as sorted tuples of pairs."""
    if k % 2 or k < 0:
        raise ValueError(f"k must be even, got {k}")
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds enumeration cap {MAX_K}")

    def rec(lo: int, hi: int):
        # matchings of lo..hi inclusive; 1 pairs with some m so the inside and outside stay separate
        if lo > hi:
            yield ()
            return
        for m in range(lo + 1, hi + 1, 2):
            for inner in rec(lo + 1, m - 1):
                for outer in rec(m + 1, hi):
                    yield ((lo, m),) + inner + outer

    return sorted(tuple(sorted(p)) for p in rec(1, k))


def catalan_number(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)
