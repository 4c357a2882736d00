"""Compiled depth-first circuit counter.

Link values are encoded as int64: Wigner ``(a, b)`` becomes ``a * (n + 1) + b``.
Pattern codes follow ``Pattern.code``.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def link_code(code, i, j, n):
    if code == 0:
        if i <= j:
            return i * (n + 1) + j
        return j * (n + 1) + i
    if code == 1:
        return abs(i - j)
    if code == 2:
        return i + j
    if code == 3:
        return (i + j) % n
    d = abs(i - j)
    return min(d, n - d)


@njit(cache=True, nogil=True)
def inverse_into(code, i, t, n, out):
    """Write the solutions j of link(i, j) == t into ``out``; return how many."""
    m = 0
    if code == 0:
        a = t // (n + 1)
        b = t % (n + 1)
        if i == a:
            out[0] = b
            m = 1
        elif i == b:
            out[0] = a
            m = 1
    elif code == 1:
        if i - t >= 1:
            out[m] = i - t
            m += 1
        if t != 0 and i + t <= n:
            out[m] = i + t
            m += 1
    elif code == 2:
        j = t - i
        if 1 <= j <= n:
            out[0] = j
            m = 1
    elif code == 3:
        if 0 <= t < n:
            j = (t - i) % n
            if j == 0:
                j = n
            out[0] = j
            m = 1
    else:
        for s in range(4):
            if s == 0:
                j = i - t
            elif s == 1:
                j = i + t
            elif s == 2:
                j = i - (n - t)
            else:
                j = i + (n - t)
            if j < 1 or j > n:
                continue
            d = abs(i - j)
            if min(d, n - d) != t:
                continue
            dup = False
            for r in range(m):
                if out[r] == j:
                    dup = True
            if not dup:
                out[m] = j
                m += 1
    return m


@njit(cache=True, nogil=True)
def count_circuits_dfs(code, n, letters, first, n_letters, strict, letter_color):
    """Number of circuits of ``{1..n}`` realizing a pair-matched word.

    ``letters`` holds 0-based canonical letters per position; ``first[p]`` marks
    the first occurrence of ``letters[p]``. In strict mode two distinct letters
    may not share a link value when ``letter_color`` gives them the same color
    (all zeros for an uncolored word). Position ``p`` (0-based) is the
    edge ``(pi[p], pi[p + 1])``. The last position is always a repeat, so it is
    settled by the closure test alone.

    The reflection i -> n + 1 - i maps link values injectively for every
    pattern, so only starting vertices up to the middle are searched.
    """
    k = letters.shape[0]
    pi = np.zeros(k + 1, np.int64)
    lval = np.zeros(n_letters, np.int64)
    cand = np.zeros((k + 1, 4), np.int64)
    ncand = np.zeros(k + 1, np.int64)
    ptr = np.zeros(k + 1, np.int64)
    closure = np.zeros(4, np.int64)
    total = 0
    for p0 in range(1, (n + 1) // 2 + 1):
        weight = 1 if 2 * p0 == n + 1 else 2
        pi[0] = p0
        # level v assigns pi[v] through edge v - 1
        v = 1
        ptr[1] = 0
        if not first[0]:
            ncand[1] = inverse_into(code, pi[0], lval[letters[0]], n, cand[1])
        while v >= 1:
            e = v - 1
            a = letters[e]
            if first[e]:
                if ptr[v] >= n:
                    v -= 1
                    continue
                ptr[v] += 1
                x = ptr[v]
                t = link_code(code, pi[e], x, n)
                if strict:
                    clash = False
                    for b in range(a):
                        if lval[b] == t and letter_color[b] == letter_color[a]:
                            clash = True
                            break
                    if clash:
                        continue
                lval[a] = t
            else:
                if ptr[v] >= ncand[v]:
                    v -= 1
                    continue
                x = cand[v, ptr[v]]
                ptr[v] += 1
            pi[v] = x
            if v == k - 1:
                m = inverse_into(code, x, lval[letters[k - 1]], n, closure)
                for r in range(m):
                    if closure[r] == p0:
                        total += weight
                continue
            v += 1
            ptr[v] = 0
            e = v - 1
            if not first[e]:
                ncand[v] = inverse_into(code, pi[e], lval[letters[e]], n, cand[v])
    return total
