"""Generalised Gell-Mann generators of su(n).

The n^2 - 1 traceless Hermitian generators are indexed 1..n^2-1 and
normalised to tr(g_a g_b) = 2 delta_ab.  They are ordered by embedding
level: level m (2 <= m <= n) appends the 2(m-1) + 1 generators that involve
the m-th basis state, so indices (m-1)^2 .. m^2 - 1 hold

    sym(1, m), asym(1, m), ..., sym(m-1, m), asym(m-1, m), diag(m)

where sym(i, j) has ones at (i, j) and (j, i), asym(i, j) has -i at (i, j)
and +i at (j, i), and diag(m) = sqrt(2 / (d(d+1))) * diag(1, ..., 1, -d, 0,
..., 0) with d = m - 1 ones.  For n = 3 this is the standard Gell-Mann
ordering lambda_1..lambda_8.  Indices here are 1-based to match that
convention; matrix positions below are 0-based.
"""

from functools import lru_cache

import numpy as np


def decode(n, a):
    """Structure of generator a of su(n).

    Returns ("sym", i, j) or ("asym", i, j) with 1 <= i < j <= n, or
    ("diag", m, m) for the diagonal generator closing level m.
    """
    if not 1 <= a <= n * n - 1:
        raise ValueError(f"generator index {a} outside 1..{n * n - 1}")
    m = int(np.sqrt(a)) + 1          # level: (m-1)^2 <= a <= m^2 - 1
    if (m - 1) * (m - 1) > a:        # guard against sqrt rounding
        m -= 1
    elif m * m <= a:
        m += 1
    if a == m * m - 1:
        return ("diag", m, m)
    off = a - (m - 1) * (m - 1)
    i = off // 2 + 1
    return ("sym" if off % 2 == 0 else "asym", i, m)


def label(n, a):
    """Human-readable structure label, e.g. 'sym(1,4)' or 'diag(3)'."""
    kind, i, j = decode(n, a)
    return f"diag({j})" if kind == "diag" else f"{kind}({i},{j})"


@lru_cache(maxsize=None)
def _generator_cached(n, a):
    kind, i, j = decode(n, a)
    g = np.zeros((n, n), dtype=complex)
    if kind == "sym":
        g[i - 1, j - 1] = 1.0
        g[j - 1, i - 1] = 1.0
    elif kind == "asym":
        g[i - 1, j - 1] = -1.0j
        g[j - 1, i - 1] = 1.0j
    else:
        d = j - 1
        scale = np.sqrt(2.0 / (d * (d + 1)))
        for k in range(d):
            g[k, k] = scale
        g[d, d] = -d * scale
    g.setflags(write=False)
    return g


def generator(n, a):
    """Generator a of su(n) as an n x n complex array (fresh copy)."""
    return _generator_cached(n, a).copy()


def basis(n):
    """All n^2 - 1 generators stacked into an (n^2-1, n, n) array."""
    return np.stack([generator(n, a) for a in range(1, n * n)])
