"""Numpy implementations of the hot loops (used when the extension is absent).

All kernels work on the symmetric reduced game: every player invests the
share ``p_t`` of the endowment and contributes the rest, so nothing is kept.
The arithmetic order matches the compiled kernels step for step.
"""

import numpy as np

CHUNK = 1 << 18


def _accumulate(fractions, n_players, endowment, m0, rate):
    # fractions: (n_plans, n_periods)
    n_plans, n_periods = fractions.shape
    m = np.full(n_plans, m0, dtype=np.float64)
    total = np.zeros(n_plans, dtype=np.float64)
    for t in range(n_periods):
        inv = fractions[:, t] * endowment
        m = m + rate * inv
        c = endowment - inv
        total = total + ((endowment - inv - c) + m * (n_players * c))
    return total


def plan_payoffs(fractions, n_players, endowment, m0, rate):
    fractions = np.ascontiguousarray(fractions, dtype=np.float64)
    if fractions.ndim != 2:
        raise ValueError("fractions must be a 2-d array (plans x periods)")
    return _accumulate(fractions, n_players, endowment, m0, rate)


def switch_fractions(xs, n_periods):
    xs = np.asarray(xs, dtype=np.float64)
    a = np.floor(xs)
    f = xs - a
    t = np.arange(1, n_periods + 1, dtype=np.float64)[None, :]
    a = a[:, None]
    return np.where(t <= a, 1.0, np.where(t == a + 1, f[:, None], 0.0))


def switch_payoffs(xs, n_players, n_periods, endowment, m0, rate):
    return _accumulate(
        switch_fractions(xs, n_periods), n_players, endowment, m0, rate
    )


def _chunk_fractions(start, stop, levels, n_periods):
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((idx.size, n_periods), dtype=np.int64)
    for t in range(n_periods - 1, -1, -1):
        digits[:, t] = idx % levels
        idx //= levels
    return digits, digits / (levels - 1.0)


def exhaustive_best(levels, n_periods, n_players, endowment, m0, rate, tol):
    """Best plan over the full grid of ``levels`` shares per period.

    Plans are ordered lexicographically by their digit vectors; the first
    plan within ``tol`` of the global maximum wins.
    """
    total = levels ** n_periods
    best = -np.inf
    for start in range(0, total, CHUNK):
        _, frac = _chunk_fractions(start, min(start + CHUNK, total), levels, n_periods)
        best = max(best, float(_accumulate(frac, n_players, endowment, m0, rate).max()))
    for start in range(0, total, CHUNK):
        digits, frac = _chunk_fractions(
            start, min(start + CHUNK, total), levels, n_periods
        )
        pay = _accumulate(frac, n_players, endowment, m0, rate)
        hit = np.flatnonzero(pay >= best - tol)
        if hit.size:
            k = hit[0]
            return digits[k].copy(), float(pay[k])
    raise RuntimeError("no plan reached the maximum")  # unreachable
