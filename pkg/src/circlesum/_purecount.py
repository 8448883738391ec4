"""Pure-python/numpy counting kernels, API-compatible with the compiled core.

Used automatically when the compiled extension is unavailable.  Row counting
vectorizes the integer square root as float sqrt plus an exact correction;
the brute kernel counts inequality hits per column with no square roots.
"""

from __future__ import annotations

import math

import numpy as np


def _isqrt_array(v: np.ndarray) -> np.ndarray:
    """Exact elementwise floor sqrt for non-negative int64 input."""
    s = np.sqrt(v.astype(np.float64)).astype(np.int64)
    s = np.where(s * s > v, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= v, s + 1, s)
    return s


def count_rows(t: int) -> int:
    if t < 0:
        raise ValueError("t must be >= 0")
    M = math.isqrt(t)
    m = np.arange(-M, M + 1, dtype=np.int64)
    return int((2 * _isqrt_array(t - m * m) + 1).sum())


def count_brute(t: int) -> int:
    if t < 0:
        raise ValueError("t must be >= 0")
    total = 0
    m = 0
    n_sq = None
    while m * m <= t:
        v = t - m * m
        if n_sq is None or n_sq[-1] < v:
            top = int(math.ceil(math.sqrt(max(v, 1)))) + 2
            n_sq = (np.arange(1, top + 1, dtype=np.int64)) ** 2
        cnt = int((n_sq <= v).sum())
        row = 2 * cnt + 1
        total += row if m == 0 else 2 * row
        m += 1
    return total


def count_rows_range(t0: int, t1: int, stride: int) -> np.ndarray:
    if t0 < 0 or t1 < t0 or stride < 1:
        raise ValueError("need 0 <= t0 <= t1 and stride >= 1")
    ts = np.arange(t0, t1 + 1, stride, dtype=np.int64)
    out = np.empty(ts.size, dtype=np.int64)
    for i, t in enumerate(ts):
        out[i] = count_rows(int(t))
    return out


def r2_sieve(limit: int) -> np.ndarray:
    if limit < 0:
        raise ValueError("limit must be >= 0")
    counts = np.zeros(limit + 1, dtype=np.int64)
    M = math.isqrt(limit)
    n = np.arange(0, M + 1, dtype=np.int64)
    n_sq = n * n
    for m in range(M + 1):
        v = m * m
        sums = v + n_sq[n_sq <= limit - v]
        w = np.full(sums.size, 2 if m else 1, dtype=np.int64)
        w[1:] *= 2                       # n > 0 contributes both signs
        np.add.at(counts, sums, w)
    return counts
