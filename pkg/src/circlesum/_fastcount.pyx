# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels: exact lattice-point counts in disks.

Row counting uses an exact integer square root (floating seed plus integer
correction, valid through 2^63); the brute kernel scans n directly and
never takes a square root, so the two stay independent oracles.
"""

from libc.math cimport sqrtl

import numpy as np


cdef long long _isqrt(long long n) noexcept nogil:
    cdef long long r
    if n <= 0:
        return 0
    r = <long long> sqrtl(<long double> n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


def count_rows(long long t):
    """P(t) = sum over columns m of (2 isqrt(t - m^2) + 1)."""
    cdef long long M, total, m
    if t < 0:
        raise ValueError("t must be >= 0")
    M = _isqrt(t)
    total = 0
    with nogil:
        for m in range(-M, M + 1):
            total += 2 * _isqrt(t - m * m) + 1
    return total


def count_brute(long long t):
    """P(t) by direct inequality scanning, no square roots anywhere."""
    cdef long long total, m, n, v, cnt
    if t < 0:
        raise ValueError("t must be >= 0")
    total = 0
    with nogil:
        m = 0
        while m * m <= t:
            v = t - m * m
            cnt = 0
            n = 1
            while n * n <= v:
                cnt += 1
                n += 1
            # row m: n in [-cnt, cnt] -> 2 cnt + 1 points
            if m == 0:
                total += 2 * cnt + 1
            else:
                total += 2 * (2 * cnt + 1)
            m += 1
    return total


def count_rows_range(long long t0, long long t1, long long stride):
    """Array of P(t) for t = t0, t0+stride, ..., <= t1."""
    cdef long long n_vals, i, t, M, m, total
    if t0 < 0 or t1 < t0 or stride < 1:
        raise ValueError("need 0 <= t0 <= t1 and stride >= 1")
    n_vals = (t1 - t0) // stride + 1
    out_arr = np.empty(n_vals, dtype=np.int64)
    cdef long long[::1] out = out_arr
    with nogil:
        for i in range(n_vals):
            t = t0 + i * stride
            M = _isqrt(t)
            total = 0
            for m in range(-M, M + 1):
                total += 2 * _isqrt(t - m * m) + 1
            out[i] = total
    return out_arr


def r2_sieve(long long limit):
    """counts[k] = number of integer pairs with m^2 + n^2 = k, for k <= limit."""
    cdef long long m, n, v, w_m
    if limit < 0:
        raise ValueError("limit must be >= 0")
    out_arr = np.zeros(limit + 1, dtype=np.int64)
    cdef long long[::1] out = out_arr
    with nogil:
        m = 0
        while m * m <= limit:
            w_m = 1 if m == 0 else 2
            v = m * m
            n = 0
            while v + n * n <= limit:
                out[v + n * n] += w_m * (1 if n == 0 else 2)
                n += 1
            m += 1
    return out_arr
