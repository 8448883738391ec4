"""Special functions used throughout the package.

Covers the sawtooth x - floor(x) - 1/2 and its periodic-Bernoulli
antiderivatives (closed forms and truncated Fourier series), Bessel J0/J1,
the sine and cosine integrals, and Dirichlet-kernel partial sums.

Two sawtooth conventions coexist on purpose and are exposed as separate
functions: ``sawtooth`` vanishes at integers (the symmetric value used by
the planar summation formula), ``sawtooth_floor`` equals -1/2 there (the
value used by the classical one-dimensional Euler-Maclaurin formula).
Callers must pick explicitly; nothing switches between them by heuristic.

All functions are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

EULER_GAMMA = 0.5772156649015329

# x counts as an integer when within this distance of one; all call sites
# feed either exact integers or values bounded away from integers.
INTEGER_TOL = 2.0 ** -40


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, (arr.ndim == 0)


def sawtooth(x):
    """x - floor(x) - 1/2, with value exactly 0 at (near-)integers."""
    arr, scalar = _as_array(x)
    frac = arr - np.floor(arr)
    out = frac - 0.5
    near_int = np.minimum(frac, 1.0 - frac) <= INTEGER_TOL
    out = np.where(near_int, 0.0, out)
    return float(out) if scalar else out


def sawtooth_floor(x):
    """x - floor(x) - 1/2 with no integer exception (equals -1/2 at integers)."""
    arr, scalar = _as_array(x)
    out = arr - np.floor(arr) - 0.5
    return float(out) if scalar else out


def sawtooth_fourier(x, n_terms: int):
    """Truncated Fourier series of the sawtooth: -(1/pi) sum sin(2 pi n x)/n."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    arr, scalar = _as_array(x)
    n = np.arange(1, n_terms + 1)
    # outer product over harmonics; arr may be any shape
    phases = 2.0 * np.pi * np.multiply.outer(arr, n)
    out = -(np.sin(phases) / n).sum(axis=-1) / np.pi
    return float(out) if scalar else out


@lru_cache(maxsize=None)
def _bernoulli_numbers(k: int) -> tuple[Fraction, ...]:
    """B_0..B_k with the B_1 = -1/2 convention, exact rationals."""
    bern = [Fraction(1)]
    for m in range(1, k + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += Fraction(math.comb(m + 1, j)) * bern[j]
        bern.append(-acc / (m + 1))
    return tuple(bern)


@lru_cache(maxsize=None)
def _bernoulli_poly_coeffs(k: int) -> np.ndarray:
    """Coefficients of B_k(x)/k! in descending powers, as floats."""
    bern = _bernoulli_numbers(k)
    coeffs = [Fraction(math.comb(k, j)) * bern[j] for j in range(k + 1)]
    kfac = math.factorial(k)
    return np.array([float(c) / kfac for c in coeffs])


def periodic_bernoulli(x, k: int):
    """The k-th periodic Bernoulli function B_k({x})/k!.

    Successive antiderivatives of the sawtooth, each periodic with mean zero
    over a period.  k = 1 delegates to ``sawtooth`` (zero at integers); the
    functions are continuous for k >= 2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return sawtooth(x)
    arr, scalar = _as_array(x)
    frac = arr - np.floor(arr)
    out = np.polyval(_bernoulli_poly_coeffs(k), frac)
    return float(out) if scalar else out


def periodic_bernoulli_fourier(x, k: int, n_terms: int):
    """Fourier partial sum of periodic_bernoulli(x, k), k >= 2.

    The series runs over positive harmonics p with a factor 2 from pairing
    e(px) with e(-px); this normalization reproduces the closed form
    (e.g. value 1/12 at x = 0 for k = 2).
    """
    if k < 2:
        raise ValueError("k must be >= 2 (use sawtooth_fourier for k = 1)")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    arr, scalar = _as_array(x)
    p = np.arange(1, n_terms + 1)
    phases = 2.0 * np.pi * np.multiply.outer(arr, p)
    if k % 2 == 0:
        j = k // 2
        coef = (-1.0) ** (j - 1) * 2.0 / (2.0 * np.pi) ** k
        out = coef * (np.cos(phases) / p.astype(float) ** k).sum(axis=-1)
    else:
        j = (k + 1) // 2
        coef = (-1.0) ** j * 2.0 / (2.0 * np.pi) ** k
        out = coef * (np.sin(phases) / p.astype(float) ** k).sum(axis=-1)
    return float(out) if scalar else out


# ----------------------------------------------------------------------
# Bessel functions J0, J1
# ----------------------------------------------------------------------

_BESSEL_SWITCH = 12.0
_SERIES_TERMS = 48
_ASYM_TERMS = 30


def _bessel_series(order: int, x: np.ndarray) -> np.ndarray:
    """Ascending power series; accurate for |x| <= ~14."""
    x2 = 0.25 * x * x
    term = np.ones_like(x) if order == 0 else 0.5 * x
    total = term.copy()
    for m in range(1, _SERIES_TERMS):
        term = term * (-x2) / (m * (m + order))
        total += term
    return total


def _bessel_asymptotic(order: int, x: np.ndarray) -> np.ndarray:
    """Large-argument expansion with elementwise truncation at the smallest term."""
    mu = 4.0 * order * order
    inv = 1.0 / x
    p_sum = np.ones_like(x)
    q_sum = np.zeros_like(x)
    c = np.ones_like(x)          # running product c_m / x^m
    prev_mag = np.full_like(x, np.inf)
    active = np.ones_like(x, dtype=bool)
    for m in range(1, _ASYM_TERMS + 1):
        c = c * (mu - (2 * m - 1) ** 2) / (8.0 * m) * inv
        mag = np.abs(c)
        active = active & (mag < prev_mag)
        sign = -1.0 if (m // 2) % 2 else 1.0
        contrib = np.where(active, sign * c, 0.0)
        if m % 2 == 1:
            q_sum = q_sum + contrib
        else:
            p_sum = p_sum + contrib
        prev_mag = np.where(active, mag, prev_mag)
    chi = x - (2 * order + 1) * (np.pi / 4.0)
    amp = np.sqrt(2.0 / (np.pi * x))
    return amp * (p_sum * np.cos(chi) - q_sum * np.sin(chi))


def bessel_j(order: int, x):
    """Bessel function of the first kind, order 0 or 1, for x >= 0.

    Power series below x = 12, asymptotic expansion above, absolute accuracy
    around 1e-11 through x = 1e6.
    """
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    arr, scalar = _as_array(x)
    if np.any(arr < 0):
        raise ValueError("x must be >= 0")
    small = arr < _BESSEL_SWITCH
    out = np.empty_like(arr)
    if np.any(small):
        out[small] = _bessel_series(order, arr[small])
    if np.any(~small):
        out[~small] = _bessel_asymptotic(order, arr[~small])
    return float(out) if scalar else out


# ----------------------------------------------------------------------
# Sine and cosine integrals
# ----------------------------------------------------------------------

def _si_asym_fg(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Auxiliary asymptotic series f, g with Si = pi/2 - f cos - g sin."""
    inv2 = 1.0 / (x * x)
    f = np.ones_like(x)
    g = np.ones_like(x)
    tf = np.ones_like(x)
    tg = np.ones_like(x)
    active_f = np.ones_like(x, dtype=bool)
    active_g = np.ones_like(x, dtype=bool)
    for k in range(1, 20):
        tf_new = tf * (2 * k) * (2 * k - 1) * inv2
        active_f = active_f & (np.abs(tf_new) < np.abs(tf))
        f = f + np.where(active_f, (-1.0) ** k * tf_new, 0.0)
        tf = np.where(active_f, tf_new, tf)

        tg_new = tg * (2 * k + 1) * (2 * k) * inv2
        active_g = active_g & (np.abs(tg_new) < np.abs(tg))
        g = g + np.where(active_g, (-1.0) ** k * tg_new, 0.0)
        tg = np.where(active_g, tg_new, tg)
    return f / x, g / (x * x)


def _gl_panel_integral(func, a: float, b: float, n_panels: int, order: int = 20) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = func(pts.ravel()).reshape(pts.shape)
    return float(np.dot(half, vals @ weights))


def sine_integral(x):
    """Si(x) = integral of sin(u)/u from 0 to x.  Odd and bounded."""
    arr, scalar = _as_array(x)
    out = np.empty_like(arr)
    flat = arr.ravel()
    res = np.empty_like(flat)
    for i, xi in enumerate(flat):
        ax = abs(xi)
        if ax == 0.0:
            val = 0.0
        elif ax < 50.0:
            n_panels = max(4, int(math.ceil(ax / 2.0)))
            val = _gl_panel_integral(lambda u: np.sinc(u / np.pi), 0.0, ax, n_panels)
        else:
            xa = np.asarray([ax])
            f, g = _si_asym_fg(xa)
            val = float(np.pi / 2.0 - f[0] * math.cos(ax) - g[0] * math.sin(ax))
        res[i] = math.copysign(val, xi) if xi != 0 else 0.0
    out = res.reshape(arr.shape)
    return float(out) if scalar else out


_CIN_TERMS = 40


def cosine_integral(x):
    """Ci(x) for x > 0: EULER_GAMMA + ln x - Cin(x), asymptotic for large x."""
    arr, scalar = _as_array(x)
    if np.any(arr <= 0):
        raise ValueError("cosine_integral requires x > 0")
    out = np.empty_like(arr)
    small = arr <= 20.0
    if np.any(small):
        xs = arr[small]
        out[small] = EULER_GAMMA + np.log(xs) - _cin(xs)
    big = ~small
    if np.any(big):
        xb = arr[big]
        f, g = _si_asym_fg(xb)
        out[big] = f * np.sin(xb) - g * np.cos(xb)
    return float(out) if scalar else out


def _cin(x: np.ndarray) -> np.ndarray:
    """Cin(x) by power series: sum_{k>=1} (-1)^{k+1} x^{2k} / (2k (2k)!)."""
    x2 = x * x
    term = x2 / 4.0
    total = term.copy()
    for k in range(2, _CIN_TERMS):
        term = term * (-x2) / ((2 * k - 1) * (2 * k)) * ((2 * k - 2) / (2 * k))
        total += term
    return total


def cosine_over_r_integral(w, upper: float):
    """Integral of cos(2 pi r w)/r for r in [1, upper]; even in w.

    Evaluated through cosine-integral values, which stays stable in the
    logarithmic regime where w is tiny (the difference reduces to ln(upper)).
    """
    if upper < 1.0:
        raise ValueError("upper must be >= 1")
    arr, scalar = _as_array(w)
    aw = np.abs(arr)
    out = np.empty_like(aw)
    zero = aw <= 1e-300
    out[zero] = math.log(upper)
    nz = ~zero
    if np.any(nz):
        out[nz] = cosine_integral(2.0 * np.pi * upper * aw[nz]) - cosine_integral(2.0 * np.pi * aw[nz])
    return float(out) if scalar else out


# ----------------------------------------------------------------------
# Dirichlet-kernel partial sums
# ----------------------------------------------------------------------

def dirichlet_sum(x: float, R: int, j: int = 0) -> complex:
    """sum_{p=-R..R} p^j e(p x) for j in {0, 1} (p^0 = 1 including p = 0).

    j = 0 uses the closed-form sine ratio with argument reduction; j = 1 is
    the explicit derivative sum 2i sum_{p>=1} p sin(2 pi p x).
    """
    if R < 0:
        raise ValueError("R must be >= 0")
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    if j == 0:
        return complex(dirichlet_kernel(x, R), 0.0)
    p = np.arange(1, R + 1)
    s = float((p * np.sin(2.0 * np.pi * p * x)).sum())
    return complex(0.0, 2.0 * s)


def dirichlet_kernel(x, R: int):
    """sum_{p=-R..R} e(p x) = sin((2R+1) pi r)/sin(pi r), real-valued."""
    arr, scalar = _as_array(x)
    r = arr - np.round(arr)          # reduced argument in [-1/2, 1/2]
    q = 2 * R + 1
    out = np.empty_like(arr)
    near = np.abs(r) <= INTEGER_TOL
    out[near] = float(q)
    far = ~near
    if np.any(far):
        out[far] = np.sin(q * np.pi * r[far]) / np.sin(np.pi * r[far])
    return float(out) if scalar else out


def e2pi(x):
    """Complex exponential e(x) = exp(2 pi i x)."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float)) if np.ndim(x) else complex(np.exp(2j * np.pi * x))
