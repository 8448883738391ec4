"""Near- and far-circle summation apparatus.

The central object is an oscillatory double sum-integral over lattice pairs
(m, n) in a box around the circle m^2 + n^2 = t: an angular integral with a
smooth bump cutoff, integrated against r^(-1/2) over r in [1, R].  Two
evaluation modes are kept deliberately independent:

* ``direct``: honest quadrature of the angular integral (the radial
  integral collapses to Fresnel-integral closed forms);
* ``reduced``: the stationary-phase leading form, with the radial cosine
  integral evaluated through cosine-integral special values.

The module also carries the eta-independent shifted-cosine functional and
the boundedness check tying the sawtooth sum along the circle to the
counting discrepancy (pi t - P(t))/8.

The sawtooth convention here is the classical one (-1/2 at integers)
throughout, matching the one-dimensional summation formula the analysis
rests on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import fresnel

from .counting import count_lattice
from .geometry import isqrt
from .quadrature import integrate_1d
from .special import cosine_over_r_integral, sawtooth_floor

_SUPPORT = (math.pi / 8.0, 3.0 * math.pi / 4.0)


@dataclass(frozen=True)
class SplitParams:
    """Near/far split parameters for a given t.

    tau = floor(t^eta) is the near-zone half-width; alpha = floor(sqrt(t/2))
    the column range; the summation box runs over m in [0, alpha] and
    n in [ceil(sqrt(t)/2), floor(2 sqrt(t))].
    """
    t: int
    eta: float

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if not 0.0 < self.eta <= 0.125:
            raise ValueError("eta must lie in (0, 1/8]")

    @property
    def tau(self) -> int:
        return int(math.floor(self.t ** self.eta))

    @property
    def alpha(self) -> int:
        return isqrt(2 * self.t) // 2

    @property
    def n_range(self) -> tuple[int, int]:
        lo = isqrt(self.t // 4)
        while 4 * lo * lo < self.t:
            lo += 1
        return lo, isqrt(4 * self.t)


@dataclass(frozen=True)
class NearFarReport:
    t: int
    R: int
    E_direct: float | None
    E_reduced: float
    L_value: float | None
    psi_sum: float
    pick_residual: float


def default_r_cutoff(t: int, epsilon: float = 0.05) -> int:
    """Radial cutoff floor(t^(1/4 + epsilon)), at least 2."""
    return max(2, int(math.floor(t ** (0.25 + epsilon))))


def bump(theta):
    """Smooth bump: 1 on [pi/4, pi/2], 0 outside (pi/8, 3pi/4), C-infinity."""
    th = np.asarray(theta, dtype=float)
    scalar = th.ndim == 0
    th = np.atleast_1d(th)
    if np.any((th < 0) | (th > math.pi)):
        raise ValueError("theta must lie in [0, pi]")

    def smoothstep(u):
        # 0 for u <= 0, 1 for u >= 1, exp-glued in between
        u = np.clip(u, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            a = np.where(u > 0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
            b = np.where(u < 1, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
        return a / (a + b)

    rise = smoothstep((th - math.pi / 8.0) / (math.pi / 8.0))
    fall = smoothstep((3.0 * math.pi / 4.0 - th) / (math.pi / 4.0))
    out = rise * fall
    return float(out[0]) if scalar else out.reshape(np.shape(theta))


def _phase_offset(m: int, n: int, t: int):
    """w(theta) = sqrt(t) csc + m cot - n and its angular frequency bound."""
    rt = math.sqrt(t)

    def w(th):
        s = np.sin(th)
        return rt / s + m * np.cos(th) / s - n

    csc_max = 1.0 / math.sin(_SUPPORT[0])
    cot_max = 1.0 / math.tan(_SUPPORT[0])
    dw_max = rt * csc_max * cot_max + m * csc_max ** 2
    return w, dw_max


def angular_integral(r: float, m: int, n: int, t: int, mode: str = "direct") -> float:
    """One radial slice of the near-circle expression.

    direct: quadrature of r^(-1/2) v(theta) sin^(1/2) cos(theta)
    cos(2 pi (r w(theta) - 1/8)) over the bump support.
    stationary: the leading stationary-phase value
    m sqrt(t - m^2) / (r t^(5/4)) cos(2 pi r (sqrt(t-m^2) - n)).
    """
    if not 1 <= n:
        raise ValueError("n must be >= 1")
    if m < 0 or m * m > t:
        raise ValueError("need 0 <= m <= sqrt(t)")
    if r < 1:
        raise ValueError("r must be >= 1")
    if mode == "stationary":
        root = math.sqrt(t - m * m)
        return m * root / (r * t ** 1.25) * math.cos(2.0 * math.pi * r * (root - n))
    if mode != "direct":
        raise ValueError("mode must be 'direct' or 'stationary'")
    w, dw_max = _phase_offset(m, n, t)

    def f(th):
        s = np.sin(th)
        return (bump(th) * np.sqrt(s) * np.cos(th)
                * np.cos(2.0 * math.pi * (r * w(th) - 0.125)))

    res = integrate_1d(f, _SUPPORT[0], _SUPPORT[1], 1e-10,
                       freq_hint=r * dw_max + 0.5)
    return float(res.value.real) / math.sqrt(r)


def _sqrt_cos_radial(w, R: float):
    """Closed form of int_1^R r^(-1/2) cos(2 pi (r w - 1/8)) dr, vectorized.

    Substituting u = sqrt(r) turns the integrand into a Fresnel one;
    C(z) + S(z) handles w > 0 and C(z) - S(z) handles w < 0.
    """
    w = np.asarray(w, dtype=float)
    aw = np.abs(w)
    out = np.empty_like(w)
    tiny = aw < 1e-9
    out[tiny] = math.sqrt(2.0) * (math.sqrt(R) - 1.0)
    big = ~tiny
    if np.any(big):
        wa = aw[big]
        z_hi = 2.0 * np.sqrt(wa * R)
        z_lo = 2.0 * np.sqrt(wa)
        s_hi, c_hi = fresnel(z_hi)
        s_lo, c_lo = fresnel(z_lo)
        plus = (c_hi + s_hi) - (c_lo + s_lo)
        minus = (c_hi - s_hi) - (c_lo - s_lo)
        val = np.where(w[big] > 0, plus, minus) / np.sqrt(2.0 * wa)
        out[big] = val
    return float(out) if out.ndim == 0 else out


def _box_pairs(t: int):
    """(m, n) pairs of the summation box with m >= 1 (the 1/(mn) weight
    rules out the m = 0 column)."""
    params = SplitParams(t, 0.1)
    n_lo, n_hi = params.n_range
    return [(m, n) for m in range(1, params.alpha + 1)
            for n in range(n_lo, n_hi + 1)]


def near_circle_sum(t: int, R: int | None = None, mode: str = "direct") -> float:
    """The near-circle double sum over the box, radially integrated to R.

    direct mode sums (t/(m n)) times the angular integral with the radial
    factor folded in through Fresnel closed forms; reduced mode sums the
    stationary-phase leading terms with radial cosine integrals.
    """
    t = int(t)
    if t < 1:
        raise ValueError("t must be >= 1")
    if R is None:
        R = default_r_cutoff(t)
    if mode == "direct" and t > 100:
        raise ValueError("direct mode is desk-scale only (t <= 100)")
    if mode == "reduced" and t > 10 ** 6:
        raise ValueError("reduced mode limited to t <= 1e6")
    pairs = _box_pairs(t)
    if not pairs:
        return 0.0
    if mode == "reduced":
        terms = []
        for m, n in pairs:
            root = math.sqrt(t - m * m)
            amp = root / (t ** 0.25 * n)
            terms.append(amp * cosine_over_r_integral(root - n, float(R)))
        return math.fsum(terms)
    if mode != "direct":
        raise ValueError("mode must be 'direct' or 'reduced'")
    terms = []
    for m, n in pairs:
        w, dw_max = _phase_offset(m, n, t)

        def f(th):
            s = np.sin(th)
            return (bump(th) * np.sqrt(s) * np.cos(th)
                    * _sqrt_cos_radial(w(th), float(R)))

        res = integrate_1d(f, _SUPPORT[0], _SUPPORT[1], 1e-9,
                           freq_hint=R * dw_max + 0.5)
        terms.append(t / (m * n) * float(res.value.real))
    return math.fsum(terms)


def circle_phase_sum(t: int, R: int, mu_max: int, tol: float = 1e-8) -> float:
    """The eta-independent shifted-cosine functional.

    sum over nonzero p, q in [-R, R] and |mu| <= mu_max of
    (1/|q|) int_0^alpha cos(2 pi ((p + mu Q) x + q sqrt(t - x^2))) dx,
    with Q = 2R + 1.  Takes no eta argument by construction.
    """
    t = int(t)
    if t < 1 or t > 10 ** 4:
        raise ValueError("t must lie in [1, 1e4]")
    Q = 2 * R + 1
    if not 0 <= mu_max <= Q * Q:
        raise ValueError("mu_max must lie in [0, Q^2]")
    alpha = isqrt(2 * t) // 2
    if alpha == 0:
        return 0.0
    rt = float(t)
    terms = []
    mus = list(range(-mu_max, mu_max + 1))
    for q in range(1, R + 1):          # q and -q contribute equally in pairs
        for p in range(-R, R + 1):
            if p == 0:
                continue
            for mu in mus:
                a = p + mu * Q

                def f(x, _a=a, _q=q):
                    return np.cos(2.0 * np.pi * (_a * x + _q * np.sqrt(np.maximum(rt - x * x, 0.0))))

                res = integrate_1d(f, 0.0, float(alpha), tol,
                                   freq_hint=abs(a) + q)
                terms.append(2.0 * float(res.value.real) / q)
    return math.fsum(terms)


def phase_integral(t: int, p: int, q: int, tol: float = 1e-10) -> float:
    """int_0^alpha cos(2 pi (p x + q sqrt(t - x^2))) dx (single term)."""
    alpha = isqrt(2 * t) // 2
    rt = float(t)

    def f(x):
        return np.cos(2.0 * np.pi * (p * x + q * np.sqrt(np.maximum(rt - x * x, 0.0))))

    return float(integrate_1d(f, 0.0, float(alpha), tol,
                              freq_hint=abs(p) + abs(q)).value.real)


def sawtooth_circle_sum(t: int) -> float:
    """sum_{m=1..alpha} of the classical sawtooth at sqrt(t - m^2).

    Perfect squares are detected exactly, where the sawtooth equals -1/2.
    """
    t = int(t)
    if t < 2:
        raise ValueError("t must be >= 2")
    alpha = isqrt(2 * t) // 2
    m = np.arange(1, alpha + 1, dtype=np.int64)
    v = t - m * m
    s = np.sqrt(v.astype(np.float64)).astype(np.int64)
    s = np.where(s * s > v, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= v, s + 1, s)
    perfect = s * s == v
    roots = np.sqrt(v.astype(np.float64))
    vals = np.where(perfect, -0.5, sawtooth_floor(roots))
    return float(vals.sum())


def circle_sum_residual(t: int) -> float:
    """sawtooth_circle_sum(t) - (pi t - P(t))/8; bounded in t."""
    p = count_lattice(t, "rows").count
    return sawtooth_circle_sum(t) - (math.pi * t - p) / 8.0


def nearfar_report(t: int, R: int | None = None, mu_max: int | None = None,
                   skip_direct: bool = False) -> NearFarReport:
    """Bundle of the module's quantities at one t, guards applied."""
    t = int(t)
    if R is None:
        R = default_r_cutoff(t)
    e_direct = None
    if t <= 100 and not skip_direct:
        e_direct = near_circle_sum(t, R, "direct")
    e_reduced = near_circle_sum(t, R, "reduced")
    l_value = None
    if t <= 10 ** 4:
        q = 2 * R + 1
        l_value = circle_phase_sum(t, R, mu_max if mu_max is not None else q * q)
    return NearFarReport(
        t=t, R=R, E_direct=e_direct, E_reduced=e_reduced, L_value=l_value,
        psi_sum=sawtooth_circle_sum(t),
        pick_residual=circle_sum_residual(t))
