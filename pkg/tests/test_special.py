import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from circlesum.quadrature import integrate_1d
from circlesum.special import (bessel_j, cosine_integral,
                               cosine_over_r_integral, dirichlet_sum,
                               periodic_bernoulli, periodic_bernoulli_fourier,
                               sawtooth, sawtooth_floor, sawtooth_fourier,
                               sine_integral)


class TestSawtooth:
    def test_values(self):
        assert sawtooth(0.75) == 0.25
        assert sawtooth(3.0) == 0.0
        assert sawtooth(-0.25) == 0.25

    def test_integer_convention_split(self):
        # the two conventions differ exactly at integers
        assert sawtooth(7.0) == 0.0
        assert sawtooth_floor(7.0) == -0.5
        assert sawtooth_floor(7.25) == sawtooth(7.25) == -0.25

    @given(st.floats(0.001, 0.999), st.integers(-1000, 1000))
    @settings(max_examples=300)
    def test_periodicity(self, frac, n):
        assert sawtooth(frac + n) == pytest.approx(sawtooth(frac), abs=2e-10)

    def test_range(self, np_rng):
        x = np_rng.uniform(-50, 50, 2000)
        v = sawtooth(x)
        assert np.all(v >= -0.5) and np.all(v < 0.5)


class TestSawtoothFourier:
    def test_zeros(self):
        for n in (1, 5, 64):
            assert sawtooth_fourier(0.0, n) == 0.0
            assert sawtooth_fourier(0.5, n) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n_terms", [64, 256])
    def test_l1_gap(self, n_terms):
        # oracle: adaptive quadrature of the absolute gap over one period
        def gap(x):
            return np.abs(sawtooth_fourier(x, n_terms) - sawtooth(x))

        val = integrate_1d(gap, 0.0, 1.0, 1e-6, freq_hint=float(n_terms),
                           budget=8_000_000).value.real
        assert val <= 2.0 / n_terms


class TestPeriodicBernoulli:
    def test_order2_at_zero_against_quadrature_oracle(self):
        # oracle: psi_2(x) = int_0^x psi_1 + C with C fixed by mean zero,
        # so psi_2(0) = C = -int_0^1 int_0^x psi_1(u) du dx
        inner = lambda x: np.asarray(
            [integrate_1d(sawtooth, 0.0, float(xx), 1e-12,
                          breakpoints=[0.5]).value.real for xx in np.atleast_1d(x)])
        c = -integrate_1d(inner, 0.0, 1.0, 1e-9, breakpoints=[0.5]).value.real
        assert periodic_bernoulli(0.0, 2) == pytest.approx(c, abs=1e-8)
        assert periodic_bernoulli(0.0, 2) == pytest.approx(1.0 / 12.0, abs=1e-14)

    def test_mean_zero(self):
        for k in (2, 3, 4, 5):
            v = integrate_1d(lambda x, _k=k: periodic_bernoulli(x, _k),
                             0.0, 1.0, 1e-12).value.real
            assert abs(v) < 1e-11

    def test_order3_at_zero_against_quadrature_oracle(self):
        # psi_3(0) = 0: verify by integrating psi_2 from 0 (mean-zero constant
        # vanishes since int_0^1 psi_3 = 0 and psi_3 is odd about 1/2)
        v = integrate_1d(lambda x: periodic_bernoulli(x, 2), 0.0, 1.0, 1e-12).value.real
        assert periodic_bernoulli(0.0, 3) == 0.0
        assert abs(v) < 1e-11

    def test_derivative_chain(self, np_rng):
        h = 1e-5
        x = np_rng.uniform(0.05, 0.95, 40)
        for k in (3, 4, 5):
            fd = (periodic_bernoulli(x + h, k) - periodic_bernoulli(x - h, k)) / (2 * h)
            assert np.max(np.abs(fd - periodic_bernoulli(x, k - 1))) < 1e-8

    def test_delegates_to_sawtooth_at_k1(self):
        assert periodic_bernoulli(2.0, 1) == 0.0
        assert periodic_bernoulli(0.75, 1) == 0.25


class TestPeriodicBernoulliFourier:
    def test_order2_values(self):
        assert periodic_bernoulli_fourier(0.0, 2, 10 ** 4) == pytest.approx(
            1.0 / 12.0, abs=1e-4)
        assert periodic_bernoulli_fourier(0.5, 2, 10 ** 4) == pytest.approx(
            -1.0 / 24.0, abs=1e-4)

    def test_odd_orders_vanish_at_zero(self):
        for k in (3, 5, 7):
            assert periodic_bernoulli_fourier(0.0, k, 100) == 0.0

    def test_convergence_rate(self, np_rng):
        # |fourier - closed| <= c N^(1-k); report the fitted constant
        x = np_rng.uniform(0.0, 1.0, 50)
        for k in (2, 3, 4):
            cs = []
            for n in (8, 16, 32, 64):
                gap = np.max(np.abs(periodic_bernoulli_fourier(x, k, n)
                                    - periodic_bernoulli(x, k)))
                cs.append(gap * n ** (k - 1))
            c = max(cs)
            assert c < 5.0, f"k={k}: fitted c = {c}"


class TestBessel:
    def test_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0

    def test_j1_100_integral_oracle(self):
        # J1(z) = (1/pi) int_0^pi cos(theta - z sin(theta)) dtheta
        oracle = integrate_1d(lambda th: np.cos(th - 100.0 * np.sin(th)),
                              0.0, math.pi, 1e-12, freq_hint=17.0).value.real / math.pi
        assert bessel_j(1, 100.0) == pytest.approx(oracle, abs=1e-8)
        assert abs(bessel_j(1, 100.0)) <= 1.0 / math.sqrt(100.0)

    def test_against_scipy_grid(self):
        x = np.concatenate([np.linspace(0.0, 30.0, 400),
                            np.geomspace(30.0, 1e6, 300)])
        assert np.max(np.abs(bessel_j(0, x) - sps.j0(x))) < 1e-10
        assert np.max(np.abs(bessel_j(1, x) - sps.j1(x))) < 1e-10

    def test_bounded_by_one(self, np_rng):
        x = np_rng.uniform(0, 1000, 3000)
        assert np.max(np.abs(bessel_j(0, x))) <= 1.0
        assert np.max(np.abs(bessel_j(1, x))) <= 1.0

    def test_rejects_bad_order_and_negative(self):
        with pytest.raises(ValueError):
            bessel_j(2, 1.0)
        with pytest.raises(ValueError):
            bessel_j(0, -1.0)


class TestSineIntegral:
    def test_zero(self):
        assert sine_integral(0.0) == 0.0

    def test_odd(self, np_rng):
        for x in np_rng.uniform(0.1, 200, 25):
            assert sine_integral(-x) == pytest.approx(-sine_integral(x), abs=1e-12)

    def test_si_pi(self):
        oracle = integrate_1d(lambda u: np.sinc(u / np.pi), 0.0, math.pi,
                              1e-12).value.real
        assert sine_integral(math.pi) == pytest.approx(oracle, abs=1e-9)
        assert sine_integral(math.pi) == pytest.approx(1.8519370, abs=1e-6)

    def test_bounded_by_si_pi(self, np_rng):
        peak = sine_integral(math.pi)
        x = np_rng.uniform(0, 500, 200)
        assert np.max(np.abs(sine_integral(x))) <= peak + 1e-12

    def test_against_scipy(self):
        for x in (0.3, 2.0, 20.0, 49.9, 50.1, 300.0, 1e4):
            assert sine_integral(x) == pytest.approx(float(sps.sici(x)[0]), abs=1e-9)


class TestCosineIntegral:
    def test_against_scipy(self):
        for x in (0.1, 1.0, 5.0, 19.9, 20.1, 45.0, 50.1, 777.0):
            assert cosine_integral(x) == pytest.approx(float(sps.sici(x)[1]), abs=1e-8)

    def test_radial_log_form(self, np_rng):
        # int_1^R cos(2 pi r w)/r dr against direct quadrature
        R = 6.0
        for w in [0.0, 1e-8, 0.23, 1.7, -1.7, 12.0]:
            closed = cosine_over_r_integral(w, R)
            quad = integrate_1d(lambda r: np.cos(2 * np.pi * r * w) / r, 1.0, R,
                                1e-12, freq_hint=abs(w) + 0.1).value.real
            assert closed == pytest.approx(quad, abs=1e-8), f"w={w}"

    def test_even_in_w(self):
        assert cosine_over_r_integral(0.37, 5.0) == cosine_over_r_integral(-0.37, 5.0)


class TestDirichletSum:
    def test_integer_x(self):
        assert dirichlet_sum(3.0, 5, 0) == pytest.approx(11.0 + 0.0j, abs=1e-12)

    def test_half_with_r1(self):
        # direct evaluation of e(-1/2) + 1 + e(1/2)
        direct = np.exp(-1j * np.pi) + 1 + np.exp(1j * np.pi)
        assert dirichlet_sum(0.5, 1, 0) == pytest.approx(direct, abs=1e-12)

    def test_vanishing_weighted_term_at_integer(self):
        assert dirichlet_sum(4.0, 7, 1) == pytest.approx(0.0 + 0.0j, abs=1e-9)

    @pytest.mark.parametrize("j", [0, 1])
    def test_bound_no_exceptions(self, j, np_rng):
        for _ in range(10_000):
            x = float(np_rng.uniform(0, 1))
            R = int(np_rng.integers(0 if j == 0 else 1, 101))
            q = 2 * R + 1
            s = abs(dirichlet_sum(x, R, j)) / q ** j
            dist = min(x, 1.0 - x)
            bound = min(q, 1.0 / dist) if dist > 0 else q
            assert s <= bound * (1 + 1e-12), (x, R, j)
