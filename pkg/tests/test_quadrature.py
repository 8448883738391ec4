import math

import numpy as np
import pytest

from circlesum.quadrature import (QuadratureError, QuadratureResult,
                                  integrate_1d, integrate_disk)
from circlesum.special import bessel_j, sawtooth


class TestIntegrate1D:
    def test_linear(self):
        r = integrate_1d(lambda x: x, 0.0, 1.0, 1e-12)
        assert r.value.real == pytest.approx(0.5, abs=1e-12)
        assert r.error_estimate >= 0.0
        assert r.evaluations >= 1

    def test_cos_full_period(self):
        r = integrate_1d(np.cos, 0.0, 2 * math.pi, 1e-12)
        assert abs(r.value) < 1e-12

    def test_sawtooth_mean(self):
        r = integrate_1d(sawtooth, 0.0, 1.0, 1e-12, breakpoints=[0.5])
        assert abs(r.value) < 1e-12

    def test_polynomial_exactness(self):
        # the embedded 15-point rule must integrate degree <= 13 exactly
        r = integrate_1d(lambda x: x ** 13 - 3 * x ** 7 + x, -1.0, 2.0, 1e-9)
        exact = (2.0 ** 14 - 1.0) / 14 - 3 * (2.0 ** 8 - 1.0) / 8 + (4.0 - 1.0) / 2
        assert r.value.real == pytest.approx(exact, rel=1e-13)

    def test_deterministic_reevaluation(self):
        f = lambda x: np.sin(17.3 * x) / (1.1 + np.cos(x, dtype=float))
        a = integrate_1d(f, 0.0, 9.0, 1e-10, freq_hint=3.0)
        b = integrate_1d(f, 0.0, 9.0, 1e-10, freq_hint=3.0)
        assert a.value == b.value            # bit identical
        assert a.error_estimate == b.error_estimate
        assert a.evaluations == b.evaluations

    def test_complex_integrand(self):
        r = integrate_1d(lambda x: np.exp(2j * np.pi * x), 0.0, 0.25, 1e-12)
        exact = (np.exp(1j * np.pi / 2) - 1) / (2j * np.pi)
        assert r.value == pytest.approx(exact, abs=1e-12)

    def test_budget_exhaustion_raises(self):
        # a needle the budget cannot resolve at this tolerance
        f = lambda x: 1.0 / (1e-14 + np.abs(x - 0.3141592653589793))
        with pytest.raises(QuadratureError):
            integrate_1d(f, 0.0, 1.0, 1e-14, budget=3000)

    def test_validation(self):
        with pytest.raises(ValueError):
            integrate_1d(np.cos, 1.0, 0.0, 1e-8)
        with pytest.raises(ValueError):
            integrate_1d(np.cos, 0.0, 1.0, -1e-8)
        with pytest.raises(ValueError):
            QuadratureResult(1.0, -1.0, 3)
        with pytest.raises(ValueError):
            QuadratureResult(1.0, 0.0, 0)


class TestIntegrateDisk:
    def test_area(self):
        r = integrate_disk(lambda x, y: np.ones_like(x), 4.0, 1e-9)
        assert r.value.real == pytest.approx(4 * math.pi, abs=1e-9)

    def test_odd_integrand_vanishes(self):
        r = integrate_disk(lambda x, y: x, 9.0, 1e-9)
        assert abs(r.value) < 1e-9

    def test_wave_matches_bessel(self):
        r = integrate_disk(lambda x, y: np.exp(2j * np.pi * x), 1.0, 1e-8,
                           freq_hint=1.0)
        expected = bessel_j(1, 2 * math.pi)  # sqrt(t/1) J1(2 pi sqrt(1*1))
        assert r.value.real == pytest.approx(expected, abs=1e-6)
        assert abs(r.value.imag) < 1e-9

    def test_deterministic(self):
        g = lambda x, y: np.exp(2j * np.pi * (2 * x - y))
        a = integrate_disk(g, 3.0, 1e-8, freq_hint=math.sqrt(5.0))
        b = integrate_disk(g, 3.0, 1e-8, freq_hint=math.sqrt(5.0))
        assert a.value == b.value

    def test_validation(self):
        with pytest.raises(ValueError):
            integrate_disk(lambda x, y: x, 0.0, 1e-8)
