import math

import numpy as np
import pytest

from circlesum.counting import count_lattice
from circlesum.diskapprox import (TruncationParams, _area_psi_integral,
                                  _boundary_psi_integral, bessel_sum,
                                  disk_quadrature_parts, disk_quadrature_sum,
                                  disk_wave_integral, polygon_vs_disk,
                                  single_shift_family)
from circlesum.quadrature import integrate_disk


class TestTruncationParams:
    def test_defaults(self):
        p = TruncationParams(5)
        assert p.R == 2
        assert p.fourier_N == 25
        assert p.mu_max == p.nu_max == 25

    def test_validation(self):
        with pytest.raises(ValueError):
            TruncationParams(4)
        with pytest.raises(ValueError):
            TruncationParams(5, fourier_N=3)
        with pytest.raises(ValueError):
            TruncationParams(5, mu_max=26)


class TestDiskWaveIntegral:
    def test_origin_is_area(self):
        assert disk_wave_integral(0, 0, 7.0) == pytest.approx(7 * math.pi, abs=1e-14)

    def test_against_quadrature(self):
        quad = integrate_disk(lambda x, y: np.exp(2j * np.pi * x), 1.0, 1e-8,
                              freq_hint=1.0).value.real
        assert disk_wave_integral(1, 0, 1.0) == pytest.approx(quad, abs=1e-6)

    def test_symmetries(self):
        assert disk_wave_integral(2, 3, 5.0) == disk_wave_integral(3, 2, 5.0)
        assert disk_wave_integral(2, 3, 5.0) == disk_wave_integral(-2, -3, 5.0)

    def test_continuity_at_origin(self):
        for t in (1.0, 4.0, 10.0):
            for s in (1e-4, 5e-4, 1e-3):
                v = disk_wave_integral(s / math.sqrt(2), s / math.sqrt(2), t)
                assert abs(v - math.pi * t) <= 1e-3 * t

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            disk_wave_integral(10 ** 9, 0, 10 ** 6)


class TestBesselSum:
    def test_zero_wave_term_is_area(self):
        # the (p, q) = (0, 0) plain term of the main family
        assert disk_wave_integral(0, 0, 123.0) == pytest.approx(
            123 * math.pi, abs=1e-12)

    def test_report_fields(self):
        rep = bessel_sum(100, TruncationParams(3))
        assert rep.exact_P == count_lattice(100).count == 317
        assert rep.abs_error == abs(rep.approx_value - rep.exact_P)
        assert rep.normalized_error == pytest.approx(
            rep.abs_error * 3 / math.sqrt(100), rel=1e-12)

    def test_requires_q_below_sqrt_t(self):
        with pytest.raises(ValueError):
            bessel_sum(4, TruncationParams(5))

    def test_error_band_scaling(self):
        norms = [bessel_sum(t, TruncationParams(Q)).normalized_error
                 for t, Q in [(100, 3), (400, 5)]]
        assert max(norms) / min(norms) < 10.0

    def test_classical_checkpoint_scaling(self):
        # with Q near t^(1/6), the end-to-end error must scale no worse
        # than t^(1/3 + 0.05) across the scan grid
        pts = []
        for t in (100, 400, 1600, 6400):
            q = max(3, int(round(t ** (1.0 / 6.0))))
            if q % 2 == 0:
                q += 1
            err = bessel_sum(t, TruncationParams(q)).abs_error
            pts.append((t, err))
            assert err <= t ** (1.0 / 3.0 + 0.05)
        x = np.log([p[0] for p in pts])
        y = np.log([p[1] for p in pts])
        slope = ((x - x.mean()) * (y - y.mean())).sum() / ((x - x.mean()) ** 2).sum()
        assert slope <= 1.0 / 3.0 + 0.05
        print(f"classical-checkpoint empirical slope: {slope:.3f}")

    def test_truncation_sensitivity(self):
        # cutting the shifted sums at Q instead of Q^2 moves the value by
        # at most a fitted multiple of t^(1/4) ln t
        cs = []
        for t, Q in [(100, 3), (400, 5), (100, 5)]:
            full = bessel_sum(t, TruncationParams(Q)).approx_value
            short = bessel_sum(t, TruncationParams(Q, mu_max=Q, nu_max=Q)).approx_value
            cs.append(abs(full - short) / (t ** 0.25 * math.log(t)))
        c = max(cs)
        assert c < 1.0, f"fitted truncation constant {c}"
        print(f"fitted shift-truncation constant: {c:.4f}")


class TestQuadratureRoute:
    def test_finite_two_path_identity(self):
        # quadrature of the defining integrals with the depth-N Fourier
        # sawtooth equals the Bessel form with cutoffs N plus the
        # single-shift family; this is the exact finite algebra connecting
        # the two routes (the closed form alone omits the last family)
        t = 10
        params = TruncationParams(3, fourier_N=3, mu_max=3, nu_max=3)
        quad = disk_quadrature_sum(t, params, psi_mode="fourier")
        closed = bessel_sum(t, params).approx_value + single_shift_family(t, params)
        assert abs(quad - closed) <= 1e-3
        assert abs(quad - closed) <= 1e-6   # actual agreement is much tighter

    def test_per_term_closed_forms(self):
        # area and boundary integrals against their harmonic expansions
        t, Q, N = 10, 3, 9
        mus = np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)])
        p, q = 1, 1
        A = lambda a, b: disk_wave_integral(a, b, float(t))
        i1 = _area_psi_integral(t, p, q, Q, True, False, "fourier", N)
        lhs = (2j * np.pi * p / Q) * i1
        rhs = -(p / Q) * math.fsum(A(p + m * Q, q) / m for m in mus)
        assert abs(lhs - rhs) < 1e-9
        b1 = _boundary_psi_integral(t, p, q, Q, +1, False, "fourier", N)
        b2 = _boundary_psi_integral(t, p, q, Q, -1, False, "fourier", N)
        lhs = -(1.5 / Q) * (b1 - b2)
        rhs = 1.5 * math.fsum(A(p + m * Q, q) for m in mus) \
            + (1.5 * p / Q) * math.fsum(A(p + m * Q, q) / m for m in mus)
        assert abs(lhs - rhs) < 1e-9

    def test_exact_psi_value_close_to_count(self):
        # the exact-sawtooth quadrature approximates P(t) at the
        # sqrt(t)/Q scale; fitted constant reported
        t, Q = 10, 3
        fq = disk_quadrature_sum(t, TruncationParams(Q), psi_mode="exact")
        p_exact = count_lattice(t).count
        c = abs(fq - p_exact) / (math.sqrt(t) / Q)
        assert p_exact == 37
        assert c < 10.0
        print(f"quadrature-route fitted error constant at (10,3): {c:.3f}")

    def test_imaginary_residue_vanishes(self):
        value, imag = disk_quadrature_parts(10, TruncationParams(3), "exact")
        assert abs(imag) <= 1e-9

    def test_guards(self):
        with pytest.raises(ValueError):
            disk_quadrature_sum(1000, TruncationParams(3))
        with pytest.raises(ValueError):
            disk_quadrature_sum(10, TruncationParams(3), psi_mode="bogus")


class TestPolygonVsDisk:
    def test_both_near_count_at_10_3(self):
        r = polygon_vs_disk(10, TruncationParams(3))
        p_exact = count_lattice(10).count
        scale = math.sqrt(10) / 3
        c1 = abs(r["polygon_value"] - p_exact) / scale
        c2 = abs(r["disk_value"] - p_exact) / scale
        assert max(c1, c2) < 10.0
        print(f"fitted constants vs exact count: polygon {c1:.2f}, disk {c2:.2f}")

    def test_ratio_bounded_on_small_grid(self):
        ratios = [polygon_vs_disk(t, TruncationParams(3))["ratio"]
                  for t in (10, 25)]
        c = max(ratios)
        assert all(r <= c for r in ratios) and math.isfinite(c)
        print(f"fitted polygon-vs-disk constant on small grid: {c:.3f}")

    def test_q1_rejected(self):
        # Q = 1 cannot even construct the cutoff parameters
        with pytest.raises(ValueError):
            TruncationParams(1)
