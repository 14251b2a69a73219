import numpy as np
import pytest
from scipy import integrate, special

from ialink.analytic import ExpDist
from ialink.metrics import (
    BPSK,
    QPSK,
    empirical_ser,
    ergodic_rate,
    ergodic_rate_quad,
    exp1_scaled,
    kl_divergence,
    mean_sinr_ratio,
    ser,
    ser_bpsk_closed,
    sum_rate,
    unity_contour,
)


class TestExp1Scaled:
    def test_against_scipy_in_overlap(self):
        x = np.geomspace(0.01, 700.0, 200)
        ref = np.array([float(np.exp(min(v, 700)) * special.exp1(v)) if v <= 700 else np.nan for v in x])
        ours = exp1_scaled(x)
        ok = x <= 600
        assert np.allclose(ours[ok], ref[ok], rtol=1e-10)

    def test_large_argument_asymptote(self):
        x = 1e6
        # exp(x) E1(x) ~ 1/x - 1/x^2 + 2/x^3
        assert exp1_scaled(x) == pytest.approx(1 / x - 1 / x**2 + 2 / x**3, rel=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            exp1_scaled(0.0)


class TestSumRate:
    def test_zero_mean_limit(self):
        assert sum_rate([ExpDist(1e-9)]) == pytest.approx(0.0, abs=1e-8)

    def test_single_stream_unit_mean(self):
        # quadrature oracle of int log2(1+g) e^{-g} dg
        assert sum_rate([ExpDist(1.0)]) == pytest.approx(0.8603473823, abs=1e-9)

    def test_closed_form_vs_quadrature(self):
        for m in np.geomspace(1e-3, 1e4, 12):
            dist = ExpDist(float(m))
            assert ergodic_rate(dist) == pytest.approx(ergodic_rate_quad(dist), rel=1e-6)

    def test_full_multiplexing_slope(self):
        # 4 streams: the 30->40 dB slope approaches 4 bits per 3 dB.
        r30 = sum_rate([ExpDist(1e3)] * 4)
        r40 = sum_rate([ExpDist(1e4)] * 4)
        slope = (r40 - r30) / (10.0 / 3.0)
        assert slope == pytest.approx(4.0, rel=0.01)


class TestSer:
    def test_guessing_limit(self):
        assert ser(ExpDist(1e-9), BPSK) == pytest.approx(0.5, abs=1e-4)

    def test_unit_mean_closed_form(self):
        assert ser_bpsk_closed(1.0) == pytest.approx(0.1464466094, abs=1e-10)
        assert ser(ExpDist(1.0), BPSK) == pytest.approx(0.1464466094, abs=1e-8)

    def test_closed_form_vs_quadrature_grid(self):
        for m in np.geomspace(0.01, 1e3, 10):
            assert ser(ExpDist(float(m)), BPSK) == pytest.approx(ser_bpsk_closed(m), abs=1e-8)

    def test_qpsk_between_zero_and_one_and_decreasing(self):
        vals = [ser(ExpDist(m), QPSK) for m in (0.1, 1.0, 10.0, 100.0)]
        assert all(0 < v < 1 for v in vals)
        assert np.all(np.diff(vals) < 0)

    def test_error_floor_with_snr_cap(self):
        beta, k = 0.1, 3
        cap = (1 - beta**2) / (beta**2 * k)
        floor = ser_bpsk_closed(cap)
        vals = [
            ser(ExpDist((1 - beta**2) / (beta**2 * k + 1 / g)), BPSK)
            for g in (1e2, 1e4, 1e6)
        ]
        assert np.all(np.diff(vals) < 0)
        assert vals[-1] == pytest.approx(floor, rel=1e-3)
        assert floor > 0

    def test_empirical_ser_matches_analytic(self, rng):
        m = 4.0
        samples = rng.exponential(m, size=200000)
        assert empirical_ser(samples, BPSK) == pytest.approx(ser_bpsk_closed(m), rel=0.02)


class TestKlDivergence:
    def test_self_consistency(self, rng):
        dist = ExpDist(5.0)
        samples = rng.exponential(5.0, size=100000)
        assert kl_divergence(samples, dist, grid_size=100) < 0.01

    def test_nonnegative(self, rng):
        for m_true, m_model in ((1.0, 2.0), (3.0, 0.5), (2.0, 2.0)):
            samples = rng.exponential(m_true, size=20000)
            assert kl_divergence(samples, ExpDist(m_model)) >= 0.0

    def test_scale_invariance(self, rng):
        samples = rng.exponential(2.0, size=50000)
        a = kl_divergence(samples, ExpDist(1.5))
        b = kl_divergence(7.0 * samples, ExpDist(7.0 * 1.5))
        assert a == pytest.approx(b, rel=1e-9)

    def test_requires_enough_samples(self, rng):
        with pytest.raises(ValueError):
            kl_divergence(rng.exponential(1.0, size=500), ExpDist(1.0))

    def test_detects_mismatch(self, rng):
        samples = rng.exponential(1.0, size=100000)
        close = kl_divergence(samples, ExpDist(1.0))
        far = kl_divergence(samples, ExpDist(3.0))
        assert far > 10 * close


class TestMeanSinrRatio:
    def test_perfect_uncorrelated_is_stream_fraction(self):
        assert mean_sinr_ratio(0.0, 100.0, 1, 2, 1.0, 3.0, 1.0) == pytest.approx(0.5)

    def test_three_user_case(self):
        # K=3, N=2, d=1, beta=0, alpha=0: IA wins by the stream fraction.
        val = mean_sinr_ratio(0.0, 50.0, 1, 2, 1.0, 3.0, 1.0)
        assert val == pytest.approx(0.5)

    def test_definitional_identity(self):
        from ialink.analytic import sinr_dist_imperfect, sinr_dist_sm
        from ialink.channel import exp_correlation_matrix

        rt = exp_correlation_matrix(0.4, 2)
        beta, gamma, d, n = 0.17, 250.0, 1, 2
        sigma2, cal_i = 1.21, 2.6
        sigma2_sm = float(np.diag(np.linalg.inv(rt)).real[0])
        ratio = mean_sinr_ratio(beta, gamma, d, n, sigma2, cal_i, sigma2_sm)
        ia_mean = sinr_dist_imperfect(gamma, d, beta, sigma2, cal_i).mean
        sm_mean = sinr_dist_sm(gamma, n, beta, rt)[0].mean
        assert ratio * ia_mean == pytest.approx(sm_mean, abs=1e-12 * sm_mean)


class TestUnityContour:
    def test_constant_surface_empty(self):
        alphas = np.linspace(0, 1, 5)
        betas = np.linspace(0, 1, 4)
        assert unity_contour(alphas, betas, np.full((5, 4), 0.7)) == []

    def test_monotone_surface_single_line(self):
        alphas = np.linspace(0.0, 1.0, 21)
        betas = np.linspace(0.0, 1.0, 21)
        surface = 0.5 + alphas[:, None] + 0.0 * betas[None, :]
        lines = unity_contour(alphas, betas, surface)
        assert len(lines) == 1
        line = lines[0]
        # crossing happens where 0.5 + alpha = 1
        assert np.allclose(line[:, 0], 0.5, atol=1e-9)
        assert line[:, 1].min() == pytest.approx(0.0)
        assert line[:, 1].max() == pytest.approx(1.0)

    def test_interpolated_crossing_position(self):
        alphas = np.array([0.0, 1.0])
        betas = np.array([0.0, 1.0])
        surface = np.array([[0.8, 0.8], [1.2, 1.2]])  # crosses at alpha = 0.5
        lines = unity_contour(alphas, betas, surface)
        assert len(lines) == 1
        assert np.allclose(lines[0][:, 0], 0.5)
