import numpy as np
import pytest
from scipy import stats

from ialink.channel import Scenario, exp_correlation_matrix, sample_channel_set, trial_rng
from ialink.linklevel import (
    DegenerateDrawError,
    beamforming_sinr,
    effective_channel,
    sinr_imperfect,
    sinr_imperfect_avg,
    sinr_perfect,
    sm_zf_sinr,
    sm_zf_sinr_avg,
    zf_equalizer,
)
from ialink.runner import run_ia_sweep, run_p2p_sweep
from ialink.solver import alternating_min, haar_basis


def _solved_instance(seed=0, alpha=0.0, beta=0.0, tol=1e-10):
    sc = Scenario(k=3, nt=2, nr=2, d=(1, 1, 1), alpha=alpha, beta=beta, seed=seed)
    ch = sample_channel_set(sc, trial_rng(seed, 0))
    sol = alternating_min(ch, sc.d, tol=tol, max_iter=20000, rng=trial_rng(seed, 1))
    assert sol.converged
    return sc, ch, sol


class TestEffectiveChannel:
    def test_full_stream_count_degenerates_to_direct_path(self, rng):
        h = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
        f = haar_basis(np.random.default_rng(0), (2, 2))
        c = np.zeros((2, 0), dtype=complex)
        assert np.allclose(effective_channel(h, f, c), h @ f)

    def test_right_block_gram_is_identity(self):
        _, ch, sol = _solved_instance(seed=1)
        heff = effective_channel(ch.obs_h[0, 0], sol.f[0], sol.c[0])
        right = heff[:, 1:]
        assert np.allclose(right.conj().T @ right, np.eye(1), atol=1e-12)

    def test_generic_position_census(self):
        svs = []
        for t in range(200):
            sc = Scenario(k=3, nt=2, nr=2, d=(1, 1, 1), seed=2, trials=1)
            ch = sample_channel_set(sc, trial_rng(2, t))
            sol = alternating_min(ch, sc.d, tol=1e-8, rng=trial_rng(3, t))
            heff = effective_channel(ch.obs_h[0, 0], sol.f[0], sol.c[0])
            svs.append(np.linalg.svd(heff, compute_uv=False)[-1])
        svs = np.asarray(svs)
        assert svs.min() > 0
        assert np.isfinite(svs).all()

    def test_dimension_mismatch(self, rng):
        h = np.zeros((2, 2), dtype=complex)
        with pytest.raises(ValueError):
            effective_channel(h, np.zeros((3, 1)), np.zeros((2, 1)))


class TestZfEqualizer:
    def test_identity(self):
        w = zf_equalizer(np.eye(3, dtype=complex), 2)
        assert np.allclose(w, np.eye(3)[:2])

    def test_defining_property(self, rng):
        h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        w = zf_equalizer(h, 2)
        target = np.hstack([np.eye(2), np.zeros((2, 1))])
        assert np.linalg.norm(w @ h - target) < 1e-10

    def test_matches_dense_inverse_oracle(self, rng):
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.allclose(zf_equalizer(h, 2), np.linalg.inv(h)[:2, :], atol=1e-12)

    def test_singular_raises(self):
        h = np.ones((2, 2), dtype=complex)
        with pytest.raises(DegenerateDrawError):
            zf_equalizer(h, 1)


class TestSinrPerfect:
    def test_lemma_forms_agree_on_draws(self):
        for t in range(100):
            sc = Scenario(k=3, nt=2, nr=2, d=(1, 1, 1), seed=4, trials=1)
            ch = sample_channel_set(sc, trial_rng(4, t))
            sol = alternating_min(ch, sc.d, tol=1e-8, rng=trial_rng(5, t))
            # raises internally if the two Schur forms disagree beyond 1e-8
            sinr_perfect(ch.obs_h[0, 0], sol.f[0], sol.c[0], gamma_o=100.0)

    def test_scale_contract(self):
        _, ch, sol = _solved_instance(seed=6)
        base = sinr_perfect(ch.obs_h[0, 0], sol.f[0], sol.c[0], gamma_o=1.0)
        scaled = sinr_perfect(ch.obs_h[0, 0], sol.f[0], sol.c[0], gamma_o=7.5)
        assert np.allclose(scaled, 7.5 * base, rtol=1e-14)

    def test_unitary_invariance(self):
        _, ch, sol = _solved_instance(seed=7)
        base = sinr_perfect(ch.obs_h[0, 0], sol.f[0], sol.c[0], gamma_o=10.0)
        g = np.random.default_rng(0)
        z = g.standard_normal((2, 1, 1))
        q, _ = np.linalg.qr(z[0] + 1j * z[1])
        rotated = sinr_perfect(ch.obs_h[0, 0], sol.f[0], sol.c[0] @ q, gamma_o=10.0)
        assert np.allclose(rotated, base, atol=1e-10)

    def test_mean_and_distribution(self):
        # beta=0, alpha=0: per-stream SNR ~ Exp(gamma_o / d)
        sc = Scenario(
            k=3, nt=2, nr=2, d=(1, 1, 1), alpha=0.0, beta=0.0,
            gamma_db=(20.0,), trials=4000, seed=8,
        )
        res = run_ia_sweep(sc)
        samples = res.avg[0, 0].ravel()  # beta=0: averaged == perfect
        assert samples.mean() == pytest.approx(100.0, rel=0.02)
        ks = stats.kstest(samples, "expon", args=(0, 100.0)).statistic
        assert ks < 0.02


class TestSinrImperfect:
    def test_beta_zero_matches_perfect(self):
        sc, ch, sol = _solved_instance(seed=9, beta=0.0, tol=1e-12)
        per_user = sinr_imperfect(ch, sol, gamma_o=100.0)
        avg_user = sinr_imperfect_avg(ch, sol, gamma_o=100.0)
        for i in range(sc.k):
            direct = sinr_perfect(ch.obs_h[i, i], sol.f[i], sol.c[i], gamma_o=100.0)
            assert np.allclose(per_user[i], direct, rtol=1e-5)
            assert np.allclose(avg_user[i], direct, rtol=1e-5)

    def test_realized_exceeds_averaged_at_high_snr(self):
        # The realized instantaneous SINR keeps the drawn error matrices and
        # its heavy right tail inflates the sample mean; the averaged form
        # is the one the closed-form law describes.
        sc = Scenario(
            k=3, nt=2, nr=2, d=(1, 1, 1), alpha=0.0, beta=0.0,
            gamma_db=(30.0,), trials=2000, seed=10,
        )
        res = run_ia_sweep(sc, beta_grid=[0.1], collect_realized=True)
        lemma = (1 - 0.01) / (0.01 * 3 + 1e-3)
        assert res.avg[0, 0].mean() == pytest.approx(lemma, rel=0.05)
        assert res.realized[0, 0].mean() > 1.5 * lemma

    def test_mean_saturates_at_cap(self):
        beta = 0.2
        sc = Scenario(
            k=3, nt=2, nr=2, d=(1, 1, 1), alpha=0.0, beta=beta,
            gamma_db=(40.0, 50.0), trials=3000, seed=11,
        )
        res = run_ia_sweep(sc)
        cap = (1 - beta**2) / (beta**2 * 3)
        m40 = res.avg[0, 0].mean()
        m50 = res.avg[0, 1].mean()
        assert m40 == pytest.approx(cap, rel=0.05)
        assert abs(m50 - m40) / m40 < 0.01


class TestBeamforming:
    def test_perfect_csi_equals_top_eigenvalue(self, rng):
        h = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
        lam = np.linalg.eigvalsh(h @ h.conj().T)[-1]
        assert beamforming_sinr(h, h, 10.0) == pytest.approx(10.0 * lam, rel=1e-12)

    def test_wishart_top_eigenvalue_mean(self):
        # E{lam_max} = 3.5 for a 2x2 complex Wishart with 2 degrees of
        # freedom (quadrature oracle over the joint eigenvalue density).
        res = run_p2p_sweep(2, 0.0, [0.0], [0.0], trials=20000, seed=12, collect_bf=True)
        assert res.bf[0, 0].mean() == pytest.approx(3.5, rel=0.03)

    def test_full_error_collapses_to_random_beam(self):
        # beta=1: the combiner/precoder are independent of the true channel,
        # so the projected gain is CN(0,1) and the mean SINR is gamma_o.
        res = run_p2p_sweep(2, 0.0, [0.0], [1.0], trials=20000, seed=13, collect_bf=True)
        assert res.bf[0, 0].mean() == pytest.approx(1.0, rel=0.05)


class TestSpatialMultiplexing:
    def test_perfect_uncorrelated_distribution(self):
        res = run_p2p_sweep(2, 0.0, [20.0], [0.0], trials=10000, seed=14)
        samples = res.sm_avg[0, 0].ravel()
        ks = stats.kstest(samples, "expon", args=(0, 100.0 / 2)).statistic
        assert ks < 0.02

    def test_correlated_mean(self):
        rt = exp_correlation_matrix(0.5, 2)
        res = run_p2p_sweep(2, 0.5, [20.0], [0.0], trials=20000, seed=15)
        inv_diag = np.diag(np.linalg.inv(rt)).real
        for n in range(2):
            expected = (100.0 / 2) / inv_diag[n]
            assert res.sm_avg[0, 0, n].mean() == pytest.approx(expected, rel=0.05)

    def test_full_error_snr_independent(self):
        # Beyond saturation the realized SINR is a ratio of error powers
        # whose mean diverges; compare medians across SNR points instead.
        res = run_p2p_sweep(
            2, 0.0, [40.0, 50.0], [0.999], trials=4000, seed=16, collect_realized=True
        )
        m40 = np.median(res.sm_realized[0, 0])
        m50 = np.median(res.sm_realized[0, 1])
        assert abs(m50 - m40) / m40 < 0.05

    def test_single_instance_functions(self, rng):
        rt = exp_correlation_matrix(0.3, 2)
        sc = Scenario(k=2, nt=2, nr=2, d=(1, 1), alpha=0.3, beta=0.4, seed=17)
        ch = sample_channel_set(sc, trial_rng(17, 0))
        true_h, obs_h = ch.true_h[0, 0], ch.obs_h[0, 0]
        realized = sm_zf_sinr(true_h, obs_h, 100.0)
        averaged = sm_zf_sinr_avg(obs_h, rt, 0.4, 100.0)
        assert realized.shape == (2,) and averaged.shape == (2,)
        assert np.all(realized >= 0) and np.all(averaged >= 0)
        # beta=0 reduces both to the same quantity
        same = sm_zf_sinr(obs_h, obs_h, 100.0)
        ref = sm_zf_sinr_avg(obs_h, rt, 0.0, 100.0)
        assert np.allclose(same, ref, rtol=1e-10)

    def test_singular_observed_channel(self):
        with pytest.raises(DegenerateDrawError):
            sm_zf_sinr(np.eye(2, dtype=complex), np.ones((2, 2), dtype=complex), 1.0)
