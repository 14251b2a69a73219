"""Seeded, batched Monte-Carlo sweep engine.

Each trial owns an independent counter-based substream derived from the
master seed (see :func:`ialink.channel.trial_rng`) and draws, in a fixed
documented order, the observed fast-fading matrices, the CSI error matrices
and the solver initialization.  Trials are solved in batches; results are
reduced in trial order, so the output is bit-identical regardless of worker
count or scheduling.

Within one sweep the expensive IA solve depends only on the observed
channels, so a single solve per trial serves every (beta, gamma) grid cell.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import Scenario, complex_normal, psd_sqrt, trial_rng
from .solver import batch_alternating_min, check_feasibility, haar_basis
from .linklevel import SINGULAR_REL_TOL, SinrSampleSet, _cross_gains, _zf_rows

DEFAULT_CHUNK = 2048

log = logging.getLogger(__name__)


@dataclass
class IaSweepResult:
    """Outcome of an IA Monte-Carlo sweep over (beta, gamma) grids.

    ``avg[b, g, i, n, t]`` are error-averaged SINR samples; ``realized`` has
    the same layout when collected.  Trials that failed to converge or drew
    a singular effective channel are dropped everywhere and counted.
    """

    gamma_db: np.ndarray
    beta_grid: np.ndarray
    avg: np.ndarray
    realized: np.ndarray | None
    mean_frf: np.ndarray  # (K, d, d) sample mean of F^* Rt F per user
    leakage: np.ndarray  # (trials_kept,)
    iterations: np.ndarray
    trials: int
    degenerate: int
    nonconverged: int
    scenario: Scenario | None = None

    @property
    def trials_kept(self) -> int:
        return self.avg.shape[-1]

    @property
    def discard_rate(self) -> float:
        return self.degenerate / self.trials

    def sample_set(self, beta_index: int = 0, realized: bool = False) -> SinrSampleSet:
        """Package one beta slice as a :class:`SinrSampleSet`."""
        source = self.realized if realized else self.avg
        if source is None:
            raise ValueError("realized samples were not collected")
        return SinrSampleSet(
            samples=source[beta_index],
            gamma_db=tuple(float(g) for g in self.gamma_db),
            scenario=self.scenario,
            discarded=self.degenerate,
            nonconverged=self.nonconverged,
        )


def _draw_ia_chunk(scenario: Scenario, d: int, start: int, count: int):
    """Per-trial substream draws for one chunk, in the documented order."""
    k, nr, nt = scenario.k, scenario.nr, scenario.nt
    hw = np.empty((count, k, k, nr, nt), dtype=complex)
    err = np.empty((count, k, k, nr, nt), dtype=complex)
    ginit = np.empty((count, k, nr, nr - d), dtype=complex)
    for j in range(count):
        g = trial_rng(scenario.seed, start + j)
        hw[j] = complex_normal(g, (k, k, nr, nt))
        err[j] = complex_normal(g, (k, k, nr, nt))
        z = g.standard_normal(size=(2, k, nr, nr - d))
        ginit[j] = z[0] + 1j * z[1]
    return hw, err, ginit


def _orthonormalize(g: np.ndarray) -> np.ndarray:
    if g.shape[-1] == 0:
        return g
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0)
    return q * phase[..., None, :].conj()


def _ia_chunk(
    scenario: Scenario,
    beta_grid: np.ndarray,
    gamma_lin: np.ndarray,
    start: int,
    count: int,
    tol: float,
    max_iter: int,
    collect_realized: bool,
):
    k, nr, nt = scenario.k, scenario.nr, scenario.nt
    d = scenario.d[0]
    rt = scenario.correlation()
    sqrt_rt = psd_sqrt(rt)
    hw, err, ginit = _draw_ia_chunk(scenario, d, start, count)
    h_obs = hw @ sqrt_rt
    c_init = _orthonormalize(ginit / np.sqrt(2.0))

    f, c, leak, iters = batch_alternating_min(
        h_obs, d, tol=tol, max_iter=max_iter, c_init=c_init
    )
    converged = leak < tol
    w, valid = _zf_rows(h_obs, f, c)
    keep = converged & valid
    degenerate = int(np.sum(converged & ~valid))
    nonconverged = int(np.sum(~converged))

    h_obs, w, f, c = h_obs[keep], w[keep], f[keep], c[keep]
    hw, err = hw[keep], err[keep]
    t_kept = int(keep.sum())
    n_b, n_g = len(beta_grid), len(gamma_lin)

    noise = np.sum(np.abs(w) ** 2, axis=-1)  # (T, K, d)
    frf = np.einsum("tkam,ab,tkbn->tkmn", f.conj(), rt, f)  # (T, K, d, d)
    ihat = np.einsum("tkmm->t", frf).real / d  # (T,)
    mean_frf_sum = frf.sum(axis=0)

    # Coherent cross-link residual power through the ZF rows (leakage-level).
    g_obs = _cross_gains(w, h_obs, f)  # (T, K, K, d, d)
    idx = np.arange(k)
    cross = np.abs(g_obs) ** 2 / d
    cross[:, idx, idx] = 0.0
    coh = cross.sum(axis=(2, 4))  # (T, K, d)

    avg = np.empty((n_b, n_g, k, d, t_kept))
    realized = np.empty((n_b, n_g, k, d, t_kept)) if collect_realized else None
    for bi, beta in enumerate(beta_grid):
        one_m_b2 = 1.0 - beta**2
        for gi, gam in enumerate(gamma_lin):
            den = one_m_b2 * gam * coh + gam * beta**2 * ihat[:, None, None] * noise + noise
            avg[bi, gi] = np.moveaxis((gam / d) * one_m_b2 / den, 0, -1)
        if collect_realized:
            h_true = (np.sqrt(one_m_b2) * hw + beta * err) @ sqrt_rt
            g_true = _cross_gains(w, h_true, f)
            power = np.abs(g_true) ** 2 / d  # per unit gamma
            total = power.sum(axis=(2, 4))  # (T, K, d)
            sig = np.diagonal(power[:, idx, idx], axis1=-2, axis2=-1)
            other = total - sig
            for gi, gam in enumerate(gamma_lin):
                realized[bi, gi] = np.moveaxis(
                    gam * sig / (gam * other + noise), 0, -1
                )

    return avg, realized, mean_frf_sum, leak[keep], iters[keep], degenerate, nonconverged, t_kept


def run_ia_sweep(
    scenario: Scenario,
    beta_grid=None,
    trials: int | None = None,
    tol: float = 1e-8,
    max_iter: int = 5000,
    collect_realized: bool = False,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> IaSweepResult:
    """Monte-Carlo SINR sweep of the IA network.

    One IA solve per trial is reused across the whole ``beta_grid`` (the
    solve sees only observed channels) and the whole SNR grid (powers only
    rescale).  Symmetric stream counts required on this batched path.
    """
    if len(set(scenario.d)) != 1:
        raise ValueError("batched sweeps require symmetric stream counts")
    report = check_feasibility(scenario.k, scenario.nt, scenario.nr, scenario.d)
    if not report.feasible:
        raise ValueError(f"infeasible IA scenario: {report.reason}")
    if beta_grid is None:
        beta_grid = [scenario.beta]
    beta_grid = np.asarray([float(b) for b in beta_grid])
    gamma_lin = scenario.gamma_lin
    n_trials = scenario.trials if trials is None else int(trials)

    starts = list(range(0, n_trials, chunk))
    jobs = [(s, min(chunk, n_trials - s)) for s in starts]

    def work(job):
        s, cnt = job
        return _ia_chunk(
            scenario, beta_grid, gamma_lin, s, cnt, tol, max_iter, collect_realized
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]

    avg = np.concatenate([p[0] for p in parts], axis=-1)
    realized = (
        np.concatenate([p[1] for p in parts], axis=-1) if collect_realized else None
    )
    frf_sum = sum(p[2] for p in parts)
    leakage = np.concatenate([p[3] for p in parts])
    iterations = np.concatenate([p[4] for p in parts])
    degenerate = sum(p[5] for p in parts)
    nonconverged = sum(p[6] for p in parts)
    kept = sum(p[7] for p in parts)
    if degenerate or nonconverged:
        log.info(
            "IA sweep dropped %d degenerate and %d non-converged of %d trials",
            degenerate, nonconverged, n_trials,
        )
    return IaSweepResult(
        gamma_db=np.asarray(scenario.gamma_db),
        beta_grid=beta_grid,
        avg=avg,
        realized=realized,
        mean_frf=np.asarray(frf_sum) / max(kept, 1),
        leakage=leakage,
        iterations=iterations,
        trials=n_trials,
        degenerate=degenerate,
        nonconverged=nonconverged,
        scenario=scenario,
    )


@dataclass
class P2pSweepResult:
    """Monte-Carlo SINR samples of point-to-point baselines."""

    gamma_db: np.ndarray
    beta_grid: np.ndarray
    sm_avg: np.ndarray  # (n_beta, n_gamma, N, trials_kept)
    sm_realized: np.ndarray | None
    bf: np.ndarray | None  # (n_beta, n_gamma, trials_kept)
    trials: int
    degenerate: int

    @property
    def discard_rate(self) -> float:
        return self.degenerate / self.trials


def _p2p_chunk(n, alpha, seed, beta_grid, gamma_lin, start, count, collect_realized, collect_bf):
    from .channel import exp_correlation_matrix

    rt = exp_correlation_matrix(alpha, n)
    sqrt_rt = psd_sqrt(rt)
    tr_rt = float(np.trace(rt).real)
    hw = np.empty((count, n, n), dtype=complex)
    err = np.empty((count, n, n), dtype=complex)
    for j in range(count):
        g = trial_rng(seed, start + j)
        hw[j] = complex_normal(g, (n, n))
        err[j] = complex_normal(g, (n, n))
    h_obs = hw @ sqrt_rt
    sv = np.linalg.svd(h_obs, compute_uv=False)
    keep = sv[:, -1] >= SINGULAR_REL_TOL * sv[:, 0]
    degenerate = int(np.sum(~keep))
    h_obs, hw, err = h_obs[keep], hw[keep], err[keep]
    t_kept = int(keep.sum())

    w = np.linalg.inv(h_obs)
    noise = np.sum(np.abs(w) ** 2, axis=-1)  # (T, N)
    n_b, n_g = len(beta_grid), len(gamma_lin)
    sm_avg = np.empty((n_b, n_g, n, t_kept))
    sm_real = np.empty((n_b, n_g, n, t_kept)) if collect_realized else None
    bf = np.empty((n_b, n_g, t_kept)) if collect_bf else None
    if collect_bf:
        u, _, vh = np.linalg.svd(h_obs)
        u1 = u[:, :, 0]
        v1 = vh[:, 0, :].conj()
    for bi, beta in enumerate(beta_grid):
        one_m_b2 = 1.0 - beta**2
        for gi, gam in enumerate(gamma_lin):
            sm_avg[bi, gi] = np.moveaxis(
                (gam / n) * one_m_b2 / (noise * ((gam / n) * beta**2 * tr_rt + 1.0)), 0, -1
            )
        if collect_realized or collect_bf:
            h_true = (np.sqrt(one_m_b2) * hw + beta * err) @ sqrt_rt
        if collect_realized:
            gmat = w @ h_true
            power = np.abs(gmat) ** 2 / n
            total = power.sum(axis=-1)
            sig = np.diagonal(power, axis1=-2, axis2=-1)
            other = total - sig
            for gi, gam in enumerate(gamma_lin):
                sm_real[bi, gi] = np.moveaxis(gam * sig / (gam * other + noise), 0, -1)
        if collect_bf:
            gain = np.abs(np.einsum("ti,tij,tj->t", u1.conj(), h_true, v1)) ** 2
            for gi, gam in enumerate(gamma_lin):
                bf[bi, gi] = gam * gain
    return sm_avg, sm_real, bf, degenerate, t_kept


def run_p2p_sweep(
    n: int,
    alpha: complex,
    gamma_db,
    beta_grid,
    trials: int,
    seed: int,
    collect_realized: bool = False,
    collect_bf: bool = False,
    workers: int = 1,
    chunk: int = 8192,
) -> P2pSweepResult:
    """Monte-Carlo sweep of the point-to-point SM (and optionally
    beamforming) baselines on an N x N link."""
    gamma_db = np.asarray([float(g) for g in gamma_db])
    gamma_lin = 10.0 ** (gamma_db / 10.0)
    beta_grid = np.asarray([float(b) for b in beta_grid])
    starts = list(range(0, trials, chunk))
    jobs = [(s, min(chunk, trials - s)) for s in starts]

    def work(job):
        s, cnt = job
        return _p2p_chunk(
            n, alpha, seed, beta_grid, gamma_lin, s, cnt, collect_realized, collect_bf
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    sm_avg = np.concatenate([p[0] for p in parts], axis=-1)
    sm_real = (
        np.concatenate([p[1] for p in parts], axis=-1) if collect_realized else None
    )
    bf = np.concatenate([p[2] for p in parts], axis=-1) if collect_bf else None
    degenerate = sum(p[3] for p in parts)
    return P2pSweepResult(
        gamma_db=gamma_db,
        beta_grid=beta_grid,
        sm_avg=sm_avg,
        sm_realized=sm_real,
        bf=bf,
        trials=trials,
        degenerate=degenerate,
    )
