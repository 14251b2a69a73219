"""Effective channels, ZF equalizers and instantaneous per-stream SINR.

Power convention: each transmitter splits total power ``P = gamma_o`` equally
over its streams (``P / d_i`` per stream) and the receiver noise is unit
variance, so ``gamma_o`` is the transmit SNR.

Two SINR flavors exist for imperfect CSI.  The *realized* flavor plugs the
drawn error matrices into the received-signal model and measures the exact
instantaneous interference.  The *error-averaged* flavor replaces the CSI
error contribution by its ensemble average given the filters, which is the
quantity whose distribution the closed-form laws in :mod:`ialink.analytic`
describe; its per-draw randomness comes only through the observed channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, Scenario
from .solver import IaSolution

SINGULAR_REL_TOL = 1e-12
LEMMA_FORM_RTOL = 1e-8


class DegenerateDrawError(RuntimeError):
    """A channel draw produced a numerically singular matrix.

    These are measure-zero events under continuous fading; callers discard
    the trial and count it.
    """


def effective_channel(h_ii: np.ndarray, f_i: np.ndarray, c_i: np.ndarray) -> np.ndarray:
    """Receiver-side effective channel ``[H_ii F_i, C_i]`` (square, Nr x Nr)."""
    h_ii = np.asarray(h_ii)
    f_i = np.asarray(f_i)
    c_i = np.asarray(c_i)
    nr, nt = h_ii.shape
    if f_i.shape[0] != nt:
        raise ValueError(f"precoder rows {f_i.shape[0]} != Nt {nt}")
    if c_i.shape[0] != nr:
        raise ValueError(f"interference basis rows {c_i.shape[0]} != Nr {nr}")
    if f_i.shape[1] + c_i.shape[1] != nr:
        raise ValueError("d_i + (Nr - d_i) columns required for a square effective channel")
    return np.hstack([h_ii @ f_i, c_i])


def zf_equalizer(heff: np.ndarray, d: int) -> np.ndarray:
    """First ``d`` rows of ``heff^{-1}``: zero-forcing receiver for the
    signal part of the effective channel.

    Raises
    ------
    DegenerateDrawError
        If ``heff`` is numerically singular (smallest singular value below
        ``1e-12`` times the largest).
    """
    heff = np.asarray(heff)
    n = heff.shape[0]
    if heff.shape != (n, n):
        raise ValueError("effective channel must be square")
    sv = np.linalg.svd(heff, compute_uv=False)
    if sv[-1] < SINGULAR_REL_TOL * sv[0]:
        raise DegenerateDrawError(
            f"effective channel is singular (condition number {sv[0] / max(sv[-1], 1e-300):.3g})"
        )
    return np.linalg.inv(heff)[:d, :]


def _per_stream_denominators(h_ii, f_i, c_i):
    """Both Schur-equivalent forms of the noise-scaling diagonal.

    Returns ``(projection_form, gram_form)``: the diagonal of
    ``(F^* H^* (I - C C^*) H F)^{-1}`` and of the top-left block of
    ``([H F, C]^* [H F, C])^{-1}``.  They agree algebraically whenever the
    effective channel is nonsingular.
    """
    nr = h_ii.shape[-2]
    d = f_i.shape[-1]
    hf = h_ii @ f_i
    proj = np.eye(nr, dtype=complex)
    if c_i.shape[-1]:
        proj = proj - c_i @ np.swapaxes(c_i, -1, -2).conj()
    core = np.swapaxes(hf, -1, -2).conj() @ proj @ hf
    m_proj = np.diagonal(np.linalg.inv(core), axis1=-2, axis2=-1).real

    heff = np.concatenate([hf, np.broadcast_to(c_i, hf.shape[:-1] + (c_i.shape[-1],))], axis=-1)
    gram = np.swapaxes(heff, -1, -2).conj() @ heff
    m_gram = np.diagonal(np.linalg.inv(gram), axis1=-2, axis2=-1).real[..., :d]
    return m_proj, m_gram


def sinr_perfect(
    h_ii: np.ndarray,
    f_i: np.ndarray,
    c_i: np.ndarray,
    gamma_o: float,
    d_i: int | None = None,
) -> np.ndarray:
    """Per-stream SNR under perfect CSI.

    Evaluates ``(gamma_o / d_i) / [(F^* H^* (I - C C^*) H F)^{-1}]_{nn}`` and
    cross-checks it against the direct effective-channel form
    ``(gamma_o / d_i) / [B (Heff^* Heff)^{-1} B^*]_{nn}`` to 1e-8 relative;
    the two are Schur-complement equivalents.
    """
    f_i = np.asarray(f_i)
    d = f_i.shape[1] if d_i is None else int(d_i)
    if d != f_i.shape[1]:
        raise ValueError("d_i disagrees with the precoder width")
    m_proj, m_gram = _per_stream_denominators(np.asarray(h_ii), f_i, np.asarray(c_i))
    if np.any(np.abs(m_proj - m_gram) > LEMMA_FORM_RTOL * np.abs(m_gram)):
        raise AssertionError(
            "projection-form and Gram-form SINR denominators disagree beyond 1e-8"
        )
    if np.any(m_proj <= 0):
        raise DegenerateDrawError("singular per-stream core matrix")
    return (gamma_o / d) / m_proj


def _zf_rows(obs_h: np.ndarray, f: np.ndarray, c: np.ndarray):
    """Batched ZF rows ``B_i Heff_i^{-1}`` built from observed channels.

    Parameters: ``obs_h`` (..., K, K, Nr, Nt), ``f`` (..., K, Nt, d),
    ``c`` (..., K, Nr, Nr-d).  Returns ``w`` (..., K, d, Nr) and a validity
    mask over the leading axes.
    """
    k = obs_h.shape[-4]
    d = f.shape[-1]
    idx = np.arange(k)
    h_ii = obs_h[..., idx, idx, :, :]  # (..., K, Nr, Nt)
    hf = h_ii @ f
    heff = np.concatenate([hf, c], axis=-1)
    sv = np.linalg.svd(heff, compute_uv=False)
    valid = np.all(sv[..., -1] >= SINGULAR_REL_TOL * sv[..., 0], axis=-1)
    safe = np.where(valid[..., None, None, None], heff, np.broadcast_to(np.eye(heff.shape[-1]), heff.shape))
    w = np.linalg.inv(safe)[..., :d, :]
    return w, valid


def _cross_gains(w: np.ndarray, h: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``G[..., i, k] = W_i H_ik F_k`` for all user pairs; (..., K, K, d, d)."""
    return w[..., :, None, :, :] @ h @ f[..., None, :, :, :]


def sinr_imperfect(ch: ChannelSet, sol: IaSolution, gamma_o: float) -> list[np.ndarray]:
    """Realized per-stream SINR with the drawn CSI error matrices.

    The ZF rows come from the observed channels; the received signal uses the
    true channels.  Stream n of user i sees its own diagonal gain as signal
    and every other (user, stream) coefficient plus thermal noise as
    interference.  Returns one length-``d_i`` vector per user.
    """
    k = ch.true_h.shape[0]
    d_list = [fi.shape[1] for fi in sol.f]
    if len(set(d_list)) != 1:
        return _sinr_imperfect_general(ch, sol, gamma_o)
    f = np.stack(sol.f)
    c = np.stack(sol.c)
    w, valid = _zf_rows(ch.obs_h[None], f[None], c[None])
    if not valid[0]:
        raise DegenerateDrawError("observed effective channel is singular")
    g = _cross_gains(w, ch.true_h[None], f[None])[0]  # (K, K, d, d)
    noise = np.sum(np.abs(w[0]) ** 2, axis=-1)  # (K, d)
    d = d_list[0]
    p_stream = gamma_o / d
    power = p_stream * np.abs(g) ** 2  # equal d_k across users
    total = power.sum(axis=(1, 3))  # (K, d): sum over tx users and their streams
    idx = np.arange(k)
    sig = np.diagonal(power[idx, idx], axis1=-2, axis2=-1)  # (K, d)
    sinr = sig / (total - sig + noise)
    return [sinr[i] for i in range(k)]


def _sinr_imperfect_general(ch: ChannelSet, sol: IaSolution, gamma_o: float) -> list[np.ndarray]:
    k = ch.true_h.shape[0]
    out = []
    for i in range(k):
        heff = effective_channel(ch.obs_h[i, i], sol.f[i], sol.c[i])
        w = zf_equalizer(heff, sol.f[i].shape[1])
        noise = np.sum(np.abs(w) ** 2, axis=1)
        d_i = sol.f[i].shape[1]
        sig = np.zeros(d_i)
        total = np.zeros(d_i)
        for kk in range(k):
            gain = w @ ch.true_h[i, kk] @ sol.f[kk]
            p_stream = gamma_o / sol.f[kk].shape[1]
            contrib = p_stream * np.abs(gain) ** 2
            total += contrib.sum(axis=1)
            if kk == i:
                sig = np.diag(contrib).copy()
        out.append(sig / (total - sig + noise))
    return out


def sinr_imperfect_avg(ch: ChannelSet, sol: IaSolution, gamma_o: float) -> list[np.ndarray]:
    """Per-stream SINR with the CSI-error power averaged out given the filters.

    The error contribution of every transmitter is replaced by its mean
    ``beta^2 * (P / d_k) * tr(F_k^* Rt F_k) * ||w_n||^2``, leaving only the
    observed channels random.  This is the per-draw quantity whose
    distribution the closed-form imperfect-CSI law describes.
    """
    k = ch.true_h.shape[0]
    beta = ch.beta
    out = []
    ihat = sum(
        float(np.trace(fi.conj().T @ ch.rt @ fi).real) / fi.shape[1] for fi in sol.f
    )
    for i in range(k):
        heff = effective_channel(ch.obs_h[i, i], sol.f[i], sol.c[i])
        d_i = sol.f[i].shape[1]
        w = zf_equalizer(heff, d_i)
        noise = np.sum(np.abs(w) ** 2, axis=1)
        coherent = np.zeros(d_i)
        for kk in range(k):
            if kk == i:
                continue
            gain = w @ ch.obs_h[i, kk] @ sol.f[kk]
            coherent += (gamma_o / sol.f[kk].shape[1]) * np.sum(np.abs(gain) ** 2, axis=1)
        num = (gamma_o / d_i) * (1.0 - beta**2)
        den = (1.0 - beta**2) * coherent + gamma_o * beta**2 * ihat * noise + noise
        out.append(num / den)
    return out


def beamforming_sinr(true_h: np.ndarray, obs_h: np.ndarray, gamma_o: float) -> float:
    """Single-stream beamforming SNR on one point-to-point link.

    Precoder and combiner are the top right/left singular vectors of the
    observed channel; the SNR is measured on the true channel with unit
    noise: ``gamma_o * |u_1^* H v_1|^2``.  With perfect CSI this equals
    ``gamma_o`` times the largest squared singular value of the channel.
    """
    u, _, vh = np.linalg.svd(np.asarray(obs_h))
    gain = u[:, 0].conj() @ np.asarray(true_h) @ vh[0, :].conj()
    return float(gamma_o * np.abs(gain) ** 2)


def sm_zf_sinr(true_h: np.ndarray, obs_h: np.ndarray, gamma_o: float) -> np.ndarray:
    """Realized per-stream SINR of a spatial-multiplexing link with a ZF
    receiver designed on the observed channel (single user, N streams)."""
    obs_h = np.asarray(obs_h)
    n = obs_h.shape[0]
    sv = np.linalg.svd(obs_h, compute_uv=False)
    if sv[-1] < SINGULAR_REL_TOL * sv[0]:
        raise DegenerateDrawError("observed channel is singular")
    w = np.linalg.inv(obs_h)
    g = w @ np.asarray(true_h)
    noise = np.sum(np.abs(w) ** 2, axis=1)
    power = (gamma_o / n) * np.abs(g) ** 2
    sig = np.diag(power).copy()
    total = power.sum(axis=1)
    return sig / (total - sig + noise)


def sm_zf_sinr_avg(obs_h: np.ndarray, rt: np.ndarray, beta: float, gamma_o: float) -> np.ndarray:
    """Error-averaged per-stream SM SINR given the observed channel."""
    obs_h = np.asarray(obs_h)
    n = obs_h.shape[0]
    sv = np.linalg.svd(obs_h, compute_uv=False)
    if sv[-1] < SINGULAR_REL_TOL * sv[0]:
        raise DegenerateDrawError("observed channel is singular")
    w = np.linalg.inv(obs_h)
    noise = np.sum(np.abs(w) ** 2, axis=1)
    tr_rt = float(np.trace(rt).real)
    num = (gamma_o / n) * (1.0 - beta**2)
    den = noise * ((gamma_o / n) * beta**2 * tr_rt + 1.0)
    return num / den


@dataclass
class SinrSampleSet:
    """Empirical SINR samples over a (gamma, user, stream) grid.

    ``samples[g, i, n]`` is the length-``trials_kept`` vector of linear-scale
    SINR values for SNR grid point g, user i, stream n.
    """

    samples: np.ndarray  # (n_gamma, K, d, trials_kept)
    gamma_db: tuple[float, ...]
    scenario: Scenario | None = None
    discarded: int = 0
    nonconverged: int = 0

    def __post_init__(self):
        if np.any(self.samples < 0):
            raise ValueError("SINR samples must be nonnegative")

    def cell(self, gamma_idx: int, user: int, stream: int = 0) -> np.ndarray:
        return self.samples[gamma_idx, user, stream]

    @property
    def trials_kept(self) -> int:
        return self.samples.shape[-1]

    def mean(self) -> np.ndarray:
        """Mean SINR per (gamma, user, stream)."""
        return self.samples.mean(axis=-1)
