"""Interference-alignment precoders via alternating minimization.

The solver alternates two exact subproblem solutions until the total
interference leakage drops below tolerance:

1. each precoder ``F_i`` becomes the ``d_i`` least-dominant eigenvectors of
   the interference-to-others matrix ``sum_{k != i} H_ki^* (I - C_k C_k^*) H_ki``;
2. each interference-subspace basis ``C_i`` becomes the ``Nr - d_i`` dominant
   eigenvectors of the received interference covariance
   ``sum_{k != i} H_ik F_k F_k^* H_ik^*``.

Both steps minimize the leakage exactly over their own variable, so the
leakage is non-increasing across half-steps.  Direct channels ``H_ii`` are
never read, which makes the computed ``F_i, C_i`` statistically independent
of them.  All eigenvector updates run batched over Monte-Carlo trials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet

ORTHO_TOL = 1e-10
_PHASE_EPS = 1e-12


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    reason: str


def check_feasibility(k: int, nt: int, nr: int, d) -> FeasibilityReport:
    """Properness count: per user, free beamformer variables must cover the
    alignment equations it participates in.

    User i contributes ``d_i (Nt - d_i) + d_i (Nr - d_i)`` variables against
    ``d_i * sum_{k != i} d_k`` equations; for symmetric stream counts this
    reduces to ``Nt + Nr >= (K + 1) d``, which gives the familiar
    ``N = ceil((1 + K) / 2)`` rule for square single-stream networks.
    """
    d = tuple(int(x) for x in d)
    if len(d) != k:
        return FeasibilityReport(False, f"stream list has length {len(d)}, expected {k}")
    if any(di < 1 for di in d):
        return FeasibilityReport(False, "each user needs at least one stream")
    if any(di > min(nt, nr) for di in d):
        return FeasibilityReport(False, "d_i exceeds min(Nt, Nr)")
    total = sum(d)
    for i, di in enumerate(d):
        variables = nt + nr - 2 * di
        equations = total - di
        if variables < equations:
            return FeasibilityReport(
                False,
                f"user {i}: {di}x({nt}+{nr}-2*{di})={di * variables} free variables "
                f"< {di * equations} alignment equations",
            )
    return FeasibilityReport(True, "properness count satisfied for every user")


@dataclass
class IaSolution:
    """Precoders, interference-subspace bases and the residual leakage."""

    f: list[np.ndarray]  # per user, (Nt, d_i), orthonormal columns
    c: list[np.ndarray]  # per user, (Nr, Nr - d_i), orthonormal columns
    leakage: float
    iterations: int
    converged: bool


def haar_basis(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Haar-random orthonormal columns via QR of a complex Gaussian matrix.

    ``shape`` is ``(..., n, m)`` with ``m <= n``; leading axes batch.
    """
    z = rng.standard_normal(size=(2,) + tuple(shape))
    g = z[0] + 1j * z[1]
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0)
    return q * phase[..., None, :].conj()


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive.

    Eigenvectors are only defined up to a unit phase; this pins a
    deterministic representative.  Works on batched ``(..., n, m)`` arrays.
    """
    mag = np.abs(v)
    first = np.argmax(mag > _PHASE_EPS, axis=-2)
    # Columns that are entirely negligible keep index 0 and phase 1.
    lead = np.take_along_axis(v, first[..., None, :], axis=-2)[..., 0, :]
    scale = np.where(np.abs(lead) > _PHASE_EPS, np.abs(lead) / np.where(lead == 0, 1.0, lead), 1.0)
    return v * scale[..., None, :]


def _projector_complement(c: np.ndarray) -> np.ndarray:
    """``I - C C^*`` for batched bases ``(..., n, m)`` (m may be 0)."""
    n = c.shape[-2]
    eye = np.eye(n, dtype=complex)
    if c.shape[-1] == 0:
        return np.broadcast_to(eye, c.shape[:-2] + (n, n)).copy()
    return eye - c @ np.swapaxes(c, -1, -2).conj()


def batch_interference_leakage(
    h: np.ndarray, f: np.ndarray, c: np.ndarray
) -> np.ndarray:
    """Total leakage per trial for symmetric stream counts.

    Parameters
    ----------
    h : (..., K, K, Nr, Nt)
        ``h[..., i, k]`` is the channel from transmitter k to receiver i.
    f : (..., K, Nt, d)
    c : (..., K, Nr, Nr - d)
    """
    k = h.shape[-4]
    p = _projector_complement(c)  # (..., K, Nr, Nr)
    leak = np.zeros(h.shape[:-4], dtype=float)
    for i in range(k):
        for kk in range(k):
            if kk == i:
                continue
            resid = p[..., i, :, :] @ h[..., i, kk, :, :] @ f[..., kk, :, :]
            leak += np.sum(np.abs(resid) ** 2, axis=(-2, -1))
    return leak


def batch_alternating_min(
    h_obs: np.ndarray,
    d: int,
    tol: float = 1e-8,
    max_iter: int = 5000,
    rng: np.random.Generator | None = None,
    c_init: np.ndarray | None = None,
    check_invariants: bool = False,
    record_history: bool = False,
    allow_infeasible: bool = False,
):
    """Run the alternating minimization on a batch of channel draws.

    Parameters
    ----------
    h_obs : (T, K, K, Nr, Nt)
        Observed channels; ``h_obs[t, i, k]`` links transmitter k to
        receiver i.  Diagonal links are never read.
    d : int
        Streams per user (symmetric).
    c_init : (T, K, Nr, Nr-d), optional
        Initial interference bases; drawn Haar-random from ``rng`` if absent.

    Returns
    -------
    f : (T, K, Nt, d)
    c : (T, K, Nr, Nr-d)
    leakage : (T,) final total leakage
    iterations : (T,) first iteration at which leakage dropped below tol
        (``max_iter`` when it never did)
    history : list of (T,) leakage after every half-step, only when
        ``record_history``
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    t, k, k2, nr, nt = h_obs.shape
    if k != k2:
        raise ValueError("channel array must be (T, K, K, Nr, Nt)")
    report = check_feasibility(k, nt, nr, (d,) * k)
    if not report.feasible and not allow_infeasible:
        # allow_infeasible exists for leakage-floor censuses of improper
        # networks; everything else should refuse early.
        raise ValueError(f"infeasible IA scenario: {report.reason}")

    if c_init is None:
        if rng is None:
            raise ValueError("need rng when c_init is not given")
        c = haar_basis(rng, (t, k, nr, nr - d))
    else:
        c = c_init.astype(complex, copy=True)

    h_herm = np.swapaxes(h_obs, -1, -2).conj()  # (T, K, K, Nt, Nr)

    f_out = np.zeros((t, k, nt, d), dtype=complex)
    c_out = np.zeros((t, k, nr, nr - d), dtype=complex)
    leak_out = np.full(t, np.inf)
    iter_out = np.full(t, max_iter, dtype=int)

    active = np.arange(t)
    h_a, hh_a, c_a = h_obs, h_herm, c
    f_a = np.zeros((t, k, nt, d), dtype=complex)
    prev_leak = np.full(t, np.inf)
    history: list[np.ndarray] = []

    def _gather_history(values: np.ndarray) -> None:
        if record_history:
            full = np.full(t, np.nan)
            full[active] = values
            history.append(full)

    for it in range(1, max_iter + 1):
        p = _projector_complement(c_a)
        # Precoder update: least-dominant eigenvectors of the
        # interference-to-others matrix.
        g = np.zeros((len(active), k, nt, nt), dtype=complex)
        for i in range(k):
            for kk in range(k):
                if kk == i:
                    continue
                g[:, i] += hh_a[:, kk, i] @ p[:, kk] @ h_a[:, kk, i]
        _, vec = np.linalg.eigh(g)
        f_a = vec[..., :d]

        if check_invariants:
            _assert_orthonormal(f_a)
            mid_leak = batch_interference_leakage(h_a, f_a, c_a)
            _assert_non_increasing(prev_leak, mid_leak)
            _gather_history(mid_leak)
        elif record_history:
            _gather_history(batch_interference_leakage(h_a, f_a, c_a))

        # Interference-basis update: dominant eigenvectors of the received
        # interference covariance.
        if nr - d > 0:
            q = np.zeros((len(active), k, nr, nr), dtype=complex)
            for i in range(k):
                for kk in range(k):
                    if kk == i:
                        continue
                    hf = h_a[:, i, kk] @ f_a[:, kk]
                    q[:, i] += hf @ np.swapaxes(hf, -1, -2).conj()
            _, vec = np.linalg.eigh(q)
            c_a = vec[..., d:]
        if check_invariants:
            _assert_orthonormal(c_a)

        leak = batch_interference_leakage(h_a, f_a, c_a)
        if check_invariants:
            _assert_non_increasing(prev_leak, leak)
        _gather_history(leak)
        prev_leak = leak

        done = leak < tol
        if done.any():
            idx = active[done]
            f_out[idx] = f_a[done]
            c_out[idx] = c_a[done]
            leak_out[idx] = leak[done]
            iter_out[idx] = it
            keep = ~done
            active = active[keep]
            if active.size == 0:
                break
            h_a = h_a[keep]
            hh_a = hh_a[keep]
            c_a = c_a[keep]
            f_a = f_a[keep]
            prev_leak = prev_leak[keep]

    if active.size:
        f_out[active] = f_a
        c_out[active] = c_a
        leak_out[active] = prev_leak

    f_out = fix_phase(f_out)
    c_out = fix_phase(c_out)
    if record_history:
        return f_out, c_out, leak_out, iter_out, history
    return f_out, c_out, leak_out, iter_out


def _assert_orthonormal(v: np.ndarray) -> None:
    if v.shape[-1] == 0:
        return
    gram = np.swapaxes(v, -1, -2).conj() @ v
    eye = np.eye(v.shape[-1])
    err = np.sqrt(np.sum(np.abs(gram - eye) ** 2, axis=(-2, -1)))
    if np.max(err) > ORTHO_TOL:
        raise AssertionError(f"orthonormality violated: max Frobenius error {np.max(err):.3g}")


def _assert_non_increasing(prev: np.ndarray, cur: np.ndarray) -> None:
    slack = 1e-12 * np.maximum(1.0, np.where(np.isfinite(prev), prev, 1.0))
    bad = cur > prev + slack
    if bad.any():
        worst = np.max(cur - prev)
        raise AssertionError(f"leakage increased by {worst:.3g} in an exact minimization step")


def alternating_min(
    obs_h,
    d,
    tol: float = 1e-8,
    max_iter: int = 5000,
    rng: np.random.Generator | None = None,
    check_invariants: bool = False,
) -> IaSolution:
    """Solve one channel instance; general (possibly asymmetric) stream counts.

    ``obs_h`` is either a :class:`ChannelSet` (its observed channels are
    used) or a ``(K, K, Nr, Nt)`` array.  Non-convergence is not an error:
    the returned solution carries ``converged=False`` and the caller decides.
    """
    if isinstance(obs_h, ChannelSet):
        obs_h = obs_h.obs_h
    h = np.asarray(obs_h)
    k, _, nr, nt = h.shape
    d = tuple(int(x) for x in d)
    report = check_feasibility(k, nt, nr, d)
    if not report.feasible:
        raise ValueError(f"infeasible IA scenario: {report.reason}")
    if tol <= 0:
        raise ValueError("tol must be positive")

    if len(set(d)) == 1:
        f, c, leak, iters = batch_alternating_min(
            h[None], d[0], tol=tol, max_iter=max_iter, rng=rng,
            check_invariants=check_invariants,
        )
        return IaSolution(
            f=[f[0, i] for i in range(k)],
            c=[c[0, i] for i in range(k)],
            leakage=float(leak[0]),
            iterations=int(iters[0]),
            converged=bool(leak[0] < tol),
        )

    if rng is None:
        raise ValueError("need rng for the random initialization")
    c = [haar_basis(rng, (nr, nr - d[i])) for i in range(k)]
    f = [np.zeros((nt, d[i]), dtype=complex) for i in range(k)]
    eye = np.eye(nr, dtype=complex)
    prev = np.inf
    iterations = max_iter
    for it in range(1, max_iter + 1):
        p = [eye - c[i] @ c[i].conj().T if d[i] < nr else eye.copy() for i in range(k)]
        for i in range(k):
            g = np.zeros((nt, nt), dtype=complex)
            for kk in range(k):
                if kk == i:
                    continue
                g += h[kk, i].conj().T @ p[kk] @ h[kk, i]
            _, vec = np.linalg.eigh(g)
            f[i] = vec[:, : d[i]]
        for i in range(k):
            if d[i] == nr:
                continue
            q = np.zeros((nr, nr), dtype=complex)
            for kk in range(k):
                if kk == i:
                    continue
                hf = h[i, kk] @ f[kk]
                q += hf @ hf.conj().T
            _, vec = np.linalg.eigh(q)
            c[i] = vec[:, d[i]:]
            p[i] = eye - c[i] @ c[i].conj().T
        leak = 0.0
        for i in range(k):
            for kk in range(k):
                if kk == i:
                    continue
                leak += float(np.sum(np.abs(p[i] @ h[i, kk] @ f[kk]) ** 2))
        if check_invariants and leak > prev + 1e-12 * max(1.0, prev if np.isfinite(prev) else 1.0):
            raise AssertionError("leakage increased across an iteration")
        prev = leak
        if leak < tol:
            iterations = it
            break
    return IaSolution(
        f=[fix_phase(fi) for fi in f],
        c=[fix_phase(ci) for ci in c],
        leakage=float(prev),
        iterations=iterations,
        converged=bool(prev < tol),
    )


def interference_leakage(sol: IaSolution, h: np.ndarray) -> float:
    """Total interference power outside the designated subspaces.

    ``sum_i sum_{k != i} || (I - C_i C_i^*) H_ik F_k ||_F^2`` evaluated on
    the given ``(K, K, Nr, Nt)`` channel array.
    """
    h = np.asarray(h)
    k = h.shape[0]
    if len(sol.f) != k or len(sol.c) != k:
        raise ValueError("solution and channel array disagree on user count")
    nr = h.shape[2]
    eye = np.eye(nr, dtype=complex)
    total = 0.0
    for i in range(k):
        if sol.c[i].shape[0] != nr or h.shape[3] != sol.f[i].shape[0]:
            raise ValueError("shape mismatch between solution and channels")
        p = eye - sol.c[i] @ sol.c[i].conj().T if sol.c[i].shape[1] else eye
        for kk in range(k):
            if kk == i:
                continue
            total += float(np.sum(np.abs(p @ h[i, kk] @ sol.f[kk]) ** 2))
    return total


@dataclass
class IaVerification:
    """Per-condition outcome of the two IA requirements."""

    alignment_residuals: np.ndarray  # (K, K), nan on the diagonal
    rank_margins: np.ndarray  # (K,) smallest singular value of the direct path
    alignment_ok: bool
    rank_ok: bool

    @property
    def passed(self) -> bool:
        return self.alignment_ok and self.rank_ok


def verify_ia(sol: IaSolution, h: np.ndarray, tol: float = 1e-8) -> IaVerification:
    """Check both IA conditions with the projection combiner ``I - C_i C_i^*``.

    Alignment: every cross-link residual ``||(I - C_i C_i^*) H_ik F_k||_F^2``
    must fall below ``tol``.  Rank: the projected direct path
    ``(I - C_i C_i^*) H_ii F_i`` must have smallest singular value above
    ``sqrt(tol)`` so that all d_i streams survive.
    """
    h = np.asarray(h)
    k = h.shape[0]
    nr = h.shape[2]
    eye = np.eye(nr, dtype=complex)
    residuals = np.full((k, k), np.nan)
    margins = np.zeros(k)
    for i in range(k):
        p = eye - sol.c[i] @ sol.c[i].conj().T if sol.c[i].shape[1] else eye
        for kk in range(k):
            if kk == i:
                continue
            residuals[i, kk] = float(np.sum(np.abs(p @ h[i, kk] @ sol.f[kk]) ** 2))
        direct = p @ h[i, i] @ sol.f[i]
        margins[i] = float(np.linalg.svd(direct, compute_uv=False)[-1])
    alignment_ok = bool(np.nanmax(residuals) < tol) if k > 1 else True
    rank_ok = bool(np.min(margins) > np.sqrt(tol))
    return IaVerification(
        alignment_residuals=residuals,
        rank_margins=margins,
        alignment_ok=alignment_ok,
        rank_ok=rank_ok,
    )
