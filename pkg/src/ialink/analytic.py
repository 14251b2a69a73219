"""Closed-form and approximate post-processing SINR laws.

Every law here is an exponential distribution whose mean encodes the
network geometry, transmit correlation and CSI quality:

- perfect CSI, no correlation: mean ``gamma_o / d``;
- transmit correlation scales stream n by ``1 / sigma2[n]`` where
  ``sigma2`` is the diagonal of the inverse precoder-correlation matrix
  ``Rtilde = E{F^* Rt F}``;
- imperfect CSI adds a self-interference floor proportional to the
  network-wide precoder correlation trace.

``Rtilde`` itself is approximated from the asymptotic first and second
moments of Wishart eigenvectors, since the precoder columns are
least-dominant eigenvectors of a (approximately) Wishart matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import check_correlation_matrix

EIGENGAP_TOL = 1e-6
_IDENTITY_ATOL = 1e-12


@dataclass(frozen=True)
class ExpDist:
    """Exponential SINR law parameterized by its linear-scale mean."""

    mean: float

    def __post_init__(self):
        if not self.mean > 0:
            raise ValueError(f"mean must be positive, got {self.mean}")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x >= 0
        out[pos] = np.exp(-x[pos] / self.mean) / self.mean
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0, -np.expm1(-np.maximum(x, 0) / self.mean), 0.0)
        return out if out.ndim else float(out)

    def bin_masses(self, edges: np.ndarray) -> np.ndarray:
        """Probability mass in each interval of a grid of bin edges."""
        cdf = self.cdf(np.asarray(edges))
        return np.diff(cdf)


def sinr_dist_perfect(gamma_o: float, d: int) -> ExpDist:
    """Per-stream SNR law for perfect CSI and uncorrelated antennas."""
    if gamma_o <= 0 or d < 1:
        raise ValueError("need gamma_o > 0 and d >= 1")
    return ExpDist(gamma_o / d)


def sinr_scaling_bounds(rt: np.ndarray, d: int) -> tuple[float | None, float]:
    """Deterministic bounds on the correlation-induced stream scaling.

    For any orthonormal-column precoder ensemble, the diagonal entries of
    ``(E{F^* Rt F})^{-1}`` fall between ``1/lam_max`` and ``1/lam_min`` when
    ``d = 1``.  For ``d > 1`` the upper bound is the Kantorovich bound and
    the lower bound combines the quadratic-form and row-energy bounds; the
    lower bound is reported as ``None`` where the formula leaves its
    validity domain (nonpositive value or vanishing denominator).
    """
    rt = np.asarray(rt)
    eig = np.linalg.eigvalsh(rt)  # ascending
    lam_lo, lam_hi = float(eig[0]), float(eig[-1])
    if lam_lo <= 0:
        raise ValueError("correlation matrix must be positive definite")
    if d == 1:
        return (1.0 / lam_hi, 1.0 / lam_lo)
    upper = (lam_lo / lam_hi + lam_hi / lam_lo + 2.0) / (4.0 * lam_lo)
    spec_norm_sq = lam_hi**2
    denom = lam_lo * lam_hi - d * spec_norm_sq
    if denom == 0.0:
        return (None, upper)
    lower = 1.0 / lam_lo + (lam_lo - lam_hi) ** 2 / (lam_lo * denom)
    if lower <= 0.0:
        return (None, upper)
    return (lower, upper)


@dataclass(frozen=True)
class WishartEigvecMoments:
    """Asymptotic eigenvector moments of a complex Wishart matrix.

    ``eigvals``/``eigvecs`` are those of the covariance matrix, sorted
    descending; column p of ``eigvecs`` is the mean of the p-th sample
    eigenvector.  ``cov[p, q, r, s]`` is the covariance between element r of
    sample eigenvector p and element s of sample eigenvector q.
    """

    eigvals: np.ndarray  # (N,), descending
    eigvecs: np.ndarray  # (N, N)
    cov: np.ndarray  # (N, N, N, N)
    dof: int

    def same_vector_block(self, p: int) -> np.ndarray:
        """Covariance matrix of the elements of sample eigenvector p."""
        return self.cov[p, p]


def wishart_eigenvector_moments(rt: np.ndarray, dof: int) -> WishartEigvecMoments:
    """First and second moments of Wishart-matrix eigenvectors.

    Valid for covariance matrices with strictly distinct positive
    eigenvalues; the mean of each sample eigenvector is the corresponding
    covariance eigenvector and the fluctuations shrink like ``1/dof``.
    """
    if dof < 1:
        raise ValueError("degrees of freedom must be >= 1")
    rt = np.asarray(rt)
    lam_asc, u_asc = np.linalg.eigh(rt)
    lam = lam_asc[::-1].copy()
    u = u_asc[:, ::-1].copy()
    n = lam.size
    if lam[-1] <= 0:
        raise ValueError("covariance matrix must be positive definite")
    gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(n)
    if gaps.min() < EIGENGAP_TOL:
        raise ValueError(
            f"eigenvalue gap {gaps.min():.3g} below {EIGENGAP_TOL}; moment formula is singular"
        )
    cov = np.zeros((n, n, n, n), dtype=complex)
    for p in range(n):
        block = np.zeros((n, n), dtype=complex)
        for r in range(n):
            if r == p:
                continue
            ur = u[:, r]
            block += lam[r] / (lam[r] - lam[p]) ** 2 * np.outer(ur, ur.conj())
        cov[p, p] = lam[p] / dof * block
        for q in range(n):
            if q == p:
                continue
            cov[p, q] = (
                -lam[p] * lam[q] / (dof * (lam[p] - lam[q]) ** 2)
                * np.outer(u[:, p], u[:, q].conj())
            )
    return WishartEigvecMoments(eigvals=lam, eigvecs=u, cov=cov, dof=dof)


@dataclass(frozen=True)
class PrecoderCovApprox:
    """Approximate precoder-correlation matrix and its stream scalings.

    ``matrix`` approximates ``E{F^* Rt F}`` with unit-trace column moment
    normalization applied; ``sigma2`` is the diagonal of its inverse;
    ``bounds`` is the deterministic (lower, upper) sandwich for those
    diagonal entries (lower may be None where undefined).
    """

    matrix: np.ndarray
    sigma2: np.ndarray
    bounds: tuple[float | None, float]


def _is_identity(rt: np.ndarray) -> bool:
    return bool(np.allclose(rt, np.eye(rt.shape[0]), atol=_IDENTITY_ATOL, rtol=0.0))


def precoder_covariance_approx(rt: np.ndarray, k: int, d, i: int) -> PrecoderCovApprox:
    """Stream-scaling approximation for user i's precoder.

    The precoder columns are the ``d_i`` least-dominant eigenvectors of a
    matrix treated as complex Wishart with ``sum_{k != i} d_k`` degrees of
    freedom and covariance ``rt``.  Each column's second-moment matrix is
    normalized to unit trace (precoder columns have exactly unit norm) and
    off-diagonal entries are rescaled symmetrically.  For ``rt = I`` the
    result is exact: the identity matrix and unit scalings.
    """
    rt = np.asarray(rt)
    d = tuple(int(x) for x in d)
    if len(d) != k:
        raise ValueError("stream list length must equal user count")
    if not 0 <= i < k:
        raise ValueError("user index out of range")
    d_i = d[i]
    n = rt.shape[0]
    if _is_identity(rt):
        return PrecoderCovApprox(
            matrix=np.eye(d_i, dtype=complex),
            sigma2=np.ones(d_i),
            bounds=(1.0, 1.0),
        )
    check_correlation_matrix(rt)
    dof = sum(d) - d_i
    mom = wishart_eigenvector_moments(rt, dof)
    u = mom.eigvecs
    # Column m of the precoder is the eigenvector with the m-th smallest
    # eigenvalue; in the descending moment ordering that is index n-1-m.
    p_of = [n - 1 - m for m in range(d_i)]
    moment = np.empty((d_i, d_i, n, n), dtype=complex)
    for m in range(d_i):
        for nn in range(d_i):
            pm, pn = p_of[m], p_of[nn]
            moment[nn, m] = mom.cov[pm, pn] + np.outer(u[:, pm], u[:, pn].conj())
    col_trace = np.array([np.trace(moment[m, m]).real for m in range(d_i)])
    rtilde = np.empty((d_i, d_i), dtype=complex)
    for nn in range(d_i):
        for m in range(d_i):
            rtilde[nn, m] = np.trace(moment[nn, m] @ rt) / np.sqrt(col_trace[nn] * col_trace[m])
    rtilde = (rtilde + rtilde.conj().T) / 2.0
    sigma2 = np.diag(np.linalg.inv(rtilde)).real.copy()
    return PrecoderCovApprox(matrix=rtilde, sigma2=sigma2, bounds=sinr_scaling_bounds(rt, d_i))


def csi_interference_scale(rt: np.ndarray, k: int, d, rtilde_per_user=None) -> float:
    """Network-wide precoder correlation trace scaling the CSI-error
    interference: ``sum_i tr(E{F_i^* Rt F_i}) / d_i``.

    Exactly ``K`` for uncorrelated antennas; otherwise evaluated from the
    per-user approximations (computed on demand when not supplied).
    """
    rt = np.asarray(rt)
    d = tuple(int(x) for x in d)
    if _is_identity(rt):
        return float(k)
    if rtilde_per_user is None:
        rtilde_per_user = [precoder_covariance_approx(rt, k, d, i).matrix for i in range(k)]
    total = 0.0
    for i, rtilde in enumerate(rtilde_per_user):
        total += float(np.trace(rtilde).real) / d[i]
    return total


def wishart_sum_match(parts: list[tuple[int, np.ndarray]]) -> tuple[float, np.ndarray]:
    """Single-Wishart moment match for a sum of independent Wisharts.

    Given ``(d_i, Rt_i)`` pairs, returns effective degrees of freedom and
    covariance so that the first moment matches exactly and the second
    approximately.
    """
    if not parts:
        raise ValueError("need at least one Wishart term")
    size = np.asarray(parts[0][1]).shape[0]
    weighted = np.zeros((size, size), dtype=complex)
    denom = 0.0
    for d_i, rt_i in parts:
        rt_i = np.asarray(rt_i)
        if rt_i.shape != (size, size):
            raise ValueError("all covariance matrices must have the same size")
        weighted += d_i * rt_i
        denom += d_i * (np.trace(rt_i @ rt_i).real + np.trace(rt_i).real ** 2)
    num = np.trace(weighted @ weighted).real + np.trace(weighted).real ** 2
    d_bar = num / denom
    return float(d_bar), weighted / d_bar


def sinr_dist_imperfect(
    gamma_o: float, d: int, beta: float, sigma2: float, cal_i: float
) -> ExpDist:
    """Imperfect-CSI per-stream SINR law.

    Mean ``(1 - beta^2) / (sigma2 * d * (beta^2 * cal_i + 1 / gamma_o))``;
    reduces to the perfect-CSI law at ``beta = 0`` and saturates at
    ``(1 - beta^2) / (sigma2 * d * beta^2 * cal_i)`` as ``gamma_o`` grows.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError("beta must be in [0, 1); beta = 1 is degenerate")
    if gamma_o <= 0:
        raise ValueError("gamma_o must be positive")
    mean = (1.0 - beta**2) / (sigma2 * d * (beta**2 * cal_i + 1.0 / gamma_o))
    return ExpDist(mean)


def sinr_dist_sm(gamma_o: float, n: int, beta: float, rt: np.ndarray) -> list[ExpDist]:
    """Per-stream SINR laws of an N-stream spatial-multiplexing ZF link."""
    if not 0.0 <= beta < 1.0:
        raise ValueError("beta must be in [0, 1)")
    rt = np.asarray(rt)
    inv_diag = np.diag(np.linalg.inv(rt)).real
    tr_rt = float(np.trace(rt).real)
    means = (1.0 - beta**2) / (inv_diag * (beta**2 * tr_rt + n / gamma_o))
    return [ExpDist(float(m)) for m in means]


def dominant_eigvec_correlation(rt: np.ndarray, n: int) -> float:
    """Mean correlation energy captured by a beamforming precoder.

    ``E{v_1^* Rt v_1}`` for the dominant right singular vector of an N x N
    observed channel, via the dominant-eigenvector moments of a Wishart
    matrix with N degrees of freedom (unit-trace normalized).  Equals 1 for
    uncorrelated antennas.
    """
    rt = np.asarray(rt)
    if _is_identity(rt):
        return 1.0
    mom = wishart_eigenvector_moments(rt, n)
    moment = mom.same_vector_block(0) + np.outer(mom.eigvecs[:, 0], mom.eigvecs[:, 0].conj())
    return float((np.trace(moment @ rt) / np.trace(moment)).real)
