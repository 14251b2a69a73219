"""Correlated Rayleigh channel ensembles with Gauss-Markov CSI error.

Channels follow the Kronecker transmit-correlation model ``H = Hw @ sqrt(Rt)``
where ``Hw`` has i.i.d. standard complex Gaussian entries (variance 1/2 per
real component, unit total variance) and ``Rt`` is a Hermitian PSD transmit
correlation matrix normalized to ``trace(Rt) = Nt``.

Imperfect CSI mixes the observed fast-fading part with an independent error
term: ``Hw_true = sqrt(1 - beta^2) * Hw_obs + beta * E``.  ``beta = 0`` is
perfect CSI, ``beta = 1`` is a fully uninformative observation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10


def exp_correlation_matrix(alpha: complex, n: int) -> np.ndarray:
    """Exponential (uniform linear array) transmit correlation matrix.

    Entry (i, j) is ``alpha**(j-i)`` above the diagonal and its conjugate
    mirror below, the Hermitian completion of the usual ``alpha**|i-j|``
    model for complex ``alpha``.  The result is Hermitian positive definite
    with trace ``n`` for any ``|alpha| < 1``.

    Parameters
    ----------
    alpha : complex
        Neighbor-antenna correlation coefficient, ``|alpha| < 1``.
    n : int
        Number of transmit antennas.

    Returns
    -------
    np.ndarray
        The n x n correlation matrix.
    """
    if n < 1:
        raise ValueError(f"antenna count must be >= 1, got {n}")
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise ValueError(
            f"|alpha| must be < 1 for a positive definite matrix, got |alpha|={abs(alpha):.4g}"
        )
    powers = alpha ** np.arange(n)
    r = np.empty((n, n), dtype=complex)
    for i in range(n):
        r[i, i:] = powers[: n - i]
        r[i:, i] = np.conj(powers[: n - i])
    check_correlation_matrix(r)
    return r


def check_correlation_matrix(r: np.ndarray) -> None:
    """Validate Hermitian symmetry, positive semidefiniteness and trace."""
    n = r.shape[0]
    if r.shape != (n, n):
        raise ValueError(f"correlation matrix must be square, got {r.shape}")
    if np.max(np.abs(r - r.conj().T)) > HERMITIAN_TOL:
        raise ValueError("correlation matrix is not Hermitian")
    eigvals = np.linalg.eigvalsh(r)
    if eigvals[0] < -PSD_TOL:
        raise ValueError(f"correlation matrix is not PSD (min eigenvalue {eigvals[0]:.3g})")
    if abs(np.trace(r).real - n) > TRACE_TOL:
        raise ValueError(f"correlation matrix trace {np.trace(r).real:.12g} != {n}")


def psd_sqrt(r: np.ndarray) -> np.ndarray:
    """Principal (Hermitian PSD) square root via eigendecomposition.

    Rejects inputs whose smallest eigenvalue is below ``-1e-10``; tiny
    negative eigenvalues inside the tolerance are clipped to zero before
    taking the square root.
    """
    if np.max(np.abs(r - r.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    eigvals, eigvecs = np.linalg.eigh(r)
    if eigvals[0] < -PSD_TOL:
        raise ValueError(f"matrix is not PSD (min eigenvalue {eigvals[0]:.3g})")
    root = np.sqrt(np.clip(eigvals, 0.0, None))
    return (eigvecs * root) @ eigvecs.conj().T


@dataclass(frozen=True)
class Scenario:
    """Full description of one interference-network experiment.

    Attributes
    ----------
    k : int
        Number of transmit/receive pairs.
    nt, nr : int
        Antennas per transmitter / receiver.
    d : tuple[int, ...]
        Streams per user (length ``k``).
    alpha : complex
        Exponential transmit-correlation parameter, ``|alpha| < 1``.
    beta : float
        Gauss-Markov CSI error parameter in [0, 1].
    gamma_db : tuple[float, ...]
        Transmit-SNR grid in dB (``gamma_o = P / sigma^2``).
    trials : int
        Monte-Carlo channel draws.
    seed : int
        Master seed for the per-trial substreams.
    """

    k: int
    nt: int
    nr: int
    d: tuple[int, ...]
    alpha: complex = 0.0
    beta: float = 0.0
    gamma_db: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    trials: int = 20000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "gamma_db", tuple(float(g) for g in self.gamma_db))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.k < 2:
            raise ValueError("need at least 2 users")
        if self.nt < 1 or self.nr < 1:
            raise ValueError("antenna counts must be >= 1")
        if len(self.d) != self.k:
            raise ValueError(f"stream list has length {len(self.d)}, expected k={self.k}")
        if any(di < 1 or di > min(self.nt, self.nr) for di in self.d):
            raise ValueError("each d_i must satisfy 1 <= d_i <= min(Nt, Nr)")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")
        if abs(self.alpha) >= 1.0:
            raise ValueError("|alpha| must be < 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def gamma_lin(self) -> np.ndarray:
        """Transmit-SNR grid in linear scale."""
        return 10.0 ** (np.asarray(self.gamma_db) / 10.0)

    def correlation(self) -> np.ndarray:
        return exp_correlation_matrix(self.alpha, self.nt)


@dataclass
class ChannelSet:
    """One Monte-Carlo draw of all K^2 links.

    ``true_h[i, k]`` is the channel from transmitter k to receiver i;
    ``obs_h`` is the observation the transceivers design against.  When
    ``beta == 0`` the two coincide exactly.
    """

    true_h: np.ndarray  # (K, K, Nr, Nt) complex
    obs_h: np.ndarray  # (K, K, Nr, Nt) complex
    rt: np.ndarray  # (Nt, Nt) Hermitian PSD
    beta: float = 0.0

    def link(self, i: int, k: int) -> tuple[np.ndarray, np.ndarray]:
        return self.true_h[i, k], self.obs_h[i, k]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one Monte-Carlo trial.

    Uses the counter-based Philox generator keyed by the master seed and
    advanced by ``trial`` jumps (2**128 counter steps each), so trial t is
    reproducible in isolation and trials are independent regardless of how
    they are scheduled across workers.
    """
    return np.random.Generator(np.random.Philox(key=seed).jumped(trial))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0, 1) samples: variance 1/2 per real component."""
    z = rng.standard_normal(size=(2,) + tuple(shape))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def sample_channel_set(scenario: Scenario, rng: np.random.Generator) -> ChannelSet:
    """Draw true and observed channels for every link in the network.

    The observed fast-fading parts ``Hw_obs`` and the error terms ``E`` are
    i.i.d. CN(0, 1); both are multiplied on the right by ``sqrt(Rt)``:

    - ``obs_h  = Hw_obs @ sqrt(Rt)``
    - ``true_h = (sqrt(1 - beta^2) * Hw_obs + beta * E) @ sqrt(Rt)``
    """
    k, nr, nt = scenario.k, scenario.nr, scenario.nt
    rt = scenario.correlation()
    sqrt_rt = psd_sqrt(rt)
    hw_obs = complex_normal(rng, (k, k, nr, nt))
    err = complex_normal(rng, (k, k, nr, nt))
    beta = scenario.beta
    obs_h = hw_obs @ sqrt_rt
    if beta == 0.0:
        true_h = obs_h.copy()
    else:
        true_h = (np.sqrt(1.0 - beta**2) * hw_obs + beta * err) @ sqrt_rt
    return ChannelSet(true_h=true_h, obs_h=obs_h, rt=rt, beta=beta)
