"""Comparison metrics built on the exponential SINR laws.

Sum rate uses the closed form ``E{log2(1 + g)} = exp1_scaled(1/m) / ln 2``
for ``g ~ Exp(mean m)``; an independent adaptive-quadrature evaluation is
kept alongside as the validation route.  SER integrates an AWGN
symbol-error curve against the SINR law; for BPSK the textbook closed form
serves as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from contourpy import LineType, contour_generator
from scipy import integrate, special

from .analytic import ExpDist

_CF_SWITCH = 50.0
_CF_TERMS = 40


def exp1_scaled(x):
    """``exp(x) * E1(x)`` without overflow for large arguments.

    Uses scipy's E1 below ``x = 50`` and the standard continued fraction
    above, where the direct product would overflow.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x <= 0):
        raise ValueError("argument must be positive")
    out = np.empty_like(x)
    small = x <= _CF_SWITCH
    if small.any():
        out[small] = np.exp(x[small]) * special.exp1(x[small])
    if (~small).any():
        xv = x[~small]
        t = xv + 2.0 * _CF_TERMS + 1.0
        for j in range(_CF_TERMS - 1, -1, -1):
            t = xv + 2.0 * j + 1.0 - (j + 1.0) ** 2 / t
        out[~small] = 1.0 / t
    return float(out[0]) if scalar else out


def ergodic_rate(dist: ExpDist) -> float:
    """Closed-form ``E{log2(1 + g)}`` in bits/s/Hz for an exponential SINR."""
    return exp1_scaled(1.0 / dist.mean) / np.log(2.0)


def ergodic_rate_quad(dist: ExpDist) -> float:
    """Adaptive-quadrature evaluation of the same expectation (oracle route)."""
    m = dist.mean
    val, _ = integrate.quad(lambda t: np.log2(1.0 + m * t) * np.exp(-t), 0.0, np.inf)
    return val


def sum_rate(dists: list[ExpDist]) -> float:
    """Network throughput: sum of per-stream ergodic rates."""
    return float(sum(ergodic_rate(d) for d in dists))


@dataclass(frozen=True)
class ModulationModel:
    """AWGN symbol-error curve of a modulation, as a function of SNR."""

    name: str
    awgn_ser: Callable[[np.ndarray], np.ndarray]


def _qfunc(x):
    return 0.5 * special.erfc(np.asarray(x) / np.sqrt(2.0))


BPSK = ModulationModel("bpsk", lambda g: _qfunc(np.sqrt(2.0 * np.asarray(g, dtype=float))))
QPSK = ModulationModel(
    "qpsk",
    lambda g: (lambda q: 2.0 * q - q**2)(_qfunc(np.sqrt(np.asarray(g, dtype=float)))),
)


def ser(dist: ExpDist, mod: ModulationModel = BPSK) -> float:
    """Average symbol error rate of the SINR law under a modulation."""
    m = dist.mean
    val, _ = integrate.quad(lambda t: mod.awgn_ser(m * t) * np.exp(-t), 0.0, np.inf)
    return val


def ser_bpsk_closed(mean: float) -> float:
    """Textbook Rayleigh-faded BPSK error rate; oracle for :func:`ser`."""
    return 0.5 * (1.0 - np.sqrt(mean / (1.0 + mean)))


def empirical_ser(samples: np.ndarray, mod: ModulationModel = BPSK) -> float:
    """Semi-analytic SER: AWGN curve averaged over empirical SINR samples."""
    return float(np.mean(mod.awgn_ser(np.asarray(samples))))


def kl_divergence(samples: np.ndarray, dist: ExpDist, grid_size: int = 100) -> float:
    """KL divergence of the empirical SINR law from an analytic one.

    Histogram on a uniform grid from 0 to the empirical 99.9th percentile
    with ``grid_size`` bins.  Both the empirical and the analytic masses are
    normalized on that support, so the divergence is nonnegative (Gibbs) and
    invariant under a common rescaling of samples and mean.  Empty empirical
    bins contribute zero.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples.size}")
    hi = np.percentile(samples, 99.9)
    edges = np.linspace(0.0, hi, grid_size + 1)
    counts, _ = np.histogram(samples, bins=edges)
    total = counts.sum()
    if total == 0:
        raise ValueError("no samples fall inside the histogram support")
    p = counts / total
    q = dist.bin_masses(edges)
    q = q / q.sum()
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / np.maximum(q[mask], 1e-300))))


def mean_sinr_ratio(
    beta: float,
    gamma_o: float,
    d: int,
    n: int,
    sigma2: float,
    cal_i: float,
    sigma2_sm: float,
    tr_rt: float | None = None,
) -> float:
    """Mean per-stream SINR of an N-stream SM link over the IA network's.

    Exactly the ratio of the two exponential means, so multiplying by the
    IA mean recovers the SM mean.  Values above 1 mean the SM link wins on
    mean SINR (equal per-user stream counts assumed).  ``tr_rt`` defaults to
    the trace-``N`` normalization.
    """
    tr = float(n) if tr_rt is None else float(tr_rt)
    num = sigma2 * d * (beta**2 * cal_i + 1.0 / gamma_o)
    den = sigma2_sm * (beta**2 * tr + n / gamma_o)
    return float(num / den)


def unity_contour(
    alpha_grid: np.ndarray,
    beta_grid: np.ndarray,
    ratio_surface: np.ndarray,
    level: float = 1.0,
) -> list[np.ndarray]:
    """Level-``level`` contour polylines of a ratio surface.

    ``ratio_surface[i, j]`` is the ratio at ``(alpha_grid[i], beta_grid[j])``.
    Crossings are linearly interpolated on grid edges and chained into
    polylines of (alpha, beta) points; a surface that never crosses the
    level yields an empty list.
    """
    alpha_grid = np.asarray(alpha_grid, dtype=float)
    beta_grid = np.asarray(beta_grid, dtype=float)
    z = np.asarray(ratio_surface, dtype=float)
    if z.shape != (alpha_grid.size, beta_grid.size):
        raise ValueError("ratio surface shape must be (len(alpha), len(beta))")
    gen = contour_generator(x=alpha_grid, y=beta_grid, z=z.T, line_type=LineType.Separate)
    return [np.asarray(line) for line in gen.lines(level)]
