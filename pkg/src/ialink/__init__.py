"""Interference-alignment link-level simulator and SINR analytics.

Subpackage layout:

- ``channel``   -- correlated Rayleigh channel ensembles and imperfect CSI
- ``solver``    -- alternating-minimization IA solver and feasibility checks
- ``linklevel`` -- effective channels, ZF equalizers, per-stream SINR
- ``analytic``  -- closed-form / approximate SINR distributions
- ``metrics``   -- sum rate, SER, KL divergence, SM-vs-IA mean-SINR ratio
- ``runner``    -- seeded, batched Monte-Carlo sweep engine
- ``cli``       -- the ``ialink`` experiment driver
"""

from .channel import (
    ChannelSet,
    Scenario,
    exp_correlation_matrix,
    psd_sqrt,
    sample_channel_set,
    trial_rng,
)
from .solver import (
    FeasibilityReport,
    IaSolution,
    alternating_min,
    check_feasibility,
    interference_leakage,
    verify_ia,
)
from .linklevel import (
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
from .analytic import (
    ExpDist,
    PrecoderCovApprox,
    csi_interference_scale,
    dominant_eigvec_correlation,
    precoder_covariance_approx,
    sinr_dist_imperfect,
    sinr_dist_perfect,
    sinr_dist_sm,
    sinr_scaling_bounds,
    wishart_eigenvector_moments,
    wishart_sum_match,
)
from .metrics import (
    BPSK,
    QPSK,
    ModulationModel,
    kl_divergence,
    mean_sinr_ratio,
    ser,
    sum_rate,
    unity_contour,
)

__version__ = "0.1.0"
