"""The closed-form SINR laws against Monte-Carlo simulation.

Perfect CSI with uncorrelated antennas gives exactly exponential per-stream
SNR with mean gamma_o / d; CSI error deflates the mean and caps it at high
power.  Run: python demos/01_sinr_laws.py  (writes sinr_laws.png)
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy import stats

from ialink import Scenario, sinr_dist_imperfect, sinr_dist_perfect
from ialink.runner import run_ia_sweep

K, N, D = 3, 2, 1
GAMMAS = (10.0, 20.0, 30.0)
BETAS = (0.0, 0.1, 0.2)

sc = Scenario(k=K, nt=N, nr=N, d=(D,) * K, alpha=0.0, beta=0.0,
              gamma_db=GAMMAS, trials=8000, seed=20260809)
res = run_ia_sweep(sc, beta_grid=BETAS)

print("empirical mean vs closed form, 3-user 2x2, alpha = 0")
for bi, beta in enumerate(BETAS):
    for gi, gdb in enumerate(GAMMAS):
        gamma = 10 ** (gdb / 10)
        law = (sinr_dist_perfect(gamma, D) if beta == 0
               else sinr_dist_imperfect(gamma, D, beta, 1.0, float(K)))
        got = res.avg[bi, gi].mean()
        print(f"  beta={beta:4.2f} {gdb:5.1f} dB: sim {got:9.3f}  law {law.mean:9.3f} "
              f"({(got / law.mean - 1) * 100:+.1f}%)")

# Kolmogorov-Smirnov distance to the exponential law at 20 dB
samples = res.avg[0, 1].ravel()
ks = stats.kstest(samples, "expon", args=(0, 100.0)).statistic
print(f"\nKS distance to Exp(100) at 20 dB, beta=0: {ks:.4f}")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
x = np.linspace(0, 500, 400)
axes[0].hist(samples, bins=80, density=True, alpha=0.4, label="simulation")
axes[0].plot(x, sinr_dist_perfect(100.0, D).pdf(x), "r-", label="Exp(100)")
axes[0].set(title="perfect CSI, 20 dB", xlabel="SINR", ylabel="density")
axes[0].legend()

beta = 0.2
caps = (1 - beta**2) / (beta**2 * K)
gammas_fine = np.arange(0, 41, 2.0)
means = [sinr_dist_imperfect(10 ** (g / 10), D, beta, 1.0, K).mean for g in gammas_fine]
axes[1].plot(gammas_fine, means, label="closed form")
sim = [res.avg[2, gi].mean() for gi in range(len(GAMMAS))]
axes[1].plot(GAMMAS, sim, "o", label="simulation")
axes[1].axhline(caps, ls="--", c="gray", label="high-SNR cap")
axes[1].set(title=f"mean SINR vs SNR, beta={beta}", xlabel="transmit SNR (dB)")
axes[1].legend()
fig.tight_layout()
fig.savefig("sinr_laws.png", dpi=120)
print("wrote sinr_laws.png")
