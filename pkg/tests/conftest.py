import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_psd(rng, n, cond_max=20.0):
    """Random Hermitian PD matrix with trace n and bounded condition number."""
    z = rng.standard_normal((2, n, n))
    g = z[0] + 1j * z[1]
    q, _ = np.linalg.qr(g)
    eig = rng.uniform(1.0, cond_max, size=n)
    eig = eig / eig.sum() * n
    return (q * eig) @ q.conj().T
