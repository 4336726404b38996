import numpy as np
import pytest

from chainforge import Spectrum


def random_symmetric_spectrum(rng, n, hi=100.0):
    """Distinct values in [-hi, hi], symmetric about zero (odd n includes 0)."""
    while True:
        half = np.sort(rng.uniform(0.05 * hi, hi, size=n // 2))
        if np.all(np.diff(half) > 1e-6 * hi):
            break
    if n % 2:
        vals = np.concatenate([-half[::-1], [0.0], half])
    else:
        vals = np.concatenate([-half[::-1], half])
    return Spectrum(vals)


@pytest.fixture
def symmetric_spectrum_factory():
    return random_symmetric_spectrum
