import numpy as np
import pytest

from unruh_preth import rates_from_gammas


@pytest.fixture(scope="session")
def std_rates():
    """The (0.8, 0.2) rate pair used throughout the reference scenarios."""
    return rates_from_gammas(0.8, 0.2, 1.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
