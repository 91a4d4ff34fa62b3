import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Matrix-heavy properties can blow the default 200 ms deadline on a cold
# BLAS; wall-clock flakiness is not a property failure.
settings.register_profile(
    "dense",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("dense")


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
