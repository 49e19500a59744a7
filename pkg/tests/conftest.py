import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "liesym",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("liesym")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_spd(rng, cond_max=50.0):
    while True:
        A = rng.normal(size=(3, 3))
        g = A @ A.T + 0.3 * np.eye(3)
        if np.linalg.cond(g) < cond_max:
            return g
