import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import tvtrack as tv

settings.register_profile(
    "ci", derandomize=True, max_examples=50, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def scalar_a():
    return tv.make_scalar_problem()


@pytest.fixture(scope="session")
def scalar_b():
    return tv.make_scalar_problem(tv.ScalarProblemParams(kappa=0.1, mu=0.5))


@pytest.fixture(scope="session")
def tracking():
    return tv.make_tracking_problem()


@pytest.fixture(scope="session")
def quad_affine_1d():
    return tv.make_quadratic_problem(
        1,
        drift=lambda t: np.array([t]),
        drift_rate=lambda t: np.array([1.0]),
        drift_accel=lambda t: np.array([0.0]),
    )


@pytest.fixture(scope="session")
def quad_affine_2d():
    rate = np.array([1.0, 2.0])
    return tv.make_quadratic_problem(
        2,
        drift=lambda t: rate * t,
        drift_rate=lambda t: rate,
        drift_accel=lambda t: np.zeros(2),
    )


@pytest.fixture(scope="session")
def quad_sine_1d():
    return tv.make_quadratic_problem(
        1,
        drift=lambda t: np.array([np.sin(t)]),
        drift_rate=lambda t: np.array([np.cos(t)]),
        drift_accel=lambda t: np.array([-np.sin(t)]),
    )
