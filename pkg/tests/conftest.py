import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rot_about(axis, angle):
    from commuting_tuples.rotations import RotationElement

    return RotationElement.about(axis, angle)


def invol(axis):
    from commuting_tuples.rotations import RotationElement

    return RotationElement.involution(axis)


E1, E2, E3 = np.eye(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
