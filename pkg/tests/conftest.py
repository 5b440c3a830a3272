import os

import pytest
from hypothesis import HealthCheck, settings

from tests.strategies import make

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def golden_instance():
    return make([(0, 5), (2, 1), (4, 6), (6, 2)], [(1, 3, 5, 4)], "golden")
