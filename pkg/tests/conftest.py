import pytest
from hypothesis import HealthCheck, settings

from gptentropy import clear_caches

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def fresh_caches():
    clear_caches()
    yield
