import functools

import pytest
from hypothesis import HealthCheck, settings

from toricqc.examples import RunConfig, resolution, run_example

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def cached_resolution(name):
    return resolution(name)


@functools.lru_cache(maxsize=None)
def cached_report(name, convention=None):
    return run_example(RunConfig(name, convention=convention))


@pytest.fixture(scope="session")
def fl123():
    return cached_resolution("fl123")


@pytest.fixture(scope="session")
def gr24():
    return cached_resolution("gr24")


@pytest.fixture(scope="session")
def gr25():
    return cached_resolution("gr25")
