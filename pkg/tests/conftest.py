import pytest
from hypothesis import HealthCheck, settings

from casct.fixtures import scenario

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex1():
    return scenario("example1")


@pytest.fixture(scope="session")
def ex2():
    return scenario("example2")


@pytest.fixture(scope="session")
def case1():
    return scenario("case1")


@pytest.fixture(scope="session")
def case2():
    return scenario("case2")


def w(text):
    """Space-separated events to a word; "" is the empty word."""
    return tuple(text.split())
