"""
Pytest configuration and fixtures.
"""

import numpy as np
import pytest

from dispersion.config import get_settings
from dispersion.geometry import CircleSpec, Point, Segment


# Environment every test runs under: default tolerances, no log files, warnings only.
TEST_ENV = {
    "DISPERSION_LOG_TO_FILE": "false",
    "DISPERSION_LOG_LEVEL": "WARNING",
}

UNPINNED = ("DISPERSION_EPS", "DISPERSION_DEBUG_CHECKS", "DISPERSION_BENCH_WORKERS")


@pytest.fixture(autouse=True)
def test_settings(monkeypatch):
    """
    Fixture for test settings.

    The LRU cache is cleared around every test and the environment is pinned
    so that a stray DISPERSION_* variable cannot change tolerances.
    """
    for name in UNPINNED:
        monkeypatch.delenv(name, raising=False)
    for name, value in TEST_ENV.items():
        monkeypatch.setenv(name, value)
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Deterministic numpy generator for seeded random suites."""
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_segment():
    """The host segment [0, 10] on the x-axis."""
    return Segment(Point(0.0, 0.0), Point(10.0, 0.0))


@pytest.fixture
def unit_circle():
    """The unit circle centered at the origin."""
    return CircleSpec(Point(0.0, 0.0), 1.0)
