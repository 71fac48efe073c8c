import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lame_choquet.lame import LameInstance

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def legendre2():
    return LameInstance([-1, 1], [1, 1], 2, 2)


@pytest.fixture
def p3_instance():
    return LameInstance([-1, 0, 1], [1, 1, 1], 2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
