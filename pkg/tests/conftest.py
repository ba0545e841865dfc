import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from scaleorder import GeneralizedGamma, Grid, make_special

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def exp_baseline():
    return make_special("exp")


@pytest.fixture
def gg_example():
    return GeneralizedGamma(0.8, 0.5)


@pytest.fixture
def coarse_grid():
    return Grid(1e-3, 50.0, 400)


# acceptance criteria record one line each; the summary prints them in order
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
