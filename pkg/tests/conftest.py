import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("axblab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("axblab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def np_bump(x, center, hw):
    """Reference bump ``exp(-1/(1-u^2))`` written directly in numpy."""
    u = (np.asarray(x, float) - center) / hw
    out = np.zeros_like(u)
    m = np.abs(u) < 1
    out[m] = np.exp(-1.0 / (1.0 - u[m] ** 2))
    return out


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.acceptance_lines():
        terminalreporter.write_line(line)
