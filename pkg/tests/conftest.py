import numpy as np
import pytest

from helicity_lab.grid import GridSpec
from helicity_lab.scenarios import hopfion


@pytest.fixture(scope="session")
def grid8():
    return GridSpec(8)


@pytest.fixture(scope="session")
def grid16():
    return GridSpec(16)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def hopfion_grid():
    # 16 core radii across the box, 4 lattice points per core radius
    return GridSpec(64, 16.0)


@pytest.fixture(scope="session")
def hopfion_state(hopfion_grid):
    return hopfion(hopfion_grid, 1.0 / 16)


def state_distance(s1, s2):
    """Max spectral difference of (E, B), relative to the larger RMS field."""
    from helicity_lab.state import state_scale

    scale = max(state_scale(s1), state_scale(s2), 1e-300)
    d = max(
        np.max(np.abs(s1.E_hat.data - s2.E_hat.data)),
        np.max(np.abs(s1.B_hat.data - s2.B_hat.data)),
    )
    return float(d) / scale


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
