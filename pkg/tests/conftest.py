import math

import numpy as np
import pytest

from qubit_scatter.oracle.modesum import ModeSumConfig, mode_sum_simulate
from qubit_scatter.params import PulseSpec, SystemParams

# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []

# Sample times of the shared mode-sum run (units of 1/Gamma).
MODE_SUM_TIMES = np.round(np.arange(0.0, 10.0 + 1e-9, 0.5), 12)


@pytest.fixture(scope="session")
def ref_params():
    """Reference parameters: Omega/2pi = 5 GHz, Gamma/2pi = 10 MHz, v_g = 3e8 m/s."""
    return SystemParams(omega_q=2 * math.pi * 5e9, gamma_rad=2 * math.pi * 10e6)


@pytest.fixture(scope="session")
def desk():
    """Dimensionless desk-scale parameters: Gamma = 1, Omega = 200, v_g = 1."""
    return SystemParams(omega_q=200.0, gamma_rad=1.0, v_g=1.0)


@pytest.fixture(scope="session")
def desk_pulse(desk):
    return PulseSpec(desk.omega_q + desk.gamma_rad, 1e-3 * desk.gamma_rad)


@pytest.fixture(scope="session")
def mode_sum_run(desk, desk_pulse):
    """One 4000-mode run to Gamma t = 10, shared by the oracle and acceptance tests."""
    return mode_sum_simulate(desk_pulse, desk, ModeSumConfig(), 10.0, sample_times=MODE_SUM_TIMES)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
