import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hcnsim import ScenarioParams, generate_scenario
from hcnsim.model import scenario_from_arrays

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

TINY = ScenarioParams(num_small_cells=1, macro_ues=2, small_ues=2, num_subcarriers=3,
                      delta_macro_bps=9e3, delta_small_bps=9e3)
SMALL = ScenarioParams(num_small_cells=1, macro_ues=3, small_ues=2, num_subcarriers=8,
                       delta_macro_bps=24e3, delta_small_bps=24e3)


@pytest.fixture
def tiny():
    return generate_scenario(1, TINY)


@pytest.fixture
def small():
    return generate_scenario(3, SMALL)


@pytest.fixture(scope="session")
def desk():
    return generate_scenario(1, ScenarioParams())


def single_link(g=1.0, bandwidth=15e3, static=1.0, zeta=1.0, gamma=0.0, pmax=1.0, delta=0.0):
    """One cell, one UE, one subcarrier with CNR ``g`` (unit noise)."""
    return scenario_from_arrays(np.full((1, 1, 1, 1), g), np.ones((1, 1, 1)), (1,), bandwidth_hz=bandwidth,
                                zeta=zeta, static_power_w=static, gamma_w_per_hz=gamma, pmax_w=pmax,
                                delta_macro_bps=delta)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: (int(str(k).rstrip("abc")), str(k))):
            terminalreporter.write_line(RESULTS[key])
