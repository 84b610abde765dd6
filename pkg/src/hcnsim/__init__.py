"""Energy-efficient subcarrier and power allocation for two-tier OFDMA
heterogeneous networks: underlay (shared band) and overlay (split band)."""

from .errors import ConvergenceError, HcnError, InfeasibleError, InvalidArgumentError
from .model import (
    Metrics,
    Scenario,
    ScenarioParams,
    dbm_to_watts,
    evaluate,
    generate_scenario,
    link_rate,
    read_scenario,
    sinr,
    write_scenario,
)
from .numerics import SolverConfig

__version__ = "0.1.0"
