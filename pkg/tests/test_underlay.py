import itertools

import numpy as np
import pytest

from hcnsim import ScenarioParams, generate_scenario
from hcnsim.errors import InfeasibleError, InvalidArgumentError
from hcnsim.model import cell_rates, evaluate, scenario_from_arrays
from hcnsim.numerics import multilevel_waterfill
from hcnsim.underlay import (
    assign_max_cnr,
    assign_max_sinr,
    inner_max_ee_at_rate,
    maximize_ee_underlay,
    rate_cap,
)

from conftest import TINY


@pytest.fixture(scope="module")
def tiny_run():
    sc = generate_scenario(5, TINY)
    return sc, maximize_ee_underlay(sc)


def test_assign_picks_highest_rate():
    gain = np.zeros((1, 2, 1, 1))
    gain[0, :, 0, 0] = [31.0, 7.0]  # rates 5 and 3 in units of W_C
    sc = scenario_from_arrays(gain, np.ones((1, 2, 1)), (2,))
    assert assign_max_sinr(sc, [[1.0]])[0, 0] == 0


def test_assign_tie_goes_to_lowest_index():
    gain = np.ones((1, 2, 1, 1))
    sc = scenario_from_arrays(gain, np.ones((1, 2, 1)), (2,))
    assert assign_max_sinr(sc, [[1.0]])[0, 0] == 0


def test_assign_rejects_negative_power(tiny):
    with pytest.raises(InvalidArgumentError):
        assign_max_sinr(tiny, -np.ones((2, 3)))


@pytest.mark.parametrize("seed", range(5))
def test_assign_matches_exhaustive_oracle(tiny, seed):
    rng = np.random.default_rng(seed)
    p = rng.uniform(0, 0.5, (2, 3))
    a = assign_max_sinr(tiny, p)
    got = cell_rates(tiny, a, p)
    for l in range(2):
        best = 0.0
        for choice in itertools.product(range(tiny.ue_counts[l]), repeat=3):
            b = a.copy()
            b[l] = choice
            best = max(best, cell_rates(tiny, b, p)[l])
        assert got[l] == pytest.approx(best, rel=1e-12)


def test_max_cnr_assignment_is_exclusive(desk):
    a = assign_max_cnr(desk)
    assert a.shape == (desk.num_cells, desk.num_subcarriers)
    assert np.all(a >= 0)
    assert np.all(a < np.array(desk.ue_counts)[:, None])


def test_inner_pins_rates_and_power_falls(small):
    rates = small.qos.targets() * np.array([2.0, 1.5])
    res = inner_max_ee_at_rate(small, rates)
    assert np.all(np.diff(res.power_trace) <= 1e-9)
    got = cell_rates(small, res.assignment, res.power)
    assert np.all(got >= rates * (1 - 1e-6))
    # min power leaves every rate constraint active
    assert np.allclose(got, rates, rtol=1e-3)
    assert res.metrics.ee == pytest.approx(res.metrics.total_rate / res.metrics.total_power)


def test_inner_power_is_locally_minimal(small):
    rates = small.qos.targets() * 2
    res = inner_max_ee_at_rate(small, rates)
    for l in range(small.num_cells):
        p = res.power.copy()
        p[l] *= 0.99
        assert cell_rates(small, res.assignment, p)[l] < rates[l]


def test_single_cell_single_ue_one_alternation():
    rng = np.random.default_rng(4)
    gain = rng.exponential(1.0, (1, 1, 1, 4))
    sc = scenario_from_arrays(gain, np.full((1, 1, 4), 0.1), (1,), pmax_w=2.0, delta_macro_bps=30e3)
    res = inner_max_ee_at_rate(sc, [30e3])
    assert res.alternations == 1


def test_rate_cap_is_full_budget_waterfill(small):
    p = np.full((small.num_cells, small.num_subcarriers), 0.01)
    ch = small.channel
    k = small.ue_counts[1]
    h = ch.gain[1, :k]
    interf = np.einsum("kmn,mn->kn", h, p) - h[:, 1] * p[1]
    cnr = (h[:, 1] / (interf + ch.noise[1, :k])).max(axis=0)
    expect = multilevel_waterfill(cnr, np.zeros_like(cnr), small.qos.pmax_w[1], small.bandwidth).rate
    assert rate_cap(small, p, 1) == pytest.approx(expect, rel=1e-12)


def test_underlay_trace_and_feasibility(tiny_run):
    sc, res = tiny_run
    assert np.all(np.diff(res.trace) >= 0)
    assert res.trace[-1] == pytest.approx(res.metrics.ee)
    assert np.all(res.metrics.cell_rates >= sc.qos.targets() * (1 - 1e-6))
    assert np.all(res.power.sum(axis=1) <= sc.qos.pmax_w * (1 + 1e-9))
    assert res.converged
    again = evaluate(sc, res.assignment, res.power, "underlay")
    assert again.ee == pytest.approx(res.metrics.ee, rel=1e-12)


def test_underlay_infeasible_qos_reports_init_stage():
    sc = generate_scenario(5, TINY).with_targets(1e9, 1e9)
    with pytest.raises(InfeasibleError) as info:
        maximize_ee_underlay(sc)
    assert info.value.stage == "init"
