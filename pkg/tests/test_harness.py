import dataclasses
import math
import os

import numpy as np
import pytest

from hcnsim import ScenarioParams, generate_scenario
from hcnsim.errors import InvalidArgumentError
from hcnsim.harness import (
    COLUMNS,
    CsvParseError,
    ExperimentSpec,
    PointResult,
    brute_force_oracle,
    build_rows,
    emit_plotdata,
    exact_feasible,
    format_csv,
    parse_config,
    parse_csv,
    run_experiment,
    spec_from_config,
)
from hcnsim.model import evaluate, scenario_from_arrays

from conftest import SMALL, TINY


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("nope")
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("cnr_sweep", seeds=(), grid=(0,))
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("cnr_sweep", grid=())
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("subcarrier_sweep", grid=(32.5,))
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("ee_vs_rate", grid=(-1.0,))
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("oracle_compare", grid=(128,))
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec("cnr_sweep", grid=(0,), mode="sideways")
    ExperimentSpec("convergence")  # trace kinds need no grid


def test_modes_per_kind():
    assert ExperimentSpec("cnr_sweep", grid=(0,)).modes() == ("underlay", "overlay")
    assert ExperimentSpec("cnr_sweep", grid=(0,), mode="overlay").modes() == ("overlay",)
    assert ExperimentSpec("alpha_trace").modes() == ("overlay",)
    assert ExperimentSpec("oracle_compare", grid=(8,)).modes() == ("underlay", "oracle")


def test_rows_average_feasible_and_count_infeasible():
    spec = ExperimentSpec("cnr_sweep", grid=(0.0,), seeds=(1, 2, 3), mode="overlay")
    results = {(0.0, "overlay", 1): PointResult(10.0, 1.0, 5.0, 3.0),
               (0.0, "overlay", 2): PointResult(),
               (0.0, "overlay", 3): PointResult(20.0, 3.0, 7.0, 5.0)}
    (row,) = build_rows(spec, results)
    assert row["feasible_count"] + row["infeasible_count"] == 3
    assert row["infeasible_count"] == 1
    assert row["mean_ee_bits_per_joule"] == 15.0
    assert row["mean_power_w"] == 6.0
    assert row["iters_mean"] == 4.0


def test_all_infeasible_row_is_nan():
    spec = ExperimentSpec("cnr_sweep", grid=(0.0,), seeds=(1,), mode="overlay")
    (row,) = build_rows(spec, {(0.0, "overlay", 1): PointResult()})
    assert math.isnan(row["mean_ee_bits_per_joule"])
    assert "nan" in format_csv("cnr_sweep", [row])


def test_overlay_sweep_deterministic_csv(tmp_path):
    spec = ExperimentSpec("cnr_sweep", SMALL, seeds=(2, 1), grid=(10.0, 0.0), mode="overlay",
                          output=str(tmp_path / "a.csv"))
    run_experiment(spec)
    run_experiment(dataclasses.replace(spec, output=str(tmp_path / "b.csv")))
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    kind, rows = parse_csv(a.decode())
    assert kind == "cnr_sweep"
    assert [r["grid_value"] for r in rows] == [10.0, 0.0]


def test_repeated_single_seed_gives_identical_rows():
    spec = ExperimentSpec("alpha_trace", SMALL, seeds=(3,))
    assert run_experiment(spec) == run_experiment(spec)
    twice = run_experiment(dataclasses.replace(spec, seeds=(3, 3)))
    once = run_experiment(spec)
    assert [r["mean_ee_bits_per_joule"] for r in twice] == [r["mean_ee_bits_per_joule"] for r in once]


def test_alpha_trace_rows():
    rows = run_experiment(ExperimentSpec("alpha_trace", SMALL, seeds=(1, 2)))
    assert len(rows) == 7
    assert [r["grid_value"] for r in rows] == list(range(7))
    assert all(0 < r["mean_aux"] < 1 for r in rows)


def test_subcarrier_sweep_scales_qos():
    from hcnsim.harness import _params_for
    spec = ExperimentSpec("subcarrier_sweep", ScenarioParams(), grid=(128,))
    p = _params_for(spec, 128)
    assert p.num_subcarriers == 128
    assert p.delta_macro_bps == pytest.approx(2 * ScenarioParams().delta_macro_bps)


# ---------------------------------------------------------------------------
# oracle


def test_oracle_refuses_large_instances(small):
    with pytest.raises(InvalidArgumentError, match="too large"):
        brute_force_oracle(small, 8)
    with pytest.raises(InvalidArgumentError):
        brute_force_oracle(generate_scenario(1, TINY), 65)


def test_oracle_zero_qos_is_interior():
    sc = generate_scenario(2, dataclasses.replace(TINY, delta_macro_bps=0.0, delta_small_bps=0.0))
    res = brute_force_oracle(sc, 16)
    assert res.feasible and res.ee > 0
    assert res.power.sum() > 0


def test_oracle_single_link_matches_analytic_maximizer():
    g, W, zeta, pc, pmax, steps = 50.0, 15e3, 4.0, 0.5, 1.0, 64
    sc = scenario_from_arrays(np.full((1, 1, 1, 1), g), np.ones((1, 1, 1)), (1,), bandwidth_hz=W, zeta=zeta,
                              static_power_w=pc, pmax_w=pmax)
    ee = lambda p: W * np.log2(1 + g * p) / (zeta * p + pc)
    # stationary point of the unimodal ratio, by bisection on the derivative sign
    lo, hi = 1e-12, pmax
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        d = g / (1 + g * mid) * (zeta * mid + pc) - zeta * np.log(1 + g * mid)
        lo, hi = (mid, hi) if d > 0 else (lo, mid)
    q = pmax / steps
    below = math.floor(lo / q) * q
    best = max((below, below + q), key=ee)
    res = brute_force_oracle(sc, steps)
    assert res.power[0, 0] == pytest.approx(best)
    assert res.ee == pytest.approx(ee(best), rel=1e-12)
    assert res.search_size == steps + 1


@pytest.mark.parametrize("seed", range(1, 4))
def test_oracle_dominates_every_grid_point(seed):
    sc = generate_scenario(seed, TINY)
    steps = 8
    res = brute_force_oracle(sc, steps)
    assert res.feasible
    assert exact_feasible(sc, res.assignment, res.power)
    assert evaluate(sc, res.assignment, res.power).ee == pytest.approx(res.ee, rel=1e-12)
    rng = np.random.default_rng(seed)
    for _ in range(200):
        lv = rng.multinomial(steps, np.ones(4) / 4, size=2)[:, :3]  # per-cell levels with sum <= steps
        p = lv * res.grid_step_w[:, None]
        from hcnsim.underlay import assign_max_sinr
        a = assign_max_sinr(sc, p)
        if exact_feasible(sc, a, p, tol=0.0) and p.sum() > 0:
            assert evaluate(sc, a, p).ee <= res.ee * (1 + 1e-12)


# ---------------------------------------------------------------------------
# plot data and config


def write(path, text):
    path.write_text(text)
    return str(path)


def test_plotdata_empty_csv_errors_and_writes_nothing(tmp_path):
    out = tmp_path / "out"
    with pytest.raises(CsvParseError):
        emit_plotdata(write(tmp_path / "e.csv", ""), str(out))
    assert not out.exists()


def test_plotdata_reports_line_numbers(tmp_path):
    text = "# hcnsim experiment=cnr_sweep\n" + ",".join(COLUMNS) + "\n0.0,overlay,1,2,3,1,0,7,nan\n1.0,overlay,oops,2,3,1,0,7,nan\n"
    with pytest.raises(CsvParseError) as info:
        emit_plotdata(write(tmp_path / "bad.csv", text), str(tmp_path / "o"))
    assert info.value.line == 4
    short = "# hcnsim experiment=cnr_sweep\n" + ",".join(COLUMNS) + "\n0.0,overlay,1\n"
    with pytest.raises(CsvParseError, match="line 3"):
        emit_plotdata(write(tmp_path / "short.csv", short), str(tmp_path / "o"))


def test_plotdata_fig4_has_both_series(tmp_path):
    rows = []
    for cnr in (0.0, 5.0, 10.0, 15.0, 20.0):
        for mode, ee in (("underlay", 2.0), ("overlay", 1.0)):
            rows.append(dict(zip(COLUMNS, (cnr, mode, ee * cnr + 1, 1.0, 10.0, 3, 0, 5.0, math.nan))))
    path = write(tmp_path / "f4.csv", format_csv("cnr_sweep", rows))
    paths = emit_plotdata(path, str(tmp_path / "plots"))
    names = sorted(os.path.basename(p) for p in paths)
    assert names == ["fig4_overlay.dat", "fig4_underlay.dat"]
    for p in paths:
        lines = open(p).read().splitlines()
        assert lines[0].startswith("# fig4 analog")
        data = [l.split() for l in lines if not l.startswith("#")]
        assert [float(d[0]) for d in data] == [0.0, 5.0, 10.0, 15.0, 20.0]


def test_plotdata_fig2_trace_monotone(tmp_path):
    spec = ExperimentSpec("convergence", TINY, seeds=(5,), output=str(tmp_path / "c.csv"))
    run_experiment(spec)
    (path,) = emit_plotdata(spec.output, str(tmp_path / "p"))
    assert os.path.basename(path) == "fig2_underlay.dat"
    ee = [float(l.split()[1]) for l in open(path) if not l.startswith("#")]
    assert len(ee) >= 2
    assert np.all(np.diff(ee) >= 0)


def test_parse_config_rules():
    cfg = parse_config("a = 1  # note\n\n# whole line\nb=two\n")
    assert cfg == {"a": "1", "b": "two"}
    with pytest.raises(InvalidArgumentError, match="line 2"):
        parse_config("a = 1\nno equals sign\n")
    with pytest.raises(InvalidArgumentError, match="duplicate"):
        parse_config("a = 1\na = 2\n")


def test_spec_from_config():
    text = """
    experiment = cnr_sweep
    seeds = 1, 2, 3
    grid = 0 5 10
    num_small_cells = 2
    small_pmax_dbm = 27
    cnr_db = none
    sca_tol = 1e-5
    mode = overlay
    """
    spec = spec_from_config(text)
    assert spec.kind == "cnr_sweep"
    assert spec.seeds == (1, 2, 3)
    assert spec.grid == (0.0, 5.0, 10.0)
    assert spec.params.num_small_cells == 2
    assert spec.params.small_pmax_dbm == 27.0
    assert spec.params.cnr_db is None
    assert spec.solver.sca_tol == 1e-5
    assert spec.mode == "overlay"
    assert spec_from_config(text, seeds=(9,)).seeds == (9,)
    with pytest.raises(InvalidArgumentError, match="unknown config key"):
        spec_from_config(text + "\nbogus = 1\n")
    with pytest.raises(InvalidArgumentError):
        spec_from_config("seeds = 1\n")
