"""Experiment driver: seeded Monte Carlo sweeps, a brute-force oracle for
tiny instances, CSV output and gnuplot data files.

Each experiment kind mirrors one figure of the evaluation:

========================  ======  ==========================================
kind                      figure  grid axis
========================  ======  ==========================================
``ee_vs_rate``            fig1    rate of ``sweep_cell`` (bit/s); others at QoS
``convergence``           fig2    rotation iteration (grid ignored)
``alpha_trace``           fig3    bisection step (grid ignored)
``cnr_sweep``             fig4    mean own-link CNR (dB)
``subcarrier_sweep``      fig5    number of subcarriers; QoS scaled with it
``cell_sweep``            fig6    number of small cells
``oracle_compare``        --      power grid steps of the oracle
========================  ======  ==========================================
"""
from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from .errors import ConvergenceError, HcnError, InfeasibleError, InvalidArgumentError
from .model import Scenario, ScenarioParams, UNASSIGNED, evaluate, generate_scenario
from .numerics import SolverConfig
from .overlay import maximize_ee_overlay
from .underlay import assign_max_sinr, inner_max_ee_at_rate, maximize_ee_underlay

KINDS = ("ee_vs_rate", "convergence", "alpha_trace", "cnr_sweep", "subcarrier_sweep", "cell_sweep",
         "oracle_compare")
FIGURES = {"ee_vs_rate": "fig1", "convergence": "fig2", "alpha_trace": "fig3", "cnr_sweep": "fig4",
           "subcarrier_sweep": "fig5", "cell_sweep": "fig6", "oracle_compare": "oracle"}
FIGURE_TITLES = {
    "fig1": "EE versus rate of the swept cell (underlay inner optimum)",
    "fig2": "underlay EE per constraint-rotation iteration",
    "fig3": "macro RE at the bisection midpoint per alpha-bisection step",
    "fig4": "EE versus mean own-link CNR (dB)",
    "fig5": "EE versus number of subcarriers",
    "fig6": "EE versus number of small cells",
    "oracle": "underlay algorithm versus brute-force oracle",
}
COLUMNS = ("grid_value", "mode", "mean_ee_bits_per_joule", "mean_se_bits_per_hz", "mean_power_w",
           "feasible_count", "infeasible_count", "iters_mean", "mean_aux")
HEADER_PREFIX = "# hcnsim experiment="
MODES = ("underlay", "overlay", "both")

# oracle size limits
ORACLE_MAX_CELLS = 2
ORACLE_MAX_SUBCARRIERS = 3
ORACLE_MAX_UES = 2
ORACLE_MAX_STEPS = 64
ORACLE_PASS_RATIO = 0.95


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: what to run, on which scenarios, over which grid.

    ``mode`` selects the optimizers for the sweeps ("both" runs underlay and
    overlay); kinds tied to one optimizer ignore it.  ``sweep_cell`` is the
    cell whose rate ``ee_vs_rate`` sweeps.
    """

    kind: str
    params: ScenarioParams = field(default_factory=ScenarioParams)
    seeds: tuple = (1,)
    grid: tuple = ()
    output: Optional[str] = None
    mode: str = "both"
    solver: SolverConfig = field(default_factory=SolverConfig)
    workers: int = 1
    sweep_cell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if not self.seeds:
            raise InvalidArgumentError("seed list is empty")
        if any(s < 0 or s >= 2 ** 64 for s in self.seeds):
            raise InvalidArgumentError("seeds must be 64-bit non-negative integers")
        if self.mode not in MODES:
            raise InvalidArgumentError(f"mode must be one of {MODES}")
        if self.workers < 1:
            raise InvalidArgumentError("workers must be >= 1")
        if self.kind in ("convergence", "alpha_trace"):
            return
        if not self.grid:
            raise InvalidArgumentError(f"{self.kind} needs a non-empty grid")
        g = np.asarray(self.grid)
        if not np.all(np.isfinite(g)):
            raise InvalidArgumentError("grid values must be finite")
        if self.kind == "ee_vs_rate":
            if np.any(g <= 0):
                raise InvalidArgumentError("rate grid values must be positive")
            if not 0 <= self.sweep_cell <= self.params.num_small_cells:
                raise InvalidArgumentError("sweep_cell out of range")
        elif self.kind in ("subcarrier_sweep", "oracle_compare"):
            if np.any(g < 1) or np.any(g != np.round(g)):
                raise InvalidArgumentError(f"{self.kind} grid values must be positive integers")
        elif self.kind == "cell_sweep":
            if np.any(g < 0) or np.any(g != np.round(g)):
                raise InvalidArgumentError("cell_sweep grid values must be non-negative integers")
        if self.kind == "oracle_compare" and np.any(g > ORACLE_MAX_STEPS):
            raise InvalidArgumentError(f"oracle grid steps are limited to {ORACLE_MAX_STEPS}")

    def modes(self) -> tuple:
        if self.kind in ("ee_vs_rate", "convergence", "oracle_compare"):
            return ("underlay",) if self.kind != "oracle_compare" else ("underlay", "oracle")
        if self.kind == "alpha_trace":
            return ("overlay",)
        return ("underlay", "overlay") if self.mode == "both" else (self.mode,)


@dataclass
class PointResult:
    """Outcome of one optimizer run; ``ee`` is None when infeasible."""

    ee: Optional[float] = None
    se: float = math.nan
    power: float = math.nan
    iters: float = math.nan
    aux: float = math.nan
    series: list = field(default_factory=list)   # per-step values for trace kinds


# ---------------------------------------------------------------------------
# brute-force oracle


@dataclass
class OracleResult:
    ee: float                       # best exact EE (0 when nothing is feasible)
    assignment: Optional[np.ndarray]
    power: Optional[np.ndarray]     # quantized, multiples of P_max[l] / steps
    grid_step_w: np.ndarray         # per-cell power quantum
    search_size: int                # power vectors examined (budget-pruned)
    feasible: bool


def _budget_grid(n: int, steps: int) -> np.ndarray:
    """All integer vectors of length ``n`` with entries in ``0..steps`` summing to at most ``steps``."""
    combos = [c for c in itertools.product(range(steps + 1), repeat=n) if sum(c) <= steps]
    return np.array(combos, dtype=np.int64).reshape(-1, n)


def brute_force_oracle(scenario: Scenario, grid_steps: int, mode: str = "underlay",
                       chunk: int = 256) -> OracleResult:
    """Exhaustive search over quantized powers for the best feasible EE.

    Every cell's power on every subcarrier takes a value ``j * P_max / steps``
    with the per-cell total within budget.  For fixed powers the SINR of a UE
    does not depend on which UEs the other subcarriers serve, so serving each
    subcarrier with its highest-SINR UE maximizes every cell's rate at once;
    enumerating powers with that assignment therefore covers all exclusive
    assignments.
    """
    M, N, K = scenario.num_cells, scenario.num_subcarriers, max(scenario.ue_counts)
    problems = []
    if M > ORACLE_MAX_CELLS:
        problems.append(f"{M} cells > {ORACLE_MAX_CELLS}")
    if N > ORACLE_MAX_SUBCARRIERS:
        problems.append(f"{N} subcarriers > {ORACLE_MAX_SUBCARRIERS}")
    if K > ORACLE_MAX_UES:
        problems.append(f"{K} UEs per cell > {ORACLE_MAX_UES}")
    if not 1 <= grid_steps <= ORACLE_MAX_STEPS:
        problems.append(f"{grid_steps} grid steps outside 1..{ORACLE_MAX_STEPS}")
    if problems:
        raise InvalidArgumentError("instance too large for the oracle: " + "; ".join(problems))
    if mode != "underlay":
        raise InvalidArgumentError("the oracle covers the underlay problem only")

    ch = scenario.channel
    levels = _budget_grid(N, grid_steps)                  # (V, N) integer levels
    quantum = scenario.qos.pmax_w / grid_steps
    targets = scenario.qos.targets()
    bw = scenario.bandwidth
    # rate table: rate[l][n] has one axis per cell holding that cell's level on n
    q = np.arange(grid_steps + 1)
    tables = []
    for l in range(M):
        per_n = []
        for n in range(N):
            grids = np.meshgrid(*[q * quantum[m] for m in range(M)], indexing="ij")
            best = np.zeros(grids[0].shape)
            for k in range(ch.ue_counts[l]):
                h = ch.gain[l, k, :, n]
                interf = sum(h[m] * grids[m] for m in range(M) if m != l)
                s = h[l] * grids[l] / (interf + ch.noise[l, k, n])
                best = np.maximum(best, bw * np.log2(1.0 + s))
            per_n.append(best)
        tables.append(per_n)

    static = float(np.sum(scenario.power.static_power_w + scenario.power.gamma_w_per_hz
                          * scenario.spectrum.total_bandwidth_hz))
    V = len(levels)
    best_ee, best_idx = 0.0, None
    if M == 1:
        rates = sum(tables[0][n][levels[:, n]] for n in range(N))
        power = static + scenario.power.zeta[0] * quantum[0] * levels.sum(axis=1)
        ok = rates >= targets[0] * (1 - 1e-12)
        ee = np.where(ok, rates / power, -1.0)
        i = int(np.argmax(ee))
        if ee[i] > 0:
            best_ee, best_idx = float(ee[i]), (i,)
        search = V
    else:
        p1 = scenario.power.zeta[1] * quantum[1] * levels.sum(axis=1)
        for start in range(0, V, chunk):
            blk = levels[start:start + chunk]                        # cell-0 vectors
            r0 = sum(tables[0][n][blk[:, n][:, None], levels[None, :, n]] for n in range(N))
            r1 = sum(tables[1][n][blk[:, n][:, None], levels[None, :, n]] for n in range(N))
            power = static + scenario.power.zeta[0] * quantum[0] * blk.sum(axis=1)[:, None] + p1[None, :]
            ok = (r0 >= targets[0] * (1 - 1e-12)) & (r1 >= targets[1] * (1 - 1e-12))
            ee = np.where(ok, (r0 + r1) / power, -1.0)
            j = int(np.argmax(ee))
            if ee.flat[j] > best_ee:
                a, b = np.unravel_index(j, ee.shape)
                best_ee, best_idx = float(ee.flat[j]), (start + int(a), int(b))
        search = V * V
    if best_idx is None:
        return OracleResult(0.0, None, None, quantum, search, False)
    power = np.array([levels[i] * quantum[l] for l, i in enumerate(best_idx)], dtype=float)
    return OracleResult(best_ee, assign_max_sinr(scenario, power), power, quantum, search, True)


def exact_feasible(scenario: Scenario, assignment, power, mode: str = "underlay", tol: float = 1e-6) -> bool:
    """Exact check of budgets and rate floors (relative tolerance ``tol``)."""
    p = np.asarray(power, dtype=float)
    if np.any(p < 0):
        return False
    if np.any(p.sum(axis=1) > scenario.qos.pmax_w * (1 + 1e-9)):
        return False
    m = evaluate(scenario, assignment, p, mode)
    return bool(np.all(m.cell_rates >= scenario.qos.targets() * (1 - tol)))


# ---------------------------------------------------------------------------
# per-point runs


def _params_for(spec: ExperimentSpec, grid_value: float) -> ScenarioParams:
    p = spec.params
    if spec.kind == "cnr_sweep":
        return dataclasses.replace(p, cnr_db=float(grid_value))
    if spec.kind == "subcarrier_sweep":
        n = int(grid_value)
        scale = n / p.num_subcarriers
        return dataclasses.replace(p, num_subcarriers=n, delta_macro_bps=p.delta_macro_bps * scale,
                                   delta_small_bps=p.delta_small_bps * scale)
    if spec.kind == "cell_sweep":
        return dataclasses.replace(p, num_small_cells=int(grid_value))
    return p


def _metrics_point(scenario: Scenario, metrics, iters, aux=math.nan) -> PointResult:
    return PointResult(metrics.ee, metrics.se, metrics.total_power, float(iters), aux)


def run_point(spec: ExperimentSpec, grid_value: float, seed: int, mode: str) -> PointResult:
    """One optimizer run; infeasible or non-converged runs return ``ee=None``."""
    scenario = generate_scenario(seed, _params_for(spec, grid_value))
    cfg = spec.solver
    try:
        if spec.kind == "ee_vs_rate":
            rates = scenario.qos.targets()
            rates[spec.sweep_cell] = grid_value
            if grid_value < scenario.qos.targets()[spec.sweep_cell]:
                return PointResult()
            r = inner_max_ee_at_rate(scenario, rates, cfg)
            return _metrics_point(scenario, r.metrics, r.alternations)
        if spec.kind == "convergence":
            r = maximize_ee_underlay(scenario, cfg)
            out = _metrics_point(scenario, r.metrics, r.iterations, float(r.converged))
            out.series = list(r.trace)
            return out
        if spec.kind == "alpha_trace":
            r = maximize_ee_overlay(scenario, cfg)
            out = _metrics_point(scenario, r.metrics, len(r.split.alpha.trace), r.split.alpha.alpha)
            out.series = [(mid, lam) for (_, _, mid, lam, _) in r.split.alpha.trace]
            return out
        if spec.kind == "oracle_compare":
            if mode == "oracle":
                o = brute_force_oracle(scenario, int(grid_value))
                if not o.feasible:
                    return PointResult()
                m = evaluate(scenario, o.assignment, o.power, "underlay")
                return _metrics_point(scenario, m, 0, float(o.search_size))
            r = maximize_ee_underlay(scenario, cfg)
            if not exact_feasible(scenario, r.assignment, r.power):
                return PointResult()
            return _metrics_point(scenario, r.metrics, r.iterations)
        if mode == "underlay":
            r = maximize_ee_underlay(scenario, cfg)
            return _metrics_point(scenario, r.metrics, r.iterations)
        r = maximize_ee_overlay(scenario, cfg, realized=True)
        # the overlay optimizer ignores small-cell mutual interference; report what it delivers
        return _metrics_point(scenario, r.realized, len(r.split.alpha.trace), r.metrics.ee)
    except (InfeasibleError, ConvergenceError):
        return PointResult()


def _task(args):
    spec, g, seed, mode = args
    return (g, mode, seed), run_point(spec, g, seed, mode)


# ---------------------------------------------------------------------------
# aggregation and CSV


def _fmt(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def _row(grid_value, mode, results: Sequence[PointResult], aux=None) -> dict:
    ok = [r for r in results if r.ee is not None]
    mean = (lambda v: float(np.mean(v)) if v else math.nan)
    if aux is None:
        aux = mean([r.aux for r in ok if not math.isnan(r.aux)])
    return {
        "grid_value": grid_value, "mode": mode,
        "mean_ee_bits_per_joule": mean([r.ee for r in ok]),
        "mean_se_bits_per_hz": mean([r.se for r in ok]),
        "mean_power_w": mean([r.power for r in ok]),
        "feasible_count": len(ok), "infeasible_count": len(results) - len(ok),
        "iters_mean": mean([r.iters for r in ok]),
        "mean_aux": aux,
    }


def _trace_rows(mode, results: Sequence[PointResult], pick) -> list:
    """Rows per trace step; shorter traces are held at their last value."""
    ok = [r for r in results if r.ee is not None and r.series]
    steps = max((len(r.series) for r in ok), default=0)
    rows = []
    for i in range(steps):
        vals = [pick(r.series[min(i, len(r.series) - 1)]) for r in ok]
        ee = [v[0] for v in vals]
        aux = [v[1] for v in vals if not math.isnan(v[1])]
        rows.append({
            "grid_value": float(i), "mode": mode,
            "mean_ee_bits_per_joule": float(np.mean(ee)),
            "mean_se_bits_per_hz": float(np.mean([r.se for r in ok])),
            "mean_power_w": float(np.mean([r.power for r in ok])),
            "feasible_count": len(ok), "infeasible_count": len(results) - len(ok),
            "iters_mean": float(np.mean([r.iters for r in ok])),
            "mean_aux": float(np.mean(aux)) if aux else math.nan,
        })
    if not rows:
        rows.append(_row(0.0, mode, results))
    return rows


def collect(spec: ExperimentSpec) -> dict:
    """Run every (grid point, mode, seed) task; returns results keyed by that triple."""
    grid = spec.grid if spec.kind not in ("convergence", "alpha_trace") else (0.0,)
    tasks = [(spec, g, s, m) for g in grid for m in spec.modes() for s in spec.seeds]
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            done = list(pool.map(_task, tasks))
    else:
        done = [_task(t) for t in tasks]
    return dict(done)


def build_rows(spec: ExperimentSpec, results: dict) -> list:
    rows = []
    if spec.kind == "convergence":
        per = [results[(0.0, "underlay", s)] for s in spec.seeds]
        return _trace_rows("underlay", per, lambda v: (v, math.nan))
    if spec.kind == "alpha_trace":
        per = [results[(0.0, "overlay", s)] for s in spec.seeds]
        return _trace_rows("overlay", per, lambda v: (v[1], v[0]))
    for g in spec.grid:
        for m in spec.modes():
            per = [results[(g, m, s)] for s in spec.seeds]
            aux = None
            if spec.kind == "oracle_compare" and m == "underlay":
                oracle = [results[(g, "oracle", s)] for s in spec.seeds]
                pairs = [(a.ee, o.ee) for a, o in zip(per, oracle) if o.ee is not None]
                aux = (float(np.mean([a is not None and a >= ORACLE_PASS_RATIO * o for a, o in pairs]))
                       if pairs else math.nan)
            rows.append(_row(g, m, per, aux))
    return rows


def format_csv(kind: str, rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"{HEADER_PREFIX}{kind}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) if c != "mode" and not c.endswith("_count") else r[c] for c in COLUMNS])
    return buf.getvalue()


def run_experiment(spec: ExperimentSpec) -> list:
    """Run ``spec``; writes the CSV to ``spec.output`` when set and returns the rows."""
    rows = build_rows(spec, collect(spec))
    if spec.output:
        text = format_csv(spec.kind, rows)
        with open(spec.output, "w", newline="") as fh:
            fh.write(text)
    return rows


# ---------------------------------------------------------------------------
# plot data


class CsvParseError(HcnError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def parse_csv(text: str) -> tuple:
    """Parse experiment CSV text into ``(kind, rows)``; errors carry line numbers."""
    lines = text.splitlines()
    if not any(l.strip() for l in lines):
        raise CsvParseError("empty CSV")
    kind = None
    i = 0
    if lines and lines[0].startswith("#"):
        head = lines[0]
        if not head.startswith(HEADER_PREFIX):
            raise CsvParseError("unrecognized comment header", 1)
        kind = head[len(HEADER_PREFIX):].strip()
        if kind not in KINDS:
            raise CsvParseError(f"unknown experiment kind {kind!r}", 1)
        i = 1
    if i >= len(lines):
        raise CsvParseError("missing header row", i + 1)
    header = next(csv.reader([lines[i]]))
    missing = [c for c in COLUMNS[:-1] if c not in header]
    if missing:
        raise CsvParseError(f"missing columns {missing}", i + 1)
    rows = []
    for ln, line in enumerate(lines[i + 1:], start=i + 2):
        if not line.strip():
            continue
        cells = next(csv.reader([line]))
        if len(cells) != len(header):
            raise CsvParseError(f"expected {len(header)} fields, found {len(cells)}", ln)
        rec = dict(zip(header, cells))
        try:
            row = {c: (rec[c] if c == "mode" else int(rec[c]) if c.endswith("_count") else float(rec[c]))
                   for c in header}
        except ValueError as exc:
            raise CsvParseError(f"bad value ({exc})", ln) from None
        rows.append(row)
    if not rows:
        raise CsvParseError("no data rows", len(lines))
    return kind, rows


def emit_plotdata(csv_path, outdir, kind: Optional[str] = None) -> list:
    """Split an experiment CSV into one whitespace-separated file per series.

    Files are named ``<figure>_<mode>.dat`` and start with comment lines
    naming the figure analog and the columns.  Returns the written paths.
    """
    with open(csv_path) as fh:
        text = fh.read()
    found, rows = parse_csv(text)
    kind = kind or found
    if kind is None:
        raise CsvParseError("experiment kind unknown: no header comment and none given")
    fig = FIGURES[kind]
    os.makedirs(outdir, exist_ok=True)
    paths = []
    modes = sorted({r["mode"] for r in rows})
    cols = [c for c in COLUMNS if c != "mode" and c in rows[0]]
    for mode in modes:
        path = os.path.join(outdir, f"{fig}_{mode}.dat")
        with open(path, "w") as fh:
            fh.write(f"# {fig} analog: {FIGURE_TITLES[fig]}\n")
            fh.write(f"# series: {mode}\n")
            fh.write("# " + " ".join(cols) + "\n")
            for r in rows:
                if r["mode"] == mode:
                    fh.write(" ".join(_fmt(r[c]) if not c.endswith("_count") else str(r[c]) for c in cols) + "\n")
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# config files

_EXPERIMENT_KEYS = ("experiment", "seeds", "grid", "output", "mode", "workers", "sweep_cell")


def _parse_value(raw: str, typ):
    raw = raw.strip()
    if raw.lower() in ("none", "null", ""):
        return None
    if typ is int:
        return int(raw)
    if typ is float:
        return float(raw)
    return raw


def parse_config(text: str) -> dict:
    """Parse flat ``key = value`` text (``#`` comments) into a dict of strings."""
    out = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"config line {ln}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise InvalidArgumentError(f"config line {ln}: empty key")
        if key in out:
            raise InvalidArgumentError(f"config line {ln}: duplicate key {key!r}")
        out[key] = value
    return out


def _number_list(raw: str) -> tuple:
    return tuple(float(x) for x in raw.replace(",", " ").split())


def spec_from_config(text: str, **overrides) -> ExperimentSpec:
    """Build an :class:`ExperimentSpec` from config text.

    Scenario keys are the :class:`ScenarioParams` field names, solver keys
    the :class:`SolverConfig` field names; ``experiment``, ``seeds``,
    ``grid``, ``output``, ``mode``, ``workers`` and ``sweep_cell`` set the
    experiment itself.  Keyword ``overrides`` replace config values.
    """
    cfg = parse_config(text)
    p_types = {f.name: f.type for f in fields(ScenarioParams)}
    s_types = {f.name: f.type for f in fields(SolverConfig)}
    p_kw, s_kw = {}, {}
    for key, raw in cfg.items():
        if key in _EXPERIMENT_KEYS:
            continue
        if key in p_types:
            typ = int if p_types[key] in (int, "int") else float if "float" in str(p_types[key]) else str
            try:
                p_kw[key] = _parse_value(raw, typ)
            except ValueError:
                raise InvalidArgumentError(f"bad value for {key}: {raw!r}") from None
        elif key in s_types:
            typ = int if s_types[key] in (int, "int") else float
            try:
                s_kw[key] = _parse_value(raw, typ)
            except ValueError:
                raise InvalidArgumentError(f"bad value for {key}: {raw!r}") from None
        else:
            raise InvalidArgumentError(f"unknown config key {key!r}")
    args = {
        "kind": cfg.get("experiment"),
        "params": ScenarioParams(**p_kw),
        "solver": SolverConfig(**s_kw),
    }
    if "seeds" in cfg:
        args["seeds"] = tuple(int(x) for x in _number_list(cfg["seeds"]))
    if "grid" in cfg:
        args["grid"] = _number_list(cfg["grid"])
    for key, conv in (("output", str), ("mode", str), ("workers", int), ("sweep_cell", int)):
        if key in cfg:
            args[key] = conv(cfg[key])
    args.update({k: v for k, v in overrides.items() if v is not None})
    if args["kind"] is None:
        raise InvalidArgumentError("config does not name an experiment")
    return ExperimentSpec(**args)


def scenario_params_from_config(text: str) -> ScenarioParams:
    """Scenario part of a config; other keys are ignored."""
    cfg = parse_config(text)
    p_types = {f.name: f.type for f in fields(ScenarioParams)}
    kw = {}
    for key, raw in cfg.items():
        if key in p_types:
            typ = int if p_types[key] in (int, "int") else float if "float" in str(p_types[key]) else str
            kw[key] = _parse_value(raw, typ)
    return ScenarioParams(**kw)
