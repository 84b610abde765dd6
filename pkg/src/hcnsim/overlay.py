"""Spectrum-overlay resource allocation.

The macro-cell takes the first ``n`` subcarriers and maximizes its resource
efficiency (a blend of EE and SE weighted by ``alpha``); the small cells
share the remaining subcarriers and each maximizes its own EE, treating
one another's interference as absent.  On its own band every cell sees
noise only, so assignment is max-CNR and power follows water-filling with a
scalar search over the total transmit power ``P_T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InfeasibleError, InvalidArgumentError
from .model import UNASSIGNED, Metrics, Scenario, evaluate
from .numerics import SolverConfig, WaterfillCurve, single_ue_waterfill

CASES = ("lower", "interior", "upper")


@dataclass(frozen=True)
class CellProblem:
    """Single-cell power problem on a fixed band with fixed assignment.

    ``cnr`` holds the best UE's CNR on each subcarrier of the band.
    """

    cnr: np.ndarray
    bandwidth_hz: float       # per subcarrier
    rate_target: float
    pmax: float
    zeta: float
    static_power: float       # P_s + gamma * used bandwidth
    used_bandwidth: float
    total_bandwidth: float
    p_tot: float


@dataclass
class PowerSearch:
    """Outcome of the ``P_T`` search for one cell at one ``alpha``."""

    power: np.ndarray         # per subcarrier of the band
    p_t: float
    p_s: float
    rate: float
    ee: float
    re: float
    case: str
    iterations: int


@dataclass
class ReProfile:
    """``lambda_RE`` as a function of ``P_T`` on ``[P_S, P_max]``."""

    problem: CellProblem
    alpha: float
    curve: WaterfillCurve
    p_s: float

    def _parts(self, p_t):
        pr = self.problem
        extra = max(p_t - self.p_s, 0.0)
        rate = self.curve.rate(extra)
        total = pr.zeta * p_t + pr.static_power
        return rate, total

    def ee(self, p_t) -> float:
        rate, total = self._parts(p_t)
        return rate / total

    def value(self, p_t) -> float:
        pr = self.problem
        rate, total = self._parts(p_t)
        eta_p = total / pr.p_tot
        eta_w = pr.used_bandwidth / pr.total_bandwidth
        return rate / total * (self.alpha + (1.0 - self.alpha) * eta_p / eta_w)

    def derivative(self, p_t) -> float:
        """Closed-form slope of ``lambda_RE`` in ``P_T``."""
        pr = self.problem
        extra = max(p_t - self.p_s, 0.0)
        rate, total = self._parts(p_t)
        eta_p = total / pr.p_tot
        eta_w = pr.used_bandwidth / pr.total_bandwidth
        slope = self.curve.derivative(extra)
        return ((self.alpha + (1.0 - self.alpha) * eta_p / eta_w) * slope
                - self.alpha * pr.zeta * rate / total) / total

    def allocation(self, p_t) -> np.ndarray:
        return self.curve.power(max(p_t - self.p_s, 0.0))


def _profile(problem: CellProblem, alpha: float) -> ReProfile:
    wf = single_ue_waterfill(problem.cnr, problem.rate_target, problem.bandwidth_hz)
    if wf.consumed > problem.pmax:
        raise InfeasibleError(f"rate target needs {wf.consumed:g} W, budget is {problem.pmax:g} W")
    curve = WaterfillCurve(problem.cnr, wf.power, problem.bandwidth_hz)
    return ReProfile(problem, alpha, curve, wf.consumed)


def gradient_power_search(profile: ReProfile, config: SolverConfig) -> PowerSearch:
    """Ascend ``lambda_RE`` over ``P_T`` in ``[P_S, P_max]`` along its derivative.

    The step starts at ``search_step * P_max`` and halves whenever a move
    fails to improve the objective; the search ends once the step falls
    below ``power_tol * P_max``.
    """
    lo, hi = profile.p_s, profile.problem.pmax
    p, val = lo, profile.value(lo)
    step = config.search_step * hi
    it = 0
    if hi > lo:
        for it in range(1, config.max_gradient_iters + 1):
            d = profile.derivative(p)
            if (d <= 0 and p <= lo) or (d >= 0 and p >= hi) or step <= config.power_tol * hi:
                break
            cand = min(max(p + np.sign(d) * step, lo), hi)
            cv = profile.value(cand)
            if cv > val:
                p, val = cand, cv
            else:
                step /= 2.0
    case = "lower" if p <= lo else "upper" if p >= hi else "interior"
    rate, _ = profile._parts(p)
    return PowerSearch(profile.allocation(p), p, lo, rate, profile.ee(p), val, case, it)


def _cell_band(scenario: Scenario, cell: int, subcarriers) -> tuple:
    """Max-CNR UE per subcarrier of the band and its CNR."""
    ch = scenario.channel
    k = ch.ue_counts[cell]
    cnr = ch.gain[cell, :k, cell][:, subcarriers] / ch.noise[cell, :k][:, subcarriers]
    best = np.argmax(cnr, axis=0)
    return best, cnr[best, np.arange(len(subcarriers))]


def _cell_problem(scenario: Scenario, cell: int, subcarriers, rate_target: float, cnr) -> CellProblem:
    pm = scenario.power
    used = scenario.bandwidth * len(subcarriers)
    return CellProblem(
        cnr=cnr,
        bandwidth_hz=scenario.bandwidth,
        rate_target=float(rate_target),
        pmax=float(scenario.qos.pmax_w[cell]),
        zeta=float(pm.zeta[cell]),
        static_power=float(pm.static_power_w[cell] + pm.gamma_w_per_hz[cell] * used),
        used_bandwidth=used,
        total_bandwidth=scenario.spectrum.total_bandwidth_hz,
        p_tot=scenario.p_tot_w,
    )


def _check_set(scenario: Scenario, subcarriers) -> np.ndarray:
    s = np.asarray(subcarriers, dtype=int).ravel()
    if s.size == 0:
        raise InvalidArgumentError("subcarrier set is empty")
    if np.any(s < 0) or np.any(s >= scenario.num_subcarriers) or np.unique(s).size != s.size:
        raise InvalidArgumentError("subcarrier set has invalid or repeated indices")
    return s


@dataclass
class CellSolution:
    """Allocation of one cell on its band, embedded in full-size arrays."""

    assignment: np.ndarray    # (N,), UNASSIGNED off the band
    power: np.ndarray         # (N,)
    search: PowerSearch

    @property
    def value(self) -> float:
        return self.search.re


def _solve_cell(scenario, cell, subcarriers, alpha, config) -> CellSolution:
    s = _check_set(scenario, subcarriers)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgumentError("alpha must lie in [0, 1]")
    best, cnr = _cell_band(scenario, cell, s)
    target = scenario.qos.targets()[cell]
    try:
        prof = _profile(_cell_problem(scenario, cell, s, target, cnr), alpha)
    except InfeasibleError as exc:
        raise InfeasibleError(f"cell {cell}: {exc}", cell=cell, stage="overlay") from exc
    res = gradient_power_search(prof, config)
    a = np.full(scenario.num_subcarriers, UNASSIGNED)
    a[s] = best
    p = np.zeros(scenario.num_subcarriers)
    p[s] = res.power
    return CellSolution(a, p, res)


def macro_re_fixed_alpha(scenario: Scenario, subcarriers, alpha: float,
                         config: Optional[SolverConfig] = None) -> CellSolution:
    """Macro-cell RE maximization on ``subcarriers`` at a fixed ``alpha``."""
    return _solve_cell(scenario, 0, subcarriers, alpha, config or SolverConfig())


def re_profile(scenario: Scenario, subcarriers, alpha: float, cell: int = 0) -> ReProfile:
    """``lambda_RE(P_T)`` of ``cell`` on ``subcarriers``, for probing and tests."""
    s = _check_set(scenario, subcarriers)
    _, cnr = _cell_band(scenario, cell, s)
    return _profile(_cell_problem(scenario, cell, s, scenario.qos.targets()[cell], cnr), alpha)


@dataclass
class AlphaSearch:
    alpha: float
    solution: CellSolution
    trace: list = field(default_factory=list)   # (alpha_min, alpha_max, alpha_mid, lambda_mid, lambda_max)

    @property
    def value(self) -> float:
        return self.solution.value


def bisect_alpha(scenario: Scenario, subcarriers, config: Optional[SolverConfig] = None) -> AlphaSearch:
    """Bisection over ``alpha`` that keeps the half whose upper end scores higher.

    Each step compares ``lambda_RE(alpha_mid)`` with ``lambda_RE(alpha_max)``
    and moves ``alpha_max`` down to the midpoint when the midpoint is at
    least as good, otherwise moves ``alpha_min`` up.  The search presumes
    ``lambda_RE`` is unimodal in ``alpha``; see :func:`alpha_profile`.
    """
    config = config or SolverConfig()
    lo, hi = 0.0, 1.0
    at_hi = macro_re_fixed_alpha(scenario, subcarriers, hi, config)
    trace = []
    while hi - lo > config.alpha_tol:
        mid = 0.5 * (lo + hi)
        at_mid = macro_re_fixed_alpha(scenario, subcarriers, mid, config)
        trace.append((lo, hi, mid, at_mid.value, at_hi.value))
        if at_mid.value >= at_hi.value:
            hi, at_hi = mid, at_mid
        else:
            lo = mid
    return AlphaSearch(hi, at_hi, trace)


def alpha_profile(scenario: Scenario, subcarriers, config: Optional[SolverConfig] = None,
                  points: int = 11) -> tuple:
    """``lambda_RE`` at ``points`` evenly spaced ``alpha`` values, for auditing
    the unimodality assumed by :func:`bisect_alpha`."""
    config = config or SolverConfig()
    alphas = np.linspace(0.0, 1.0, points)
    values = np.array([macro_re_fixed_alpha(scenario, subcarriers, a, config).value for a in alphas])
    return alphas, values


@dataclass
class BandwidthSplit:
    macro_count: int
    macro_set: np.ndarray
    remaining_set: np.ndarray
    alpha: AlphaSearch
    sweep: list               # (macro_count, alpha, lambda_RE), infeasible counts skipped

    @property
    def value(self) -> float:
        return self.alpha.value


def smallcell_reserve(scenario: Scenario) -> int:
    """Fewest trailing subcarriers on which every small cell meets its rate
    target within budget (0 without small cells)."""
    L = scenario.num_cells - 1
    N = scenario.num_subcarriers
    if L == 0:
        return 0
    target = scenario.qos.delta_small_bps
    start = max(scenario.ue_counts[1:])
    for r in range(start, N + 1):
        band = np.arange(N - r, N)
        ok = True
        for cell in range(1, L + 1):
            _, cnr = _cell_band(scenario, cell, band)
            if single_ue_waterfill(cnr, target, scenario.bandwidth).consumed > scenario.qos.pmax_w[cell]:
                ok = False
                break
        if ok:
            return r
    raise InfeasibleError("small-cell rate targets cannot be met even on the whole band", stage="overlay")


def bandwidth_sweep(scenario: Scenario, config: Optional[SolverConfig] = None,
                    max_count: Optional[int] = None) -> BandwidthSplit:
    """Try every macro band ``0..n-1`` for ``n`` from ``K_0`` up and keep the best RE.

    By default ``n`` stops where the rest of the band is just wide enough
    for the small cells (see :func:`smallcell_reserve`).
    """
    config = config or SolverConfig()
    N = scenario.num_subcarriers
    k0 = scenario.ue_counts[0]
    if N < k0:
        raise InfeasibleError(f"{N} subcarriers cannot serve {k0} macro UEs", cell=0, stage="overlay")
    if max_count is None:
        max_count = N - smallcell_reserve(scenario)
    max_count = min(max_count, N)
    best = None
    sweep = []
    for n in range(k0, max_count + 1):
        try:
            res = bisect_alpha(scenario, np.arange(n), config)
        except InfeasibleError:
            continue
        sweep.append((n, res.alpha, res.value))
        if best is None or res.value > best[1].value:
            best = (n, res)
    if best is None:
        raise InfeasibleError("macro rate target infeasible for every bandwidth split", cell=0, stage="overlay")
    n, res = best
    return BandwidthSplit(n, np.arange(n), np.arange(n, N), res, sweep)


def smallcell_ee(scenario: Scenario, subcarriers, cell: int, config: Optional[SolverConfig] = None) -> CellSolution:
    """EE-optimal allocation of small cell ``cell`` on ``subcarriers``."""
    if not 1 <= cell < scenario.num_cells:
        raise InvalidArgumentError(f"cell {cell} is not a small cell")
    return _solve_cell(scenario, cell, subcarriers, 1.0, config or SolverConfig())


@dataclass
class OverlayResult:
    assignment: np.ndarray
    power: np.ndarray
    metrics: Metrics
    split: BandwidthSplit
    trace: list               # (stage, value) pairs
    realized: Optional[Metrics] = None


def maximize_ee_overlay(scenario: Scenario, config: Optional[SolverConfig] = None,
                        realized: bool = False, max_macro_count: Optional[int] = None) -> OverlayResult:
    """Macro bandwidth sweep followed by independent small-cell EE maximization.

    Metrics use the noise-only SINR the optimizer assumes; with
    ``realized=True`` the result also carries metrics re-evaluated with the
    intra-tier interference among small cells.
    """
    config = config or SolverConfig()
    M, N = scenario.num_cells, scenario.num_subcarriers
    split = bandwidth_sweep(scenario, config, max_macro_count)
    a = np.full((M, N), UNASSIGNED)
    p = np.zeros((M, N))
    macro = split.alpha.solution
    a[0], p[0] = macro.assignment, macro.power
    trace = [("macro_re", split.value)]
    for cell in range(1, M):
        if split.remaining_set.size == 0:
            raise InfeasibleError(f"no subcarriers left for small cell {cell}", cell=cell, stage="smallcell")
        try:
            sol = smallcell_ee(scenario, split.remaining_set, cell, config)
        except InfeasibleError as exc:
            raise InfeasibleError(str(exc), cell=cell, stage="smallcell") from exc
        a[cell], p[cell] = sol.assignment, sol.power
        trace.append((f"small_ee_{cell}", sol.search.ee))
    metrics = evaluate(scenario, a, p, "overlay", alpha=split.alpha.alpha)
    trace.append(("system_ee", metrics.ee))
    extra = evaluate(scenario, a, p, "overlay", alpha=split.alpha.alpha, interference=True) if realized else None
    return OverlayResult(a, p, metrics, split, trace, extra)
