"""Spectrum-underlay EE maximization.

All cells share the whole band.  The solver keeps one cell's rate free at a
time (the others pinned at their current values), searches that rate with a
quasi-concave line search, and evaluates each candidate rate vector by
alternating a max-SINR subcarrier assignment with SCA power minimization.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, InfeasibleError, InvalidArgumentError
from .model import Metrics, Scenario, check_assignment, evaluate, sinr_matrix
from .numerics import (
    SolverConfig,
    WaterfillCurve,
    single_ue_waterfill,
    dc_linearize,
    quasiconcave_line_search,
    solve_tangent_program,
    tangent_feasible_point,
)

_SCA_RUNS: contextvars.ContextVar = contextvars.ContextVar("hcnsim_sca_runs", default=None)


@contextlib.contextmanager
def record_sca_runs():
    """Collect the objective sequence of every SCA run started in the block.

    Yields a list that receives one list of weighted total powers per call to
    :func:`min_power_for_rates`.
    """
    runs: list = []
    token = _SCA_RUNS.set(runs)
    try:
        yield runs
    finally:
        _SCA_RUNS.reset(token)


@dataclass
class InnerResult:
    assignment: np.ndarray
    power: np.ndarray
    metrics: Metrics
    alternations: int
    power_trace: list = field(default_factory=list)


@dataclass
class RotationState:
    rates: np.ndarray      # pinned rate per cell
    cell: int              # cell whose rate is currently free
    ee: float
    iteration: int = 0


@dataclass
class UnderlayResult:
    assignment: np.ndarray
    power: np.ndarray
    metrics: Metrics
    trace: list            # best EE after every rotation iteration (entry 0 is the initial point)
    rates: np.ndarray
    converged: bool

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1


def assign_max_sinr(scenario: Scenario, power) -> np.ndarray:
    """Serve every subcarrier of every cell with its highest-SINR UE at ``power``.

    Ties go to the lowest UE index.
    """
    p = np.asarray(power, dtype=float)
    if p.shape != (scenario.num_cells, scenario.num_subcarriers):
        raise InvalidArgumentError(f"power has shape {p.shape}")
    if np.any(p < 0):
        raise InvalidArgumentError("power must be non-negative")
    s = sinr_matrix(scenario, p, "underlay")
    s = np.where(scenario.channel.ue_mask[:, :, None], s, -np.inf)
    return np.argmax(s, axis=1)


def assign_max_cnr(scenario: Scenario) -> np.ndarray:
    ch = scenario.channel
    m = scenario.num_cells
    own = ch.gain[np.arange(m), :, np.arange(m), :] / ch.noise
    own = np.where(ch.ue_mask[:, :, None], own, -np.inf)
    return np.argmax(own, axis=1)


def _weighted(scenario: Scenario, p) -> float:
    return float(scenario.power.zeta @ p.sum(axis=1))


def _iterative_waterfill(lin, targets, budgets, bandwidth, p, rounds=30, margin=1e-3):
    """Heuristic start: every cell water-fills its target against the current
    interference, cells in turn.  Returns the last iterate (maybe infeasible)."""
    M = targets.size
    idx = np.arange(M)
    own = lin.gains[idx, :, idx]                       # (M, N)
    p = p.copy()
    for _ in range(rounds):
        for l in np.nonzero(targets > 0)[0]:
            interf = np.einsum("nm,mn->n", lin.gains[l], p)
            interf = interf - own[l] * p[l] + lin.noise[l]
            cnr = np.where(lin.mask[l], own[l] / interf, 0.0)
            try:
                p[l] = single_ue_waterfill(cnr, targets[l] * (1 + margin), bandwidth).power
            except InfeasibleError:
                return p
        if np.any(p.sum(axis=1) >= budgets):
            return p
        rates = lin.exact_rates(p)
        if np.all(rates[targets > 0] > targets[targets > 0]):
            return p
    return p


def min_power_for_rates(scenario: Scenario, assignment, rate_targets, pmax=None,
                        config: Optional[SolverConfig] = None, start=None) -> np.ndarray:
    """Smallest (ζ-weighted) transmit power meeting every cell's rate target.

    Runs SCA: each step minimizes power under the concave lower bound of the
    rates obtained by linearizing the interference term at the previous
    iterate.  Every iterate is feasible for the true rates, so the objective
    never increases.  When ``start`` is missing or infeasible, a phase-I SCA
    first drives the rates above the targets.
    """
    config = config or SolverConfig()
    a = check_assignment(scenario, assignment, allow_unassigned=False)
    M, N = a.shape
    targets = np.asarray(rate_targets, dtype=float).reshape(-1)
    if targets.shape != (M,):
        raise InvalidArgumentError("need one rate target per cell")
    if np.any(targets < 0) or not np.all(np.isfinite(targets)):
        raise InvalidArgumentError("rate targets must be finite and non-negative")
    budgets = scenario.qos.pmax_w if pmax is None else np.asarray(pmax, dtype=float).reshape(-1)
    w = scenario.power.zeta
    if not np.any(targets > 0):
        return np.zeros((M, N))

    active = targets > 0

    def surplus(q, lin):
        if np.any(q.sum(axis=1) >= budgets):
            return -np.inf
        return float(np.min(lin.exact_rates(q)[active] / targets[active] - 1.0))

    # Candidate starts: the caller's point and the iterative water-filling
    # equilibrium, which is usually close to optimal.  SCA from a feasible
    # but remote start can crawl, so the cheaper feasible one wins.
    lin = dc_linearize(scenario, a, np.zeros((M, N)))
    p = _iterative_waterfill(lin, targets, budgets, scenario.bandwidth, np.zeros((M, N)))
    margin = surplus(p, lin)
    if start is not None:
        q = np.array(start, dtype=float)
        q_margin = surplus(q, lin)
        if q_margin > 0 and (margin <= 0 or _weighted(scenario, q) < _weighted(scenario, p)):
            p, margin = q, q_margin
    if margin == -np.inf:
        # pull an over-budget equilibrium back inside; it still beats a flat start
        p = p * np.minimum(1.0, 0.99 * budgets / np.maximum(p.sum(axis=1), 1e-300))[:, None]
        margin = surplus(p, lin)
    lin = dc_linearize(scenario, a, p)
    feasible = margin > 0
    for _ in range(config.max_sca_iters):
        if feasible:
            break
        p_new, lin_margin = tangent_feasible_point(lin, targets, budgets, config, start=p)
        lin = dc_linearize(scenario, a, p_new)
        new_margin = np.min(lin.exact_rates(p_new)[active] / targets[active] - 1.0)
        if lin_margin > 0 or new_margin > 0:
            p, feasible = p_new, True
            break
        if new_margin <= margin + 1e-9:
            worst = int(np.nonzero(active)[0][np.argmin(lin.exact_rates(p_new)[active] / targets[active])])
            raise InfeasibleError(f"rate target of cell {worst} unreachable within the power budgets",
                                  cell=worst, stage="sca")
        p, margin = p_new, new_margin
    if not feasible:
        raise InfeasibleError("no feasible power found for the rate targets", stage="sca")

    history = [_weighted(scenario, p)]
    converged = False
    # Each step starts the barrier at a gap matched to the last improvement
    # and stops an order of magnitude below it.
    improvement = config.barrier_warm_gap
    for _ in range(config.max_sca_iters):
        res = solve_tangent_program(lin, targets, budgets, config, weights=w, start=p,
                                    initial_gap=min(1.0, 10.0 * improvement),
                                    gap_tol=max(config.barrier_tol, 0.1 * improvement))
        obj = _weighted(scenario, res.power)
        if obj > history[-1]:
            if improvement > config.barrier_tol:
                # solved too loosely to see the remaining gain; retry tighter
                improvement = max(improvement * 1e-2, config.barrier_tol)
                continue
            # barrier inexactness; the previous iterate is already optimal to tolerance
            converged = True
            break
        p = res.power
        history.append(obj)
        improvement = max((history[-2] - obj) / history[-2], config.barrier_tol)
        if history[-2] - obj <= config.sca_tol * history[-2]:
            converged = True
            break
        lin = dc_linearize(scenario, a, p)
    runs = _SCA_RUNS.get()
    if runs is not None:
        runs.append(history)
    if not converged:
        raise ConvergenceError(f"SCA did not converge in {config.max_sca_iters} iterations",
                               diagnostics={"objective": history})
    return p


def inner_max_ee_at_rate(scenario: Scenario, rates, config: Optional[SolverConfig] = None,
                         warm: Optional[tuple] = None, alpha: float = 1.0) -> InnerResult:
    """Maximum EE with every cell's rate pinned at ``rates``.

    With the rates fixed, maximizing EE is minimizing power, so this alternates
    a max-SINR assignment with :func:`min_power_for_rates`.  ``warm`` is an
    optional ``(assignment, power)`` pair from a nearby solve.
    """
    config = config or SolverConfig()
    rates = np.asarray(rates, dtype=float).reshape(-1)
    if warm is None:
        a = assign_max_cnr(scenario)
        p = None
    else:
        a, p = np.asarray(warm[0]), np.asarray(warm[1], dtype=float)
        if p.any():
            a = assign_max_sinr(scenario, p)
    trace = []
    t = 0
    for t in range(1, config.max_alternations + 1):
        p = min_power_for_rates(scenario, a, rates, config=config, start=p)
        trace.append(_weighted(scenario, p))
        a_new = assign_max_sinr(scenario, p)
        if np.array_equal(a_new, a):
            break
        if len(trace) > 1 and trace[-2] - trace[-1] <= config.sca_tol * trace[-2]:
            break
        a = a_new
    metrics = evaluate(scenario, a, p, "underlay", alpha=alpha)
    return InnerResult(a, p, metrics, t, trace)


def rate_cap(scenario: Scenario, power, cell: int) -> float:
    """Rate ``cell`` reaches by water-filling its whole budget against the
    interference of the other cells at ``power``."""
    p = np.asarray(power, dtype=float)
    ch = scenario.channel
    k = ch.ue_counts[cell]
    h = ch.gain[cell, :k]                                  # (K, M, N)
    interf = np.einsum("kmn,mn->kn", h, p) - h[:, cell] * p[cell]
    cnr = (h[:, cell] / (interf + ch.noise[cell, :k])).max(axis=0)
    curve = WaterfillCurve(cnr, np.zeros_like(cnr), scenario.bandwidth)
    return float(curve.rate(scenario.qos.pmax_w[cell]))


def maximize_ee_underlay(scenario: Scenario, config: Optional[SolverConfig] = None) -> UnderlayResult:
    """Rotate the free-rate cell over all cells, line-searching its rate each time."""
    config = config or SolverConfig()
    targets = scenario.qos.targets()
    M = scenario.num_cells
    try:
        best = inner_max_ee_at_rate(scenario, targets, config)
    except InfeasibleError as exc:
        raise InfeasibleError(f"QoS infeasible at the minimum rates: {exc}", cell=exc.cell, stage="init") from exc

    state = RotationState(targets.copy(), 0, best.metrics.ee)
    trace = [state.ee]
    sweep_start = state.ee
    converged = False
    for it in range(1, config.max_rotations + 1):
        l = (it - 1) % M
        state.cell, state.iteration = l, it
        lo, hi = targets[l], max(rate_cap(scenario, best.power, l), targets[l])
        if hi > lo:
            solved: dict = {}
            base = best

            def objective(x, l=l, base=base, solved=solved):
                c = state.rates.copy()
                c[l] = x
                near = base
                if solved:
                    near = solved[min(solved, key=lambda y: abs(np.log(y / x)) if y > 0 and x > 0 else abs(y - x))]
                try:
                    r = inner_max_ee_at_rate(scenario, c, config, warm=(near.assignment, near.power))
                except (InfeasibleError, ConvergenceError):
                    return 0.0
                solved[x] = r
                return r.metrics.ee

            res = quasiconcave_line_search(objective, lo, hi, config.outer_step, config.outer_tol,
                                           x0=state.rates[l], max_iter=config.max_search_iters,
                                           fd_rel=config.fd_rel_step)
            cand = solved.get(res.x)
            if cand is not None and cand.metrics.ee > state.ee:
                best = cand
                state.rates[l] = res.x
                state.ee = cand.metrics.ee
        trace.append(state.ee)
        if l == M - 1:
            if state.ee - sweep_start <= config.rotation_tol * state.ee:
                converged = True
                break
            sweep_start = state.ee
    return UnderlayResult(best.assignment, best.power, best.metrics, trace, state.rates.copy(), converged)
