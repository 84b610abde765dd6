"""Interior-point solver for the convex power-minimization subproblem built
on a DC tangent:

    min   sum_l w_l sum_n p[l,n]
    s.t.  f_l(p) - tangent_l(p) >= C_l      (cells with C_l > 0)
          sum_n p[l,n] <= P_max[l]
          p > 0

A log-barrier path-following method solves it from a strictly feasible
start; a phase-I barrier with a common slack supplies one when needed.
Every Newton system is block diagonal (one (L+1)x(L+1) block per
subcarrier, coupling the cells that share it) plus a low-rank part (one term
per rate constraint and per budget), inverted with the Woodbury identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InfeasibleError, InvalidArgumentError
from ..model import Scenario
from .config import SolverConfig
from .dc import DcLinearization

_ARMIJO = 0.01
_BACKTRACK = 0.5
_NEWTON_TOL = 1e-10
_REFINE = 2
_RATE_KEEP = 0.1


@dataclass
class BarrierResult:
    power: np.ndarray
    rate_duals: np.ndarray    # per cell, zero for unconstrained cells (units: W per relative rate)
    budget_duals: np.ndarray
    gap: float                # duality gap of the last centering (W)
    newton_steps: int


class _TangentProgram:
    def __init__(self, lin: DcLinearization, targets, budgets, weights):
        targets = np.asarray(targets, dtype=float)
        self.M, self.N = lin.reference.shape
        self.active = np.nonzero(targets > 0)[0]
        a = self.active
        self.A = lin.gains[a]                     # (La, N, M)
        self.At = np.transpose(self.A, (0, 2, 1))  # (La, M, N)
        self.s = lin.noise[a]                     # (La, N)
        self.cmask = lin.scale * lin.mask[a]      # (La, N)
        self.G = lin.grad[a]                      # (La, M, N)
        self.const = lin.g_ref[a] - np.einsum("lmn,mn->l", self.G, lin.reference)
        self.C = targets[a]
        self.B = np.asarray(budgets, dtype=float)
        self.w = np.asarray(weights, dtype=float)
        self.n_cons = a.size + self.M + self.M * self.N
        self._eye = np.eye(self.M)
        self._diag = np.arange(self.M)
        self.steps = 0

    def den(self, p):
        return (self.A * p.T).sum(axis=2) + self.s

    def excess(self, p, den=None):
        """Relative surplus of the tangent rate over the target, per active cell."""
        if den is None:
            den = self.den(p)
        lin_rate = (self.cmask * np.log(den)).sum(axis=1) - self.const - self.G.reshape(self.G.shape[0], -1) @ p.ravel()
        return lin_rate / self.C - 1.0

    def excess_grad(self, den):
        """Gradient of the relative excess, (La, M, N)."""
        return (self.At * (self.cmask / den)[:, None, :] - self.G) / self.C[:, None, None]

    def objective(self, p):
        return float(self.w @ p.sum(axis=1))

    def solve(self, den, hess_w, rank_vecs, budget_w, bound_w, rhs):
        """Solve ``H x = rhs`` for

            H = sum_l hess_w[l] (-hessian of excess_l) + sum_j v_j v_j^T
                + sum_m budget_w[m] 1_m 1_m^T + diag(bound_w)

        with ``rank_vecs`` of shape (R, M, N) and ``rhs`` of shape (M, N, r).
        """
        N = self.N
        coef = hess_w[:, None] * self.cmask / (self.C[:, None] * den ** 2)
        B = np.transpose(self.A * np.sqrt(coef)[:, :, None], (1, 2, 0))   # (N, M, La)
        D = B @ np.transpose(B, (0, 2, 1))
        D[:, self._diag, self._diag] += bound_w.T
        V = np.concatenate([np.transpose(rank_vecs, (2, 1, 0)),
                            np.broadcast_to(self._eye * np.sqrt(budget_w)[None, :], (N, self.M, self.M))], axis=2)
        Dinv = np.linalg.inv(D)
        ZV = Dinv @ V
        R = V.shape[2]
        Vf = V.reshape(-1, R).T
        small_inv = np.linalg.inv(np.eye(R) + Vf @ ZV.reshape(-1, R))

        def vt(x):
            return Vf @ x.reshape(-1, x.shape[2])

        def apply(r):
            z = Dinv @ r
            return z - ZV @ (small_inv @ vt(z))

        def hmul(x):
            return D @ x + V @ vt(x)

        b = np.transpose(rhs, (1, 0, 2))
        X = apply(b)
        # the rank terms grow like 1/excess near the rate bounds, where the
        # Woodbury correction cancels badly; refinement restores accuracy
        for _ in range(_REFINE):
            X = X + apply(b - hmul(X))
        return np.transpose(X, (1, 0, 2))

    # log barrier; ``slack`` is None in phase II and a common rate slack in phase I

    def phi(self, p, t, slack=None):
        if np.any(p <= 0):
            return np.inf
        S = self.B - p.sum(axis=1)
        if np.any(S <= 0):
            return np.inf
        fe = self.excess(p)
        if slack is not None:
            fe = fe + slack
        if np.any(fe <= 0):
            return np.inf
        obj = t * slack if slack is not None else t * self.objective(p)
        return obj - np.log(fe).sum() - np.log(S).sum() - np.log(p).sum()

    def newton(self, p, t, slack=None):
        """Newton direction ``(dp, dslack, decrement^2)`` of the barrier at ``p``."""
        den = self.den(p)
        fe = self.excess(p, den)
        if slack is not None:
            fe = fe + slack
        S = self.B - p.sum(axis=1)
        q = self.excess_grad(den) / fe[:, None, None]
        grad = -q.sum(axis=0) + (1.0 / S)[:, None] - 1.0 / p
        if slack is None:
            grad = grad + t * self.w[:, None]
            dp = self.solve(den, 1.0 / fe, q, 1.0 / S ** 2, 1.0 / p ** 2, -grad[:, :, None])[..., 0]
            return dp, 0.0, -float((grad * dp).sum())
        b = (q / fe[:, None, None]).sum(axis=0)
        X = self.solve(den, 1.0 / fe, q, 1.0 / S ** 2, 1.0 / p ** 2, np.stack([-grad, b], axis=2))
        x1, x2 = X[..., 0], X[..., 1]
        gs = t - (1.0 / fe).sum()
        d = (1.0 / fe ** 2).sum()
        ds = (-gs - (b * x1).sum()) / (d - (b * x2).sum())
        dp = x1 - x2 * ds
        return dp, ds, -float((grad * dp).sum() + gs * ds)

    def center(self, p, t, slack, max_steps, stop_when_feasible=False):
        for _ in range(max_steps):
            if stop_when_feasible and np.all(self.excess(p) > 0):
                break
            dp, ds, dec = self.newton(p, t, slack)
            self.steps += 1
            phi0 = self.phi(p, t, slack)
            # below this the decrease is lost in the rounding of phi itself
            if not np.isfinite(dec) or dec / 2.0 <= max(_NEWTON_TOL, 1e-13 * abs(phi0)):
                break
            neg = dp < 0
            step = min(1.0, 0.99 * float(np.min(-p[neg] / dp[neg]))) if np.any(neg) else 1.0
            fe0 = self.excess(p) + (0.0 if slack is None else slack)
            while step > 1e-14:
                p_new = p + step * dp
                s_new = None if slack is None else slack + step * ds
                # a step that lands next to a rate bound takes many Newton steps to undo
                if (self.phi(p_new, t, s_new) <= phi0 - _ARMIJO * step * dec
                        and np.all(self.excess(p_new) + (0.0 if s_new is None else s_new) >= _RATE_KEEP * fe0)):
                    break
                step *= _BACKTRACK
            else:
                break
            p, slack = p_new, s_new
        return p, slack


def _interior_start(start, budgets):
    p = np.array(start, dtype=float)
    m, n = p.shape
    floor = 1e-9 * budgets[:, None] / n
    p = np.maximum(p, floor)
    tot = p.sum(axis=1)
    over = tot >= budgets * (1 - 1e-9)
    p[over] *= ((1 - 1e-6) * budgets[over] / tot[over])[:, None]
    return p


def _find_interior(prog: _TangentProgram, p, config: SolverConfig):
    """Phase I: minimize a common slack on the rate constraints until the
    point becomes strictly feasible.  Returns ``(p, feasible)``."""
    fe = prog.excess(p)
    slack = max(0.0, -float(fe.min())) + 1.0
    t = 1.0
    for _ in range(60):
        p, slack = prog.center(p, t, slack, config.max_newton_iters, stop_when_feasible=True)
        if np.all(prog.excess(p) > 0):
            return p, True
        if prog.n_cons / t < 1e-9:
            break
        t /= config.barrier_decrease
    return p, False


def tangent_feasible_point(lin: DcLinearization, rate_targets, pmax, config: Optional[SolverConfig] = None,
                           start=None):
    """Phase I on the tangent program alone.

    Returns ``(p, margin)`` with ``margin`` the smallest relative surplus of
    the tangent rates over the targets at ``p``; ``margin > 0`` means ``p`` is
    strictly feasible (hence feasible for the true rates as well).
    """
    config = config or SolverConfig()
    targets = np.asarray(rate_targets, dtype=float).reshape(-1)
    budgets = np.asarray(pmax, dtype=float).reshape(-1)
    M = lin.reference.shape[0]
    prog = _TangentProgram(lin, targets, budgets, np.ones(M))
    p = _interior_start(lin.reference if start is None else start, budgets)
    if prog.active.size == 0:
        return p, np.inf
    if not np.all(prog.excess(p) > 0):
        p, _ = _find_interior(prog, p, config)
    return p, float(prog.excess(p).min())


def solve_tangent_program(lin: DcLinearization, rate_targets, pmax, config: Optional[SolverConfig] = None,
                          weights=None, start=None, initial_gap: Optional[float] = None,
                          gap_tol: Optional[float] = None) -> BarrierResult:
    """Barrier solve of the tangent program.

    The central path is followed from relative duality gap ``initial_gap``
    (default ``1/barrier_t0``) down to ``gap_tol`` (default
    ``config.barrier_tol``).  Centering from a warm start costs roughly
    ``n_constraints * improvement / initial_gap`` in barrier value, so the
    starting gap should match the improvement expected from the start.
    """
    config = config or SolverConfig()
    ref = lin.reference
    M, N = ref.shape
    targets = np.asarray(rate_targets, dtype=float).reshape(-1)
    budgets = np.asarray(pmax, dtype=float).reshape(-1)
    if targets.shape != (M,) or budgets.shape != (M,):
        raise InvalidArgumentError("rate targets and budgets need one entry per cell")
    if np.any(targets < 0):
        raise InvalidArgumentError("rate targets must be non-negative")
    w = np.ones(M) if weights is None else np.asarray(weights, dtype=float)
    if not np.any(targets > 0):
        return BarrierResult(np.zeros((M, N)), np.zeros(M), np.zeros(M), 0.0, 0)

    prog = _TangentProgram(lin, targets, budgets, w)
    p = _interior_start(ref if start is None else start, budgets)
    if not np.all(prog.excess(p) > 0):
        p, ok = _find_interior(prog, p, config)
        if not ok:
            worst = int(prog.active[np.argmin(prog.excess(p))])
            raise InfeasibleError(f"rate target of cell {worst} unreachable within the power budgets", cell=worst)

    rel = 1.0 / config.barrier_t0 if initial_gap is None else initial_gap
    target = config.barrier_tol if gap_tol is None else gap_tol
    rel = max(rel, target)
    obj = max(prog.objective(p), 1e-300)
    t = prog.n_cons / (rel * obj)
    while True:
        p, _ = prog.center(p, t, None, config.max_newton_iters)
        gap = prog.n_cons / t
        if gap <= target * max(prog.objective(p), 1e-300) or t > 1e300:
            break
        t /= config.barrier_decrease

    rate_duals = np.zeros(M)
    rate_duals[prog.active] = 1.0 / (t * prog.excess(p))
    budget_duals = 1.0 / (t * (budgets - p.sum(axis=1)))
    return BarrierResult(p, rate_duals, budget_duals, gap, prog.steps)


def sca_subproblem(scenario: Scenario, assignment, linearization: DcLinearization, rate_targets, pmax=None,
                   config: Optional[SolverConfig] = None, weights=None, start=None) -> np.ndarray:
    """One SCA step: minimum-power allocation under the tangent rate constraints.

    ``assignment`` must be the one the linearization was built for; the
    default budgets are the scenario's per-cell ``P_max``.
    """
    if linearization.reference.shape != (scenario.num_cells, scenario.num_subcarriers):
        raise InvalidArgumentError("linearization does not match the scenario")
    served = np.asarray(assignment) >= 0
    if not np.array_equal(served, linearization.mask):
        raise InvalidArgumentError("linearization was built for a different assignment")
    pmax = scenario.qos.pmax_w if pmax is None else pmax
    return solve_tangent_program(linearization, rate_targets, pmax, config, weights, start).power
