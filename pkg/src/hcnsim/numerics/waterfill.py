"""Rate-targeted and budget-mode water-filling over interference-free links.

Links are described by their CNR ``g`` (1/W); the rate of a link carrying
``p`` watts is ``W_C log2(1 + g p)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InfeasibleError, InvalidArgumentError

LOG2E = 1.0 / np.log(2.0)
_MAX_LOG2_LEVEL = 1000.0


@dataclass(frozen=True)
class WaterfillResult:
    power: np.ndarray
    level: float
    consumed: float
    rate: float
    ue_levels: Optional[dict] = None


def _as_cnr(cnr) -> np.ndarray:
    g = np.asarray(cnr, dtype=float).ravel()
    if g.size == 0:
        raise InvalidArgumentError("empty link set")
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise InvalidArgumentError("CNRs must be finite and non-negative")
    return g


def sum_rate(cnr, power, bandwidth_hz: float) -> float:
    g = np.asarray(cnr, dtype=float)
    return float(bandwidth_hz * np.sum(np.log2(1.0 + g * np.asarray(power, dtype=float))))


def single_ue_waterfill(cnr, rate_target: float, bandwidth_hz: float, owners=None) -> WaterfillResult:
    """Minimum-power allocation reaching ``rate_target`` bits/s over the links.

    Every active link sits at the common level ``mu`` (marginal power cost
    equalized across links and UEs); ``owners`` optionally maps links to
    UEs so the per-UE levels can be reported.
    """
    g = _as_cnr(cnr)
    if rate_target < 0:
        raise InvalidArgumentError("rate target must be non-negative")
    if not np.any(g > 0):
        raise InvalidArgumentError("at least one link must have positive CNR")
    order = np.argsort(-g, kind="stable")
    gs = g[order]
    gs = gs[gs > 0]
    lg = np.log2(gs)
    power = np.zeros_like(g)

    if rate_target == 0:
        level = 1.0 / gs[0]
    else:
        bits = rate_target / bandwidth_hz
        j = np.arange(1, gs.size + 1)
        log2_mu = (bits - np.cumsum(lg)) / j
        ok = log2_mu + lg > 0  # level above the j-th strongest link's floor
        n_act = int(np.nonzero(ok)[0][-1]) + 1
        if log2_mu[n_act - 1] > _MAX_LOG2_LEVEL:
            raise InfeasibleError(f"rate target {rate_target:g} bits/s overflows the water level")
        level = float(2.0 ** log2_mu[n_act - 1])
        active = order[:n_act]
        power[active] = np.maximum(level - 1.0 / g[active], 0.0)

    ue_levels = None
    if owners is not None:
        owners = np.asarray(owners).ravel()
        ue_levels = {int(k): level for k in np.unique(owners)}
    return WaterfillResult(power, level, float(power.sum()), sum_rate(g, power, bandwidth_hz), ue_levels)


class WaterfillCurve:
    """Budget-mode water-filling on top of a base allocation, as a function of
    the extra budget.  Precomputes the sorted floors so repeated queries (a
    gradient search over the total power) cost O(log n) each.
    """

    def __init__(self, cnr, base, bandwidth_hz: float):
        g = _as_cnr(cnr)
        base = np.asarray(base, dtype=float).ravel()
        if base.shape != g.shape:
            raise InvalidArgumentError("base power must match the link set")
        if np.any(base < 0):
            raise InvalidArgumentError("base power must be non-negative")
        self.cnr = g
        self.base = base
        self.bandwidth = float(bandwidth_hz)
        pos = g > 0
        floors = np.full(g.shape, np.inf)
        floors[pos] = 1.0 / g[pos] + base[pos]
        self.order = np.argsort(floors, kind="stable")
        self.n_pos = int(pos.sum())
        f = floors[self.order][: self.n_pos]
        self.floors = f
        self.prefix = np.cumsum(f)
        j = np.arange(1, f.size + 1)
        self.thresholds = j * f - self.prefix  # extra budget needed before link j+1 turns on
        gs = g[self.order][: self.n_pos]
        self.prefix_log_g = np.concatenate([[0.0], np.cumsum(np.log2(gs))])
        base_rates = np.log2(1.0 + gs * base[self.order][: self.n_pos])
        self.suffix_base = np.concatenate([np.cumsum(base_rates[::-1])[::-1], [0.0]])
        self.base_total = float(base.sum())

    def _active(self, extra: float) -> int:
        return int(np.searchsorted(self.thresholds, extra, side="left"))

    def level(self, extra: float) -> float:
        if extra < 0:
            raise InvalidArgumentError("extra budget must be non-negative")
        j = self._active(extra)
        if j == 0:
            return float(self.floors[0])
        return float((extra + self.prefix[j - 1]) / j)

    def power(self, extra: float) -> np.ndarray:
        mu = self.level(extra)
        p = self.base.copy()
        pos = self.cnr > 0
        p[pos] += np.maximum(mu - 1.0 / self.cnr[pos] - self.base[pos], 0.0)
        return p

    def rate(self, extra: float) -> float:
        j = self._active(extra)
        if j == 0:
            return self.bandwidth * float(self.suffix_base[0])
        mu = (extra + self.prefix[j - 1]) / j
        bits = self.prefix_log_g[j] + j * np.log2(mu) + self.suffix_base[j]
        return self.bandwidth * float(bits)

    def derivative(self, extra: float) -> float:
        """d(sum rate)/d(total power): ``W_C log2(e) / mu``."""
        return self.bandwidth * LOG2E / self.level(extra)


def multilevel_waterfill(cnr, base, extra_budget: float, bandwidth_hz: float) -> WaterfillResult:
    """Spend ``extra_budget`` watts on top of ``base`` to maximize the sum rate."""
    if extra_budget < 0:
        raise InvalidArgumentError("extra budget must be non-negative")
    curve = WaterfillCurve(cnr, base, bandwidth_hz)
    p = curve.power(extra_budget)
    return WaterfillResult(p, curve.level(extra_budget), float(p.sum()), sum_rate(curve.cnr, p, bandwidth_hz))


def max_rate_derivative(cnr, power, bandwidth_hz: float) -> float:
    """Largest marginal rate ``W_C g log2(e) / (1 + g p)`` over the links (bits/s per W)."""
    g = np.asarray(cnr, dtype=float).ravel()
    p = np.asarray(power, dtype=float).ravel()
    if g.size == 0:
        raise InvalidArgumentError("empty link set")
    if p.shape != g.shape:
        raise InvalidArgumentError("power must match the link set")
    return float(bandwidth_hz * LOG2E * np.max(g / (1.0 + g * p)))
