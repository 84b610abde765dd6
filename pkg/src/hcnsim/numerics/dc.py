"""Difference-of-concave split of the per-cell sum rate and its tangent bound.

For cell ``l`` with ``k(n)`` the UE served on subcarrier ``n``::

    f_l(p) = c * sum_n ln(sum_m   h[l,k(n),m,n] p[m,n] + sigma)
    g_l(p) = c * sum_n ln(sum_m!=l h[l,k(n),m,n] p[m,n] + sigma)

with ``c = W_C / ln 2`` so that ``f_l - g_l`` is the cell rate in bits/s.
Replacing the concave ``g_l`` by its tangent at a reference point gives a
concave lower bound of the rate that is exact at the reference.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..model import UNASSIGNED, Scenario, check_assignment


@dataclass(frozen=True, eq=False)
class DcLinearization:
    reference: np.ndarray  # (M, N)
    gains: np.ndarray      # (M, N, M): gains[l, n, m] = h[l, k(n,l), m, n]
    noise: np.ndarray      # (M, N)
    mask: np.ndarray       # (M, N) True where the subcarrier is assigned
    scale: float
    g_ref: np.ndarray      # g_l at the reference, (M,)
    grad: np.ndarray       # tangent slopes of g_l, (M, M, N) indexed [l, m, n]

    @property
    def num_cells(self) -> int:
        return self.gains.shape[0]

    def _den(self, p, own: bool) -> np.ndarray:
        tot = np.einsum("lnm,mn->ln", self.gains, p)
        if not own:
            m = self.num_cells
            tot = tot - self.gains[np.arange(m), :, np.arange(m)] * p
        return tot + self.noise

    def f(self, p) -> np.ndarray:
        return self.scale * np.where(self.mask, np.log(self._den(p, True)), 0.0).sum(axis=1)

    def g(self, p) -> np.ndarray:
        return self.scale * np.where(self.mask, np.log(self._den(p, False)), 0.0).sum(axis=1)

    def exact_rates(self, p) -> np.ndarray:
        return self.f(p) - self.g(p)

    def tangent(self, p) -> np.ndarray:
        """Tangent-plane value of ``g_l`` at ``p``."""
        d = np.asarray(p, dtype=float) - self.reference
        return self.g_ref + np.einsum("lmn,mn->l", self.grad, d)

    def linearized_rates(self, p) -> np.ndarray:
        return self.f(p) - self.tangent(p)

    def gradient_vector(self, l: int) -> np.ndarray:
        """Slopes of ``g_l`` as one vector, entry ``N*j + n`` for cell j, subcarrier n."""
        return self.grad[l].ravel()


def assigned_gains(scenario: Scenario, assignment) -> tuple:
    """Gather gains and noise of the served UEs: ``(M, N, M)``, ``(M, N)``, mask."""
    a = check_assignment(scenario, assignment)
    m, n = a.shape
    k = np.maximum(a, 0)
    li = np.arange(m)[:, None]
    ni = np.arange(n)[None, :]
    gains = scenario.channel.gain[li, k, :, ni]  # (M, N, M)
    noise = scenario.channel.noise[li, k, ni]
    mask = a != UNASSIGNED
    gains = np.where(mask[:, :, None], gains, 0.0)
    noise = np.where(mask, noise, 1.0)
    return gains, noise, mask


def dc_linearize(scenario: Scenario, assignment, reference) -> DcLinearization:
    ref = np.asarray(reference, dtype=float)
    if ref.shape != (scenario.num_cells, scenario.num_subcarriers):
        raise InvalidArgumentError(f"reference power has shape {ref.shape}")
    if np.any(ref < 0):
        raise InvalidArgumentError("reference power must be non-negative")
    gains, noise, mask = assigned_gains(scenario, assignment)
    m = scenario.num_cells
    scale = scenario.bandwidth / np.log(2.0)
    lin = DcLinearization(ref.copy(), gains, noise, mask, scale, np.zeros(m), np.zeros((m, m, ref.shape[1])))
    interf = lin._den(ref, own=False)  # (M, N)
    grad = scale * np.where(mask[:, :, None], gains / interf[:, :, None], 0.0)  # (l, n, j)
    grad = np.transpose(grad, (0, 2, 1)).copy()
    grad[np.arange(m), np.arange(m), :] = 0.0
    g_ref = scale * np.where(mask, np.log(interf), 0.0).sum(axis=1)
    return DcLinearization(ref.copy(), gains, noise, mask, scale, g_ref, grad)
