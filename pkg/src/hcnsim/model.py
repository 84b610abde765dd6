"""Problem instance and evaluation formulas for a two-tier OFDMA network.

Cell 0 is the macro-cell; cells 1..L are small cells.  Arrays follow one
index convention throughout the package:

* ``gain[l, k, m, n]``: linear power gain from the BS of cell ``m`` to UE
  ``k`` of cell ``l`` on subcarrier ``n``.  The UE axis is padded to the
  largest cell; padded slots carry zero gain and unit noise.
* ``noise[l, k, n]``: noise power in watts.
* an assignment is an int array ``(L+1, N)`` holding the served UE of every
  (cell, subcarrier) pair, ``-1`` meaning unassigned (overlay only).
* a power allocation is a float array ``(L+1, N)`` in watts.
"""
from __future__ import annotations

import dataclasses
import zlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError

UNASSIGNED = -1
MODES = ("underlay", "overlay")
SCENARIO_HEADER = "hcnsim-scenario v1"
MIN_DISTANCE_M = 1.0


def dbm_to_watts(x_dbm):
    w = 10.0 ** ((np.asarray(x_dbm, dtype=float) - 30.0) / 10.0)
    return float(w) if w.ndim == 0 else w


def macro_path_loss_db(d_m):
    """128.1 + 37.6 log10(d[km])."""
    d_km = np.maximum(np.asarray(d_m, dtype=float), MIN_DISTANCE_M) / 1000.0
    return 128.1 + 37.6 * np.log10(d_km)


def small_path_loss_db(d_m):
    """140.7 + 36.7 log10(d[km])."""
    d_km = np.maximum(np.asarray(d_m, dtype=float), MIN_DISTANCE_M) / 1000.0
    return 140.7 + 36.7 * np.log10(d_km)


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class SpectrumSpec:
    subcarrier_bandwidth_hz: float
    total_subcarriers: int

    def __post_init__(self):
        if not self.subcarrier_bandwidth_hz > 0:
            raise InvalidArgumentError("subcarrier bandwidth must be positive")
        if int(self.total_subcarriers) < 1:
            raise InvalidArgumentError("need at least one subcarrier")

    @property
    def total_bandwidth_hz(self) -> float:
        return self.subcarrier_bandwidth_hz * self.total_subcarriers


@dataclass(frozen=True, eq=False)
class Topology:
    bs_positions: np.ndarray
    ue_positions: tuple
    macro_radius_m: float
    small_radius_m: float

    def __post_init__(self):
        object.__setattr__(self, "bs_positions", _frozen(self.bs_positions).reshape(-1, 2))
        ues = tuple(_frozen(u).reshape(-1, 2) for u in self.ue_positions)
        object.__setattr__(self, "ue_positions", ues)
        if len(ues) != len(self.bs_positions):
            raise InvalidArgumentError("one UE group per cell required")
        if self.macro_radius_m <= 0 or self.small_radius_m <= 0:
            raise InvalidArgumentError("radii must be positive")

    @property
    def num_cells(self) -> int:
        return len(self.bs_positions)

    @property
    def ue_counts(self) -> tuple:
        return tuple(len(u) for u in self.ue_positions)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    gain: np.ndarray
    noise: np.ndarray
    ue_counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "gain", _frozen(self.gain))
        object.__setattr__(self, "noise", _frozen(self.noise))
        object.__setattr__(self, "ue_counts", tuple(int(k) for k in self.ue_counts))
        g, s = self.gain, self.noise
        if g.ndim != 4 or g.shape[0] != g.shape[2]:
            raise InvalidArgumentError(f"gain must be (L+1, K, L+1, N), got {g.shape}")
        if s.shape != (g.shape[0], g.shape[1], g.shape[3]):
            raise InvalidArgumentError(f"noise shape {s.shape} does not match gain {g.shape}")
        if len(self.ue_counts) != g.shape[0] or max(self.ue_counts) > g.shape[1]:
            raise InvalidArgumentError("ue_counts inconsistent with gain tensor")
        if np.any(g < 0) or not np.all(np.isfinite(g)):
            raise InvalidArgumentError("gains must be finite and non-negative")
        if np.any(s <= 0):
            raise InvalidArgumentError("noise powers must be positive")

    @property
    def ue_mask(self) -> np.ndarray:
        """Boolean ``(L+1, K_max)`` mask of real (non-padded) UEs."""
        k = np.arange(self.gain.shape[1])
        return k[None, :] < np.array(self.ue_counts)[:, None]


@dataclass(frozen=True, eq=False)
class PowerModel:
    zeta: np.ndarray
    static_power_w: np.ndarray
    gamma_w_per_hz: np.ndarray

    def __post_init__(self):
        for name in ("zeta", "static_power_w", "gamma_w_per_hz"):
            object.__setattr__(self, name, _frozen(getattr(self, name)).reshape(-1))
        if np.any(self.zeta < 1):
            raise InvalidArgumentError("zeta (reciprocal drain efficiency) must be >= 1")
        if np.any(self.static_power_w < 0) or np.any(self.gamma_w_per_hz < 0):
            raise InvalidArgumentError("circuit power parameters must be non-negative")


@dataclass(frozen=True, eq=False)
class QosSpec:
    delta_macro_bps: float
    delta_small_bps: float
    pmax_w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pmax_w", _frozen(self.pmax_w).reshape(-1))
        if self.delta_macro_bps < 0 or self.delta_small_bps < 0:
            raise InvalidArgumentError("rate targets must be non-negative")
        if np.any(self.pmax_w <= 0):
            raise InvalidArgumentError("power budgets must be positive")

    def targets(self) -> np.ndarray:
        t = np.full(len(self.pmax_w), float(self.delta_small_bps))
        t[0] = self.delta_macro_bps
        return t


@dataclass(frozen=True, eq=False)
class Scenario:
    spectrum: SpectrumSpec
    topology: Topology
    channel: ChannelRealization
    power: PowerModel
    qos: QosSpec
    p_tot_w: float

    def __post_init__(self):
        m = self.topology.num_cells
        g = self.channel.gain
        if g.shape[0] != m or g.shape[3] != self.spectrum.total_subcarriers:
            raise InvalidArgumentError("channel dimensions do not match topology/spectrum")
        if tuple(self.channel.ue_counts) != self.topology.ue_counts:
            raise InvalidArgumentError("channel UE counts do not match topology")
        for arr in (self.power.zeta, self.power.static_power_w, self.power.gamma_w_per_hz, self.qos.pmax_w):
            if len(arr) != m:
                raise InvalidArgumentError("per-cell parameter length must equal number of cells")
        if not self.p_tot_w > 0:
            raise InvalidArgumentError("P_tot must be positive")

    @property
    def num_cells(self) -> int:
        return self.topology.num_cells

    @property
    def num_subcarriers(self) -> int:
        return self.spectrum.total_subcarriers

    @property
    def ue_counts(self) -> tuple:
        return self.channel.ue_counts

    @property
    def bandwidth(self) -> float:
        return self.spectrum.subcarrier_bandwidth_hz

    def own_cnr(self, cell: int) -> np.ndarray:
        """CNR ``h[l,k,l,n] / sigma[l,k,n]`` of the real UEs of ``cell``, shape (K_l, N)."""
        k = self.ue_counts[cell]
        return self.channel.gain[cell, :k, cell, :] / self.channel.noise[cell, :k, :]

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def with_targets(self, delta_macro_bps=None, delta_small_bps=None) -> "Scenario":
        q = self.qos
        qos = QosSpec(
            q.delta_macro_bps if delta_macro_bps is None else delta_macro_bps,
            q.delta_small_bps if delta_small_bps is None else delta_small_bps,
            q.pmax_w,
        )
        return dataclasses.replace(self, qos=qos)


@dataclass(frozen=True)
class Metrics:
    cell_rates: np.ndarray
    total_rate: float
    cell_tx_power: np.ndarray
    cell_used_bandwidth: np.ndarray
    total_power: float
    ee: float
    se: float
    re: float
    power_utilization: float
    bandwidth_utilization: float
    tau: float
    alpha: float
    p_tot: float


# ---------------------------------------------------------------------------
# Scenario generation


@dataclass
class ScenarioParams:
    num_small_cells: int = 3
    macro_ues: int = 10
    small_ues: int = 3
    num_subcarriers: int = 64
    subcarrier_bandwidth_hz: float = 15e3
    macro_radius_m: float = 250.0
    small_radius_m: float = 50.0
    noise_dbm_hz: float = -174.0
    macro_pmax_dbm: float = 46.0
    small_pmax_dbm: float = 30.0
    zeta: float = 4.0
    ps_macro_w: float = 10.0
    ps_small_w: float = 1.0
    gamma_w_per_hz: float = 1e-6
    delta_macro_bps: float = 192e3
    delta_small_bps: float = 192e3
    p_tot_w: Optional[float] = None
    # When set, noise is rescaled so the mean own-link SNR at uniform full-budget
    # power hits this value; None keeps the thermal noise density above.
    cnr_db: Optional[float] = 10.0


def rng_stream(seed: int, tag: str) -> np.random.Generator:
    """Independent generator for ``(seed, tag)``; new tags never shift old draws."""
    if seed < 0:
        raise InvalidArgumentError("seeds must be non-negative 64-bit integers")
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(tag.encode())]))


def _uniform_disc(rng, n, radius, center):
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.asarray(center) + np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def default_p_tot(power: PowerModel, qos: QosSpec, total_bandwidth_hz: float) -> float:
    """Largest possible consumption: every BS at full budget on the whole band."""
    return float(np.sum(power.zeta * qos.pmax_w + power.static_power_w + power.gamma_w_per_hz * total_bandwidth_hz))


def generate_scenario(seed: int, params: ScenarioParams) -> Scenario:
    p = params
    if p.macro_radius_m <= 0 or p.small_radius_m <= 0:
        raise InvalidArgumentError("radii must be positive")
    if p.num_small_cells < 0 or p.macro_ues < 1 or p.num_subcarriers < 1:
        raise InvalidArgumentError("cell, UE and subcarrier counts must be positive")
    if p.num_small_cells > 0 and p.small_ues < 1:
        raise InvalidArgumentError("small cells need at least one UE")

    m = p.num_small_cells + 1
    n_sc = int(p.num_subcarriers)
    counts = [int(p.macro_ues)] + [int(p.small_ues)] * p.num_small_cells
    k_max = max(counts)

    bs = np.zeros((m, 2))
    if m > 1:
        bs[1:] = _uniform_disc(rng_stream(seed, "bs"), m - 1, p.macro_radius_m, (0.0, 0.0))
    ues = []
    for l in range(m):
        radius = p.macro_radius_m if l == 0 else p.small_radius_m
        ues.append(_uniform_disc(rng_stream(seed, f"ue/{l}"), counts[l], radius, bs[l]))
    topo = Topology(bs, tuple(ues), p.macro_radius_m, p.small_radius_m)

    gain = np.zeros((m, k_max, m, n_sc))
    for l in range(m):
        d = np.linalg.norm(ues[l][:, None, :] - bs[None, :, :], axis=-1)  # (K_l, M)
        pl = np.empty_like(d)
        pl[:, 0] = macro_path_loss_db(d[:, 0])
        pl[:, 1:] = small_path_loss_db(d[:, 1:])
        fade = rng_stream(seed, f"fading/{l}").standard_exponential((counts[l], m, n_sc))
        gain[l, : counts[l]] = 10.0 ** (-pl / 10.0)[:, :, None] * fade

    pmax = np.full(m, dbm_to_watts(p.small_pmax_dbm))
    pmax[0] = dbm_to_watts(p.macro_pmax_dbm)
    noise = np.ones((m, k_max, n_sc))
    sigma = dbm_to_watts(p.noise_dbm_hz) * p.subcarrier_bandwidth_hz
    mask = np.arange(k_max)[None, :] < np.array(counts)[:, None]
    if p.cnr_db is not None:
        # mean own-link SNR at uniform full-budget power, averaged per cell then across cells
        snr = [gain[l, : counts[l], l, :].mean() * pmax[l] / n_sc for l in range(m)]
        sigma = float(np.mean(snr)) / 10.0 ** (p.cnr_db / 10.0)
    noise[mask] = sigma

    zeta = np.full(m, float(p.zeta))
    ps = np.full(m, float(p.ps_small_w))
    ps[0] = p.ps_macro_w
    power = PowerModel(zeta, ps, np.full(m, float(p.gamma_w_per_hz)))
    qos = QosSpec(float(p.delta_macro_bps), float(p.delta_small_bps), pmax)
    spectrum = SpectrumSpec(float(p.subcarrier_bandwidth_hz), n_sc)
    p_tot = p.p_tot_w if p.p_tot_w is not None else default_p_tot(power, qos, spectrum.total_bandwidth_hz)
    return Scenario(spectrum, topo, ChannelRealization(gain, noise, counts), power, qos, float(p_tot))


# ---------------------------------------------------------------------------
# Evaluation


def _check_mode(mode):
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be one of {MODES}, got {mode!r}")


def _check_power(scenario: Scenario, power) -> np.ndarray:
    p = np.asarray(power, dtype=float)
    if p.shape != (scenario.num_cells, scenario.num_subcarriers):
        raise InvalidArgumentError(f"power must have shape {(scenario.num_cells, scenario.num_subcarriers)}, got {p.shape}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidArgumentError("powers must be finite and non-negative")
    return p


def check_assignment(scenario: Scenario, assignment, allow_unassigned: bool = True) -> np.ndarray:
    """Validate exclusivity and UE indices; returns the assignment as an int array."""
    a = np.asarray(assignment)
    if a.shape != (scenario.num_cells, scenario.num_subcarriers):
        raise InvalidArgumentError(f"assignment must have shape {(scenario.num_cells, scenario.num_subcarriers)}, got {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        raise InvalidArgumentError("assignment must hold integer UE indices")
    counts = np.array(scenario.ue_counts)[:, None]
    if np.any(a >= counts) or np.any(a < UNASSIGNED):
        raise InvalidArgumentError("assignment references a UE outside its cell")
    if not allow_unassigned and np.any(a == UNASSIGNED):
        raise InvalidArgumentError("every subcarrier must be assigned in underlay mode")
    return a.astype(int)


def sinr_matrix(scenario: Scenario, power, mode: str = "underlay") -> np.ndarray:
    """SINR of every (cell, UE, subcarrier) at ``power``; shape (L+1, K_max, N)."""
    _check_mode(mode)
    p = _check_power(scenario, power)
    g = scenario.channel.gain
    m = scenario.num_cells
    own = g[np.arange(m), :, np.arange(m), :] * p[:, None, :]  # (M, K, N)
    den = scenario.channel.noise.copy()
    if mode == "underlay":
        den += np.einsum("lkmn,mn->lkn", g, p) - own
    return own / den


def sinr(scenario: Scenario, power, k: int, l: int, n: int, mode: str = "underlay") -> float:
    _check_mode(mode)
    p = _check_power(scenario, power)
    if not (0 <= l < scenario.num_cells and 0 <= k < scenario.ue_counts[l] and 0 <= n < scenario.num_subcarriers):
        raise InvalidArgumentError(f"index (k={k}, l={l}, n={n}) out of range")
    h = scenario.channel.gain[l, k, :, n]
    signal = h[l] * p[l, n]
    den = scenario.channel.noise[l, k, n]
    if mode == "underlay":
        den += float(h @ p[:, n]) - signal
    return float(signal / den)


def link_rate(scenario_or_bandwidth, sinr_value):
    """``W_C log2(1 + sinr)`` in bits/s; accepts a Scenario or a bandwidth in Hz."""
    w = scenario_or_bandwidth.bandwidth if isinstance(scenario_or_bandwidth, Scenario) else float(scenario_or_bandwidth)
    s = np.asarray(sinr_value, dtype=float)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise InvalidArgumentError("SINR must be non-negative")
    r = w * np.log2(1.0 + s)
    return float(r) if r.ndim == 0 else r


def cell_rates(scenario: Scenario, assignment, power, mode: str = "underlay", interference: Optional[bool] = None) -> np.ndarray:
    """Per-cell throughput summing only assigned links."""
    a = check_assignment(scenario, assignment)
    if interference is None:
        interference = mode == "underlay"
    s = sinr_matrix(scenario, power, "underlay" if interference else "overlay")
    m, n = a.shape
    picked = s[np.arange(m)[:, None], np.maximum(a, 0), np.arange(n)[None, :]]
    r = scenario.bandwidth * np.log2(1.0 + picked)
    return np.where(a == UNASSIGNED, 0.0, r).sum(axis=1)


def used_bandwidth(scenario: Scenario, assignment, mode: str) -> np.ndarray:
    """Bandwidth charged to each cell's dynamic circuit power."""
    _check_mode(mode)
    a = np.asarray(assignment)
    if mode == "underlay":
        return np.full(scenario.num_cells, scenario.spectrum.total_bandwidth_hz)
    return scenario.bandwidth * np.count_nonzero(a != UNASSIGNED, axis=1).astype(float)


def evaluate(scenario: Scenario, assignment, power, mode: str = "underlay", alpha: float = 1.0,
             interference: Optional[bool] = None) -> Metrics:
    """Rates, consumed power and the EE/SE/RE figures of merit.

    ``interference`` overrides the SINR model only (bandwidth accounting
    still follows ``mode``); overlay results re-evaluated with
    ``interference=True`` expose the intra-tier interference that the
    overlay optimizer treats as absent.
    """
    _check_mode(mode)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgumentError("alpha must lie in [0, 1]")
    a = check_assignment(scenario, assignment, allow_unassigned=(mode == "overlay"))
    p = _check_power(scenario, power)
    rates = cell_rates(scenario, a, p, mode, interference)
    total_rate = float(rates.sum())
    tx = p.sum(axis=1)
    w_used = used_bandwidth(scenario, a, mode)
    pm = scenario.power
    total_power = float(np.sum(pm.zeta * tx + pm.static_power_w + pm.gamma_w_per_hz * w_used))

    w_tot = scenario.spectrum.total_bandwidth_hz
    if mode == "underlay":
        occupied = w_tot
    else:
        occupied = scenario.bandwidth * np.count_nonzero(np.any(a != UNASSIGNED, axis=0))
    if occupied <= 0:
        raise InvalidArgumentError("no subcarrier is assigned")
    eta_w = occupied / w_tot
    eta_p = total_power / scenario.p_tot_w
    ee = total_rate / total_power
    re = ee * (alpha + (1.0 - alpha) * eta_p / eta_w)
    return Metrics(
        cell_rates=rates,
        total_rate=total_rate,
        cell_tx_power=tx,
        cell_used_bandwidth=w_used,
        total_power=total_power,
        ee=ee,
        se=total_rate / occupied,
        re=re,
        power_utilization=eta_p,
        bandwidth_utilization=eta_w,
        tau=w_tot / scenario.p_tot_w,
        alpha=float(alpha),
        p_tot=scenario.p_tot_w,
    )


# ---------------------------------------------------------------------------
# Text serialization
#
# hcnsim-scenario v1
# key = value            scalars
# key = v1 v2 ...        per-cell vectors
# gain = v...            row-major (l, k, m, n) over real UEs only
# noise = v...           row-major (l, k, n) over real UEs only
# bs_positions_m = x0 y0 x1 y1 ...
# ue_positions_m = x y ... (cell-major, UE order)

_SCALAR_KEYS = ("subcarrier_bandwidth_hz", "num_subcarriers", "num_cells", "macro_radius_m",
                "small_radius_m", "delta_macro_bps", "delta_small_bps", "p_tot_w")
_VECTOR_KEYS = ("ue_counts", "zeta", "static_power_w", "gamma_w_per_hz", "pmax_w",
                "bs_positions_m", "ue_positions_m", "gain", "noise")


def _fmt(values) -> str:
    return " ".join(repr(float(v)) for v in np.ravel(values))


def scenario_to_text(s: Scenario) -> str:
    counts = s.ue_counts
    gains = np.concatenate([s.channel.gain[l, :k].ravel() for l, k in enumerate(counts)])
    noises = np.concatenate([s.channel.noise[l, :k].ravel() for l, k in enumerate(counts)])
    lines = [
        SCENARIO_HEADER,
        f"subcarrier_bandwidth_hz = {s.bandwidth!r}",
        f"num_subcarriers = {s.num_subcarriers}",
        f"num_cells = {s.num_cells}",
        f"macro_radius_m = {float(s.topology.macro_radius_m)!r}",
        f"small_radius_m = {float(s.topology.small_radius_m)!r}",
        f"delta_macro_bps = {float(s.qos.delta_macro_bps)!r}",
        f"delta_small_bps = {float(s.qos.delta_small_bps)!r}",
        f"p_tot_w = {float(s.p_tot_w)!r}",
        "ue_counts = " + " ".join(str(k) for k in counts),
        "zeta = " + _fmt(s.power.zeta),
        "static_power_w = " + _fmt(s.power.static_power_w),
        "gamma_w_per_hz = " + _fmt(s.power.gamma_w_per_hz),
        "pmax_w = " + _fmt(s.qos.pmax_w),
        "bs_positions_m = " + _fmt(s.topology.bs_positions),
        "ue_positions_m = " + _fmt(np.concatenate(s.topology.ue_positions)),
        "gain = " + _fmt(gains),
        "noise = " + _fmt(noises),
    ]
    return "\n".join(lines) + "\n"


def scenario_from_text(text: str) -> Scenario:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or lines[0] != SCENARIO_HEADER:
        raise InvalidArgumentError(f"missing header line {SCENARIO_HEADER!r}")
    kv = {}
    for i, ln in enumerate(lines[1:], start=2):
        key, sep, value = ln.partition("=")
        if not sep:
            raise InvalidArgumentError(f"line {i}: expected 'key = value'")
        kv[key.strip()] = value.strip()
    missing = [k for k in _SCALAR_KEYS + _VECTOR_KEYS if k not in kv]
    if missing:
        raise InvalidArgumentError(f"scenario text missing keys: {missing}")

    def vec(key, dtype=float):
        return np.array([dtype(v) for v in kv[key].split()])

    m = int(kv["num_cells"])
    n = int(kv["num_subcarriers"])
    counts = [int(v) for v in kv["ue_counts"].split()]
    if len(counts) != m:
        raise InvalidArgumentError("ue_counts length must equal num_cells")
    k_max = max(counts)
    flat_g, flat_s = vec("gain"), vec("noise")
    if flat_g.size != sum(counts) * m * n or flat_s.size != sum(counts) * n:
        raise InvalidArgumentError("gain/noise array length does not match dimensions")
    gain = np.zeros((m, k_max, m, n))
    noise = np.ones((m, k_max, n))
    og = os_ = 0
    for l, k in enumerate(counts):
        gain[l, :k] = flat_g[og: og + k * m * n].reshape(k, m, n)
        noise[l, :k] = flat_s[os_: os_ + k * n].reshape(k, n)
        og += k * m * n
        os_ += k * n
    ue_flat = vec("ue_positions_m").reshape(-1, 2)
    splits = np.cumsum(counts)[:-1]
    topo = Topology(vec("bs_positions_m").reshape(m, 2), tuple(np.split(ue_flat, splits)),
                    float(kv["macro_radius_m"]), float(kv["small_radius_m"]))
    power = PowerModel(vec("zeta"), vec("static_power_w"), vec("gamma_w_per_hz"))
    qos = QosSpec(float(kv["delta_macro_bps"]), float(kv["delta_small_bps"]), vec("pmax_w"))
    spectrum = SpectrumSpec(float(kv["subcarrier_bandwidth_hz"]), n)
    return Scenario(spectrum, topo, ChannelRealization(gain, noise, counts), power, qos, float(kv["p_tot_w"]))


def write_scenario(path, scenario: Scenario) -> None:
    with open(path, "w") as fh:
        fh.write(scenario_to_text(scenario))


def read_scenario(path) -> Scenario:
    with open(path) as fh:
        return scenario_from_text(fh.read())


def scenario_from_arrays(gain, noise, ue_counts, *, bandwidth_hz=15e3, zeta=4.0, static_power_w=1.0,
                         gamma_w_per_hz=0.0, pmax_w=1.0, delta_macro_bps=0.0, delta_small_bps=0.0,
                         p_tot_w=None) -> Scenario:
    """Build a Scenario from explicit channel arrays (tests, hand-made instances).

    Scalars broadcast to every cell; positions are synthetic placeholders.
    """
    gain = np.asarray(gain, dtype=float)
    noise = np.asarray(noise, dtype=float)
    m, _, _, n = gain.shape
    counts = tuple(int(k) for k in ue_counts)

    def per_cell(x):
        return np.broadcast_to(np.asarray(x, dtype=float), (m,)).copy()

    bs = np.zeros((m, 2))
    ues = tuple(np.zeros((k, 2)) for k in counts)
    topo = Topology(bs, ues, 250.0, 50.0)
    power = PowerModel(per_cell(zeta), per_cell(static_power_w), per_cell(gamma_w_per_hz))
    qos = QosSpec(float(delta_macro_bps), float(delta_small_bps), per_cell(pmax_w))
    spectrum = SpectrumSpec(float(bandwidth_hz), n)
    p_tot = p_tot_w if p_tot_w is not None else default_p_tot(power, qos, spectrum.total_bandwidth_hz)
    return Scenario(spectrum, topo, ChannelRealization(gain, noise, counts), power, qos, float(p_tot))
