"""Operational risk index: composite ocean-color index with coverage
adjustment, seasonal anomaly scores, the evidence blend with disagreement
discount, and exceedance-rate threshold calibration.

All statistics consumed here (driver quantiles, monthly climatology,
calibration pools) must come from the training/reference period only;
scoring is then a pure per-row function of the frozen config and stats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .records import DRIVER_FIELDS, AlertState, SampleRecord


@dataclass(frozen=True)
class OpsRiskConfig:
    driver_weights: Dict[str, float] = field(
        default_factory=lambda: {"chlor_a": 0.35, "nflh": 0.35, "kd490": 0.20, "sst": 0.10}
    )
    # blend order: hab_prob, det_mean, oci_adj, season_adj
    blend_weights: Tuple[float, float, float, float] = (0.40, 0.25, 0.20, 0.15)
    discount_slope: float = 0.18
    discount_floor: float = 0.75
    sigmoid_slope: float = 1.15
    z_clip: float = 3.0
    norm_quantiles: Tuple[float, float] = (0.1, 0.9)
    base_watch: float = 0.55
    base_action: float = 0.6238688594
    min_gap: float = 0.04
    watch_bounds: Tuple[float, float] = (0.05, 0.95)
    action_bounds: Tuple[float, float] = (0.05, 0.99)

    def __post_init__(self):
        if abs(sum(self.driver_weights.values()) - 1.0) > 1e-9:
            raise ValueError("driver weights must sum to 1")
        if abs(sum(self.blend_weights) - 1.0) > 1e-9:
            raise ValueError("blend weights must sum to 1")
        if not self.discount_floor < 1.0:
            raise ValueError("discount floor must be < 1")
        for lo, hi in (self.watch_bounds, self.action_bounds):
            if not lo < hi:
                raise ValueError("bounds must be ordered")


@dataclass(frozen=True)
class NormStats:
    """Reference-pool driver quantiles plus per-(driver, month) climatology."""

    q10: Dict[str, float]
    q90: Dict[str, float]
    monthly: Dict[Tuple[str, int], Tuple[float, float]]  # (driver, month) -> (median, iqr)

    def to_dict(self) -> dict:
        return {
            "q10": dict(sorted(self.q10.items())),
            "q90": dict(sorted(self.q90.items())),
            "monthly": {f"{d}|{m}": list(v) for (d, m), v in sorted(self.monthly.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormStats":
        monthly = {}
        for key, v in d["monthly"].items():
            drv, m = key.rsplit("|", 1)
            monthly[(drv, int(m))] = (float(v[0]), float(v[1]))
        return cls(q10=dict(d["q10"]), q90=dict(d["q90"]), monthly=monthly)


@dataclass(frozen=True)
class ThresholdSet:
    tau_watch: float
    tau_action: float
    r_watch: float
    r_action: float
    source: str  # "calibrated" | "base_fallback"

    def to_dict(self) -> dict:
        return {
            "tau_watch": self.tau_watch,
            "tau_action": self.tau_action,
            "r_watch": self.r_watch,
            "r_action": self.r_action,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdSet":
        return cls(
            tau_watch=float(d["tau_watch"]),
            tau_action=float(d["tau_action"]),
            r_watch=float(d["r_watch"]),
            r_action=float(d["r_action"]),
            source=str(d["source"]),
        )


@dataclass(frozen=True)
class OpsRiskRow:
    oci: float
    coverage: float
    oci_adj: float
    season_adj: float
    blend: Optional[float]
    discount: Optional[float]
    ops_risk: Optional[float]
    used_fallback: bool


def fit_norm_stats(records: Sequence[SampleRecord], cfg: OpsRiskConfig = OpsRiskConfig()) -> NormStats:
    """Fit Q10/Q90 and monthly median/IQR per driver on a reference pool.

    Quantiles use the empirical higher-order-statistic convention
    (conservative alert load).
    """
    qlo, qhi = cfg.norm_quantiles
    q10: Dict[str, float] = {}
    q90: Dict[str, float] = {}
    monthly: Dict[Tuple[str, int], Tuple[float, float]] = {}
    for d in DRIVER_FIELDS:
        values = np.asarray([getattr(r, d) for r in records if getattr(r, d) is not None])
        if values.size:
            lo, hi = np.quantile(values, [qlo, qhi], method="higher")
            q10[d], q90[d] = float(lo), float(hi)
    buckets: Dict[Tuple[str, int], List[float]] = {}
    for r in records:
        for d in DRIVER_FIELDS:
            v = getattr(r, d)
            if v is not None:
                buckets.setdefault((d, r.month), []).append(v)
    for key, vals in buckets.items():
        q25, q50, q75 = np.quantile(np.asarray(vals), [0.25, 0.5, 0.75], method="higher")
        monthly[key] = (float(q50), float(q75 - q25))
    return NormStats(q10=q10, q90=q90, monthly=monthly)


def normalize_driver(x: Optional[float], q10: float, q90: float) -> Optional[float]:
    """Clipped affine rescale of a driver onto [0, 1].

    A degenerate reference band (q90 == q10) is uninformative: present
    values map to 0.5 so they cannot push the composite.
    """
    if x is None:
        return None
    if q90 <= q10:
        return 0.5
    return min(1.0, max(0.0, (x - q10) / (q90 - q10)))


def _weighted_adjusted(values: Dict[str, Optional[float]], cfg: OpsRiskConfig) -> Tuple[float, float, float]:
    """Availability-weighted mean with coverage shrinkage toward 0.5.

    Returns (raw, coverage, adjusted); with nothing available the raw
    mean is reported as the 0.5 anchor itself.
    """
    total = sum(cfg.driver_weights.values())
    avail = {d: v for d, v in values.items() if v is not None}
    mass = sum(cfg.driver_weights[d] for d in avail)
    coverage = mass / total
    raw = sum(cfg.driver_weights[d] * v for d, v in avail.items()) / mass if mass > 0 else 0.5
    adjusted = raw * coverage + 0.5 * (1.0 - coverage)
    return raw, coverage, adjusted


def compute_oci(x_norm: Dict[str, Optional[float]], cfg: OpsRiskConfig) -> Tuple[float, float, float]:
    """(oci, coverage, oci_adj) from normalized drivers (None = missing)."""
    return _weighted_adjusted(x_norm, cfg)


def seasonal_score(
    x: Optional[float], month: int, stats: NormStats, driver: str, cfg: OpsRiskConfig
) -> Optional[float]:
    """Sigmoid of the clipped monthly anomaly z for one driver.

    z is clipped to [-z_clip, z_clip]; SST additionally clips at zero
    (cold anomalies carry no bloom evidence). Zero-IQR months give z=0.
    """
    if x is None:
        return None
    cell = stats.monthly.get((driver, month))
    if cell is None:
        return None
    median, iqr = cell
    z = 0.0 if iqr == 0.0 else (x - median) / iqr
    z = min(cfg.z_clip, max(-cfg.z_clip, z))
    if driver == "sst":
        z = max(z, 0.0)
    return 1.0 / (1.0 + math.exp(-cfg.sigmoid_slope * z))


def season_adj(s_values: Dict[str, Optional[float]], cfg: OpsRiskConfig) -> float:
    """Aggregate seasonal scores with the same ratios and shrinkage as OCI."""
    return _weighted_adjusted(s_values, cfg)[2]


def blend_and_discount(
    hab_prob: Optional[float],
    det_mean: Optional[float],
    oci_adj: float,
    season_adj_value: float,
    cfg: OpsRiskConfig,
    oci: float = 0.5,
    coverage: float = 0.0,
) -> OpsRiskRow:
    """Blend the four evidence channels and apply the disagreement discount.

    The blend needs all four inputs; if hab_prob or det_mean is missing
    the row falls back to hab_prob alone (used_fallback=True), and with
    hab_prob also missing the row is unscorable (ops_risk=None).
    """
    if hab_prob is None or det_mean is None:
        return OpsRiskRow(
            oci=oci,
            coverage=coverage,
            oci_adj=oci_adj,
            season_adj=season_adj_value,
            blend=None,
            discount=None,
            ops_risk=hab_prob,
            used_fallback=True,
        )
    w_hab, w_det, w_oci, w_season = cfg.blend_weights
    b = w_hab * hab_prob + w_det * det_mean + w_oci * oci_adj + w_season * season_adj_value
    d = min(1.0, max(cfg.discount_floor, 1.0 - cfg.discount_slope * abs(hab_prob - det_mean)))
    ops = min(1.0, max(0.0, b * d))
    return OpsRiskRow(
        oci=oci,
        coverage=coverage,
        oci_adj=oci_adj,
        season_adj=season_adj_value,
        blend=b,
        discount=d,
        ops_risk=ops,
        used_fallback=False,
    )


def score_record(
    rec: SampleRecord,
    stats: NormStats,
    cfg: OpsRiskConfig = OpsRiskConfig(),
    hab_prob: Optional[float] = None,
) -> OpsRiskRow:
    """Full per-row scoring given frozen stats; hab_prob overrides the record's."""
    x_norm = {}
    s_vals = {}
    for d in DRIVER_FIELDS:
        v = getattr(rec, d)
        if d in stats.q10:
            x_norm[d] = normalize_driver(v, stats.q10[d], stats.q90[d])
        else:
            x_norm[d] = None
        s_vals[d] = seasonal_score(v, rec.month, stats, d, cfg)
    oci, coverage, oci_adj = compute_oci(x_norm, cfg)
    sadj = season_adj(s_vals, cfg)
    hp = hab_prob if hab_prob is not None else rec.hab_prob
    return blend_and_discount(hp, rec.det_mean, oci_adj, sadj, cfg, oci=oci, coverage=coverage)


def match_exceedance(pool: Sequence[float], rate: float) -> float:
    """Smallest pool value v with fraction{pool >= v} <= rate.

    If even the maximum is exceeded too often (rate below 1/n), returns
    the next float above the maximum so the exceedance fraction is 0.
    """
    arr = sorted(pool)
    n = len(arr)
    for i, v in enumerate(arr):
        if i == 0 or v != arr[i - 1]:
            if (n - i) / n <= rate:
                return v
    return math.nextafter(arr[-1], math.inf)


def calibrate_thresholds(
    hab_prob_pool: Sequence[float],
    ops_risk_pool: Sequence[float],
    cfg: OpsRiskConfig = OpsRiskConfig(),
) -> ThresholdSet:
    """Match the base thresholds' exceedance rates onto the ops-risk scale.

    Empty pools retain the static base thresholds. After matching, each
    threshold is clamped to its bounds and the minimum gap is enforced by
    raising tau_action (capped at its upper bound, then lowering
    tau_watch if the gap is still violated).
    """
    hab = [v for v in hab_prob_pool if v is not None]
    ops = [v for v in ops_risk_pool if v is not None]
    if not hab or not ops:
        return ThresholdSet(
            tau_watch=cfg.base_watch,
            tau_action=cfg.base_action,
            r_watch=0.0,
            r_action=0.0,
            source="base_fallback",
        )
    n = len(hab)
    r_watch = sum(1 for v in hab if v >= cfg.base_watch) / n
    r_action = sum(1 for v in hab if v >= cfg.base_action) / n
    tau_watch = match_exceedance(ops, r_watch)
    tau_action = match_exceedance(ops, r_action)

    tau_watch = min(cfg.watch_bounds[1], max(cfg.watch_bounds[0], tau_watch))
    tau_action = min(cfg.action_bounds[1], max(cfg.action_bounds[0], tau_action))
    if tau_action - tau_watch < cfg.min_gap:
        tau_action = min(cfg.action_bounds[1], tau_watch + cfg.min_gap)
        if tau_action - tau_watch < cfg.min_gap:
            tau_watch = tau_action - cfg.min_gap
    return ThresholdSet(
        tau_watch=tau_watch,
        tau_action=tau_action,
        r_watch=r_watch,
        r_action=r_action,
        source="calibrated",
    )


def alert_state(p: float, thresholds: ThresholdSet) -> AlertState:
    """NORMAL below tau_watch, WATCH in [tau_watch, tau_action), ACTION above."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"score {p} outside [0, 1]")
    if p >= thresholds.tau_action:
        return AlertState.ACTION
    if p >= thresholds.tau_watch:
        return AlertState.WATCH
    return AlertState.NORMAL
