"""Distribution-shift monitoring between a reference and a current period.

PSI uses reference-quantile (decile by default) bins with eps-floored
proportions; KS is the plain two-sample ECDF statistic with no p-value.
Also exports monthly alert rates and top-k events per plant.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .opsrisk import ThresholdSet, alert_state
from .records import AlertState


def psi(
    reference: Sequence[float],
    current: Sequence[float],
    n_bins: int = 10,
    eps: float = 1e-4,
) -> float:
    """Population stability index with reference-quantile bins.

    Bin edges are the interior quantiles of the reference sample; both
    proportion vectors are floored at eps before the log so disjoint
    supports stay finite.
    """
    ref = np.asarray(reference, dtype=float)
    cur = np.asarray(current, dtype=float)
    if ref.size == 0 or cur.size == 0:
        raise ValueError("psi needs non-empty samples")
    edges = np.quantile(ref, np.linspace(0, 1, n_bins + 1)[1:-1])
    p_ref = np.bincount(np.searchsorted(edges, ref, side="left"), minlength=n_bins) / ref.size
    p_cur = np.bincount(np.searchsorted(edges, cur, side="left"), minlength=n_bins) / cur.size
    p_ref = np.maximum(p_ref, eps)
    p_cur = np.maximum(p_cur, eps)
    return float(np.sum((p_cur - p_ref) * np.log(p_cur / p_ref)))


def ks_distance(reference: Sequence[float], current: Sequence[float]) -> float:
    """Two-sample KS statistic: sup |ECDF_ref - ECDF_cur| at sample points."""
    ref = np.sort(np.asarray(reference, dtype=float))
    cur = np.sort(np.asarray(current, dtype=float))
    if ref.size == 0 or cur.size == 0:
        raise ValueError("ks_distance needs non-empty samples")
    points = np.concatenate([ref, cur])
    cdf_ref = np.searchsorted(ref, points, side="right") / ref.size
    cdf_cur = np.searchsorted(cur, points, side="right") / cur.size
    return float(np.max(np.abs(cdf_ref - cdf_cur)))


def monthly_alert_rates(
    rows: Sequence[dict], thresholds: ThresholdSet
) -> Dict[str, Dict[str, dict]]:
    """Per (plant, calendar month) WATCH-or-above and ACTION fractions.

    Rows are dicts with at least plant_id, timestamp (ISO date string),
    ops_risk; rows without a score are skipped, empty months omitted.
    """
    buckets: Dict[Tuple[str, str], List[float]] = defaultdict(list)
    for row in rows:
        p = row.get("ops_risk")
        if p is None:
            continue
        month_key = str(row["timestamp"])[:7]  # YYYY-MM
        buckets[(row["plant_id"], month_key)].append(float(p))
    out: Dict[str, Dict[str, dict]] = defaultdict(dict)
    for (plant, month_key), scores in sorted(buckets.items()):
        states = [alert_state(p, thresholds) for p in scores]
        n = len(states)
        out[plant][month_key] = {
            "n": n,
            "rate_watch": sum(1 for s in states if s >= AlertState.WATCH) / n,
            "rate_action": sum(1 for s in states if s == AlertState.ACTION) / n,
        }
    return dict(out)


def topk_events(rows: Sequence[dict], k: int = 10) -> Dict[str, List[dict]]:
    """Per plant, the k highest-ops_risk rows; ties go to the later date."""
    if k < 1:
        raise ValueError("k must be >= 1")
    by_plant: Dict[str, List[dict]] = defaultdict(list)
    for row in rows:
        if row.get("ops_risk") is not None:
            by_plant[row["plant_id"]].append(row)
    out = {}
    for plant, items in sorted(by_plant.items()):
        items.sort(key=lambda r: (-float(r["ops_risk"]), _neg_date(str(r["timestamp"]))))
        out[plant] = items[:k]
    return out


def _neg_date(iso: str) -> str:
    # lexicographic inversion of an ISO date so later dates sort first
    return "".join(chr(255 - ord(c)) for c in iso)


def drift_report(
    reference_rows: Sequence[dict],
    current_rows: Sequence[dict],
    thresholds: ThresholdSet,
    k: int = 10,
    n_bins: int = 10,
) -> dict:
    """Per-plant and pooled PSI/KS on ops_risk, monthly rates, top-k events."""
    ref_by_plant: Dict[str, List[float]] = defaultdict(list)
    cur_by_plant: Dict[str, List[float]] = defaultdict(list)
    for row in reference_rows:
        if row.get("ops_risk") is not None:
            ref_by_plant[row["plant_id"]].append(float(row["ops_risk"]))
    for row in current_rows:
        if row.get("ops_risk") is not None:
            cur_by_plant[row["plant_id"]].append(float(row["ops_risk"]))

    per_plant = {}
    for plant in sorted(set(ref_by_plant) & set(cur_by_plant)):
        per_plant[plant] = {
            "psi": psi(ref_by_plant[plant], cur_by_plant[plant], n_bins=n_bins),
            "ks": ks_distance(ref_by_plant[plant], cur_by_plant[plant]),
        }
    pooled_ref = [v for vs in ref_by_plant.values() for v in vs]
    pooled_cur = [v for vs in cur_by_plant.values() for v in vs]
    pooled = None
    if pooled_ref and pooled_cur:
        pooled = {
            "psi": psi(pooled_ref, pooled_cur, n_bins=n_bins),
            "ks": ks_distance(pooled_ref, pooled_cur),
        }
    return {
        "binning": {"kind": "reference_quantile", "n_bins": n_bins},
        "per_plant": per_plant,
        "pooled": pooled,
        "monthly_alert_rates": monthly_alert_rates(current_rows, thresholds),
        "topk": topk_events(current_rows, k=k),
    }
