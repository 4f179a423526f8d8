"""Heuristic candidate mining and the trusted/weak label merge.

Weak positives are rows whose chlorophyll sits far above its monthly
climatology (anomaly z >= z_hi) and which pass a driver-availability
quality gate. The final label is the disjunction of trusted and weak;
trusted labels are preserved untouched so trusted-only evaluation stays
possible.

Monthly climatology must be fitted on the training partition only; the
cross-validation harness owns that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .records import DRIVER_FIELDS, SampleRecord

MonthlyStats = Dict[Tuple[str, int], Tuple[float, float]]  # (driver, month) -> (median, iqr)


@dataclass(frozen=True)
class MiningConfig:
    z_hi: float = 2.0
    min_quality: int = 2

    def __post_init__(self):
        if self.z_hi <= 0:
            raise ValueError("z_hi must be positive")
        if not 1 <= self.min_quality <= 4:
            raise ValueError("min_quality must be in 1..4")


def fit_monthly_stats(records: Sequence[SampleRecord], drivers=DRIVER_FIELDS) -> MonthlyStats:
    """Per-(driver, month) median and IQR over present values.

    Fit this on training rows only -- scoring future rows with stats that
    saw them is leakage.
    """
    buckets: Dict[Tuple[str, int], List[float]] = {}
    for rec in records:
        for d in drivers:
            v = getattr(rec, d)
            if v is not None:
                buckets.setdefault((d, rec.month), []).append(v)
    stats: MonthlyStats = {}
    for key, values in buckets.items():
        arr = np.asarray(values, dtype=float)
        q25, q50, q75 = np.quantile(arr, [0.25, 0.5, 0.75], method="higher")
        stats[key] = (float(q50), float(q75 - q25))
    return stats


def monthly_z(value: Optional[float], median: float, iqr: float) -> Optional[float]:
    """Unclipped monthly anomaly z; zero-IQR cells carry no information."""
    if value is None:
        return None
    if iqr == 0.0:
        return 0.0
    return (value - median) / iqr


def heuristic_score(record: SampleRecord, monthly_stats: MonthlyStats, cfg: MiningConfig) -> int:
    """1 iff chlor_a is present and its monthly anomaly z >= z_hi."""
    cell = monthly_stats.get(("chlor_a", record.month))
    if cell is None or record.chlor_a is None:
        return 0
    z = monthly_z(record.chlor_a, *cell)
    return int(z is not None and z >= cfg.z_hi)


def quality(record: SampleRecord, cfg: MiningConfig) -> bool:
    """True iff enough of the four drivers are present."""
    present = sum(1 for d in DRIVER_FIELDS if getattr(record, d) is not None)
    return present >= cfg.min_quality


def mine_labels(
    records: Sequence[SampleRecord],
    cfg: MiningConfig,
    monthly_stats: Optional[MonthlyStats] = None,
) -> List[SampleRecord]:
    """Fill y_weak and y_final; y_trusted passes through unchanged.

    y_weak = heuristic AND quality; y_final = y_trusted OR y_weak with a
    missing trusted label treated as 0. Idempotent.
    """
    if monthly_stats is None:
        monthly_stats = fit_monthly_stats(records)
    out = []
    for rec in records:
        weak = int(heuristic_score(rec, monthly_stats, cfg) == 1 and quality(rec, cfg))
        final = int((rec.y_trusted == 1) or weak == 1)
        out.append(rec.replace(y_weak=weak, y_final=final))
    return out
