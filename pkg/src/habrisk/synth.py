"""Deterministic synthetic training-table generator.

No real plant tables ship with the project, so this module fabricates a
multi-year, multi-plant table whose per-column envelopes match the
documented feature ranges. A latent bloom state injects learnable signal:
bloom rows shift chlorophyll, fluorescence, attenuation, detector
confidence, and the optical indices toward their event-regime sub-ranges.

Placeholder semantics of the real export are reproduced: a fraction of
chlor_a / kd490 / nflh cells are written as literal 0.0 and some cells are
left empty, so ingestion's zero-to-missing conversion is exercised.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from .records import CSV_COLUMNS

# (lo, hi) envelope per generated column; observed column min/max must land
# within 1% of these spans.
ENVELOPES: Dict[str, Tuple[float, float]] = {
    "chlor_a": (0.044, 9.972),
    "kd490": (0.019, 2.244),
    "nflh": (-0.026, 0.736),
    "sst": (23.945, 32.995),
    "fai_mean": (-0.073, 0.084),
    "ndwi_mean": (-0.393, 0.068),
    "rednir_mean": (0.367, 1.088),
}

# Regime sub-ranges: (quiet_lo, quiet_hi, bloom_lo, bloom_hi).
_REGIMES = {
    "chlor_a": (0.044, 1.50, 2.00, 9.972),
    "kd490": (0.019, 0.50, 0.50, 2.244),
    "nflh": (-0.026, 0.30, 0.30, 0.736),
    "sst": (23.945, 31.00, 27.00, 32.995),
    "fai_mean": (-0.073, 0.030, 0.020, 0.084),
    "ndwi_mean": (-0.393, 0.068, -0.393, 0.068),
    "rednir_mean": (0.800, 1.088, 0.367, 0.900),
}


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 17
    start: date = date(2017, 1, 1)
    end: date = date(2025, 12, 31)
    step_days: int = 3
    plants: Tuple[str, ...] = ("A", "B", "C", "D")
    # Tile shared per overpass; plants on the same tile share group keys.
    tile_of: Dict[str, str] = field(
        default_factory=lambda: {"A": "T1", "B": "T1", "C": "T2", "D": "T2"}
    )
    prevalence: float = 0.22
    trusted_label_rate: float = 0.5
    trusted_noise: float = 0.04
    placeholder_zero_rate: float = 0.05
    missing_rate: float = 0.03
    # Final-year shift: bloom odds multiplier applied from shift_year on.
    shift_year: int = 2025
    shift_factor: float = 1.6


def _season_bump(month: int) -> float:
    """Late-summer bloom seasonality, peak around September."""
    return 0.5 + 1.0 * max(0.0, math.sin(2.0 * math.pi * (month - 6) / 12.0))


def generate_rows(cfg: SynthConfig = SynthConfig()) -> List[dict]:
    """Generate raw CSV rows (strings, '' = missing) for the full table."""
    rng = np.random.default_rng(cfg.seed)
    rows: List[dict] = []
    day = cfg.start
    while day <= cfg.end:
        for plant in cfg.plants:
            tile = cfg.tile_of[plant]
            p = cfg.prevalence * _season_bump(day.month)
            if day.year >= cfg.shift_year:
                p *= cfg.shift_factor
            bloom = rng.random() < min(p, 0.95)

            row = {c: "" for c in CSV_COLUMNS}
            row["plant_id"] = plant
            row["timestamp"] = day.isoformat()
            row["group_key"] = f"S{day:%Y%m%d}-{tile}"

            for col, (qlo, qhi, blo, bhi) in _REGIMES.items():
                lo, hi = (blo, bhi) if bloom else (qlo, qhi)
                value = float(rng.uniform(lo, hi))
                if col in ("chlor_a", "kd490", "nflh") and rng.random() < cfg.placeholder_zero_rate:
                    row[col] = "0.0"
                elif rng.random() < cfg.missing_rate:
                    row[col] = ""
                else:
                    row[col] = f"{value:.6f}"

            det_lo, det_hi = (0.40, 0.95) if bloom else (0.0, 0.45)
            if rng.random() < cfg.missing_rate:
                row["det_mean"] = ""
            else:
                row["det_mean"] = f"{float(rng.uniform(det_lo, det_hi)):.6f}"

            if rng.random() < cfg.trusted_label_rate:
                label = int(bloom)
                if rng.random() < cfg.trusted_noise:
                    label = 1 - label
                row["y_trusted"] = str(label)
            rows.append(row)
        day += timedelta(days=cfg.step_days)
    return rows


def write_synthetic_csv(path: str | Path, cfg: SynthConfig = SynthConfig()) -> int:
    """Write the synthetic table to `path`; returns the row count."""
    rows = generate_rows(cfg)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(CSV_COLUMNS))
        writer.writeheader()
        writer.writerows(rows)
    return len(rows)
