"""Spectral index fields over masked chip pixel grids and their summaries.

Indices are computed per pixel; invalid pixels (land, cloud, degenerate
denominators) are excluded from the robust summaries that become the
training-table columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

# Sentinel-2 band centers (nm) for red / NIR / SWIR, used by the
# baseline-corrected NIR anomaly. Configurable per call.
DEFAULT_WAVELENGTHS = (665.0, 842.0, 1610.0)


@dataclass(frozen=True)
class ChipBands:
    """Per-pixel reflectance grids for one chip plus a validity mask."""

    green: np.ndarray
    red: np.ndarray
    nir: np.ndarray
    swir: np.ndarray
    valid_mask: np.ndarray

    def __post_init__(self):
        shape = self.green.shape
        for name in ("red", "nir", "swir", "valid_mask"):
            if getattr(self, name).shape != shape:
                raise ValueError(f"band {name!r} shape {getattr(self, name).shape} != {shape}")
        for name in ("green", "red", "nir", "swir"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"band {name!r} contains non-finite values")


@dataclass(frozen=True)
class IndexSummary:
    n_valid: int
    mean: Optional[float] = None
    sd: Optional[float] = None
    q10: Optional[float] = None
    q50: Optional[float] = None
    q90: Optional[float] = None


def ndwi(green: np.ndarray, nir: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(green - nir) / (green + nir); zero-denominator pixels flagged invalid.

    Returns (values, valid) where invalid pixels hold 0.0.
    """
    green = np.asarray(green, dtype=float)
    nir = np.asarray(nir, dtype=float)
    denom = green + nir
    valid = denom != 0.0
    values = np.zeros_like(denom)
    np.divide(green - nir, denom, out=values, where=valid)
    return values, valid


def fai(
    red: np.ndarray,
    nir: np.ndarray,
    swir: np.ndarray,
    wavelengths: Tuple[float, float, float] = DEFAULT_WAVELENGTHS,
) -> np.ndarray:
    """NIR anomaly above the linear red-SWIR baseline.

    nir - [red + (swir - red) * (l_nir - l_red) / (l_swir - l_red)]
    """
    l_red, l_nir, l_swir = wavelengths
    if not (l_red < l_nir < l_swir):
        raise ValueError(f"wavelengths must be strictly increasing, got {wavelengths}")
    frac = (l_nir - l_red) / (l_swir - l_red)
    red = np.asarray(red, dtype=float)
    nir = np.asarray(nir, dtype=float)
    swir = np.asarray(swir, dtype=float)
    return nir - (red + (swir - red) * frac)


def rednir_ratio(red: np.ndarray, nir: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """red / nir contrast ratio; pixels with nir <= 0 flagged invalid."""
    red = np.asarray(red, dtype=float)
    nir = np.asarray(nir, dtype=float)
    valid = nir > 0.0
    values = np.zeros_like(red)
    np.divide(red, nir, out=values, where=valid)
    return values, valid


def summarize_index(values: np.ndarray, mask: np.ndarray) -> IndexSummary:
    """Robust summary (mean/sd/quantiles) over valid pixels only.

    Quantiles interpolate linearly between order statistics. sd is the
    population form over the valid pixels (0 for a single pixel).
    """
    values = np.asarray(values, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if values.shape != mask.shape:
        raise ValueError("values and mask shapes differ")
    sel = values[mask]
    n = int(sel.size)
    if n == 0:
        return IndexSummary(n_valid=0)
    q10, q50, q90 = np.quantile(sel, [0.1, 0.5, 0.9])
    return IndexSummary(
        n_valid=n,
        mean=float(sel.mean()),
        sd=float(sel.std()),
        q10=float(q10),
        q50=float(q50),
        q90=float(q90),
    )


def chip_summaries(chip: ChipBands, wavelengths=DEFAULT_WAVELENGTHS) -> dict:
    """All index summaries for one chip, keyed '<index>_<stat>'."""
    ndwi_v, ndwi_ok = ndwi(chip.green, chip.nir)
    fai_v = fai(chip.red, chip.nir, chip.swir, wavelengths)
    rn_v, rn_ok = rednir_ratio(chip.red, chip.nir)
    out = {}
    for name, vals, ok in (
        ("ndwi", ndwi_v, chip.valid_mask & ndwi_ok),
        ("fai", fai_v, chip.valid_mask),
        ("rednir", rn_v, chip.valid_mask & rn_ok),
    ):
        s = summarize_index(vals, ok)
        out[f"{name}_n_valid"] = s.n_valid
        for stat in ("mean", "sd", "q10", "q50", "q90"):
            out[f"{name}_{stat}"] = getattr(s, stat)
    return out
