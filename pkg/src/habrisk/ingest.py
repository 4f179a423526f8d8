"""Table loading, the feature-range report, and seasonality encoding."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .records import CSV_COLUMNS, LABEL_FIELDS, NUMERIC_FIELDS, RecordError, SampleRecord, validate_record


class TableError(ValueError):
    """Raised for header mismatches or row-level validation failures."""


@dataclass(frozen=True)
class ColumnSummary:
    n_present: int
    min: Optional[float] = None
    max: Optional[float] = None
    mean: Optional[float] = None
    sd: Optional[float] = None


# Columns covered by the range report (numeric, non-label).
RANGE_COLUMNS = tuple(n for n in NUMERIC_FIELDS)


def load_table(path: str | Path) -> List[SampleRecord]:
    """Load a CSV table, validating every row. Row order is preserved.

    The header must match the canonical schema exactly (order included);
    a bad row aborts the load with its 1-based data row index.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TableError(f"{path}: empty file")
        if tuple(header) != CSV_COLUMNS:
            raise TableError(
                f"{path}: header mismatch; expected {','.join(CSV_COLUMNS)} got {','.join(header)}"
            )
        records = []
        for i, row in enumerate(reader, start=1):
            raw = dict(zip(CSV_COLUMNS, row))
            try:
                records.append(validate_record(raw))
            except RecordError as exc:
                raise TableError(f"{path}: row {i}: {exc}") from exc
    return records


def summarize_ranges(records: Sequence[SampleRecord]) -> Dict[str, ColumnSummary]:
    """Per-column min/max/mean/sd over present values (sample sd, n-1).

    Columns with no present values report n_present=0 and no statistics.
    """
    if not records:
        raise TableError("summarize_ranges needs at least one record")
    out: Dict[str, ColumnSummary] = {}
    for col in RANGE_COLUMNS + LABEL_FIELDS:
        values = [getattr(r, col) for r in records if getattr(r, col) is not None]
        if not values:
            out[col] = ColumnSummary(n_present=0)
            continue
        n = len(values)
        mean = sum(values) / n
        if n > 1:
            sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
        else:
            sd = 0.0
        out[col] = ColumnSummary(n_present=n, min=min(values), max=max(values), mean=mean, sd=sd)
    return out


def ranges_to_dict(summary: Dict[str, ColumnSummary]) -> dict:
    out = {}
    for col, s in summary.items():
        entry: dict = {"n_present": s.n_present}
        if s.n_present:
            entry.update(min=s.min, max=s.max, mean=s.mean, sd=s.sd)
        out[col] = entry
    return out


def season_encode(month: int) -> tuple[float, float]:
    """Encode a calendar month as (sin(2*pi*m/12), cos(2*pi*m/12))."""
    if not (isinstance(month, int) and 1 <= month <= 12):
        raise ValueError(f"month must be an integer in 1..12, got {month!r}")
    angle = 2.0 * math.pi * month / 12.0
    return math.sin(angle), math.cos(angle)
