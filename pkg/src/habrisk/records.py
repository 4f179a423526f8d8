"""Shared record types and the canonical missing-value semantics.

Every table that flows through the pipeline is a sequence of
:class:`SampleRecord` values, one per (plant, date). Missing measurements
are ``None`` -- never a sentinel number -- because the coverage-adjustment
arithmetic downstream needs unambiguous availability flags.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from datetime import date
from typing import Mapping, Optional

# Columns whose literal 0.0 is a missing-data placeholder in the upstream
# export and must be converted to None before any normalization.
ZERO_PLACEHOLDER_FIELDS = ("chlor_a", "kd490", "nflh")

# Fields constrained to [0, 1] when present.
PROBABILITY_FIELDS = ("det_mean", "hab_prob")

# Binary label fields ({0, 1} or missing).
LABEL_FIELDS = ("y_trusted", "y_weak", "y_final")

# The four ocean-color/thermal drivers used by the composite index.
DRIVER_FIELDS = ("chlor_a", "kd490", "nflh", "sst")

# Exact CSV header, in order. An empty cell means missing.
CSV_COLUMNS = (
    "plant_id",
    "timestamp",
    "group_key",
    "chlor_a",
    "kd490",
    "nflh",
    "sst",
    "fai_mean",
    "ndwi_mean",
    "rednir_mean",
    "det_mean",
    "hab_prob",
    "y_trusted",
    "y_weak",
    "y_final",
)


class RecordError(ValueError):
    """Raised when a raw row cannot be turned into a valid SampleRecord."""


class AlertState(enum.IntEnum):
    """Discrete alert tier. Total order NORMAL < WATCH < ACTION."""

    NORMAL = 0
    WATCH = 1
    ACTION = 2


@dataclass(frozen=True)
class SampleRecord:
    """One (plant, date) row of the training / inference table.

    Numeric fields are ``None`` when the measurement is unavailable.
    Records are immutable values and safe to share across threads.
    """

    plant_id: str
    timestamp: date
    group_key: str
    chlor_a: Optional[float] = None
    kd490: Optional[float] = None
    nflh: Optional[float] = None
    sst: Optional[float] = None
    fai_mean: Optional[float] = None
    ndwi_mean: Optional[float] = None
    rednir_mean: Optional[float] = None
    det_mean: Optional[float] = None
    hab_prob: Optional[float] = None
    y_trusted: Optional[int] = None
    y_weak: Optional[int] = None
    y_final: Optional[int] = None

    @property
    def month(self) -> int:
        return self.timestamp.month

    def replace(self, **changes) -> "SampleRecord":
        from dataclasses import replace as _replace

        return _replace(self, **changes)


NUMERIC_FIELDS = tuple(
    f.name
    for f in fields(SampleRecord)
    if f.name not in ("plant_id", "timestamp", "group_key") and f.name not in LABEL_FIELDS
)


def _parse_float(name: str, value) -> Optional[float]:
    if value is None:
        return None
    if isinstance(value, str):
        value = value.strip()
        if value == "":
            return None
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise RecordError(f"field {name!r}: cannot parse {value!r} as a number")
    if out != out:  # NaN also means missing
        return None
    return out


def _parse_label(name: str, value) -> Optional[int]:
    parsed = _parse_float(name, value)
    if parsed is None:
        return None
    if parsed not in (0.0, 1.0):
        raise RecordError(f"field {name!r}: expected 0 or 1, got {value!r}")
    return int(parsed)


def _parse_date(value) -> date:
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value).strip())
    except ValueError:
        raise RecordError(f"field 'timestamp': cannot parse {value!r} as an ISO date")


def validate_record(raw: Mapping[str, object]) -> SampleRecord:
    """Validate and normalize one raw row into a SampleRecord.

    Enforces: mandatory keys present; timestamp parses to a UTC day;
    probability fields in [0, 1]; zero values in the placeholder columns
    (chlor_a, kd490, nflh) converted to missing.
    """
    for key in ("plant_id", "timestamp", "group_key"):
        if key not in raw or raw[key] is None or str(raw[key]).strip() == "":
            raise RecordError(f"mandatory field {key!r} is missing or empty")

    plant_id = str(raw["plant_id"]).strip()
    group_key = str(raw["group_key"]).strip()
    timestamp = _parse_date(raw["timestamp"])

    values: dict = {}
    for name in NUMERIC_FIELDS:
        parsed = _parse_float(name, raw.get(name))
        if parsed is not None:
            if name in ZERO_PLACEHOLDER_FIELDS and parsed == 0.0:
                parsed = None
            elif name in PROBABILITY_FIELDS and not (0.0 <= parsed <= 1.0):
                raise RecordError(f"field {name!r}: value {parsed} outside [0, 1]")
        values[name] = parsed
    for name in LABEL_FIELDS:
        values[name] = _parse_label(name, raw.get(name))

    return SampleRecord(plant_id=plant_id, timestamp=timestamp, group_key=group_key, **values)


def record_to_row(rec: SampleRecord) -> dict:
    """Serialize a record to a CSV-ready dict (missing -> empty string)."""
    row = {
        "plant_id": rec.plant_id,
        "timestamp": rec.timestamp.isoformat(),
        "group_key": rec.group_key,
    }
    for name in NUMERIC_FIELDS:
        v = getattr(rec, name)
        row[name] = "" if v is None else repr(v)
    for name in LABEL_FIELDS:
        v = getattr(rec, name)
        row[name] = "" if v is None else str(v)
    return row
