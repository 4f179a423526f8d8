from datetime import date

import pytest
from hypothesis import given, strategies as st

from habrisk.records import (
    RecordError,
    SampleRecord,
    record_to_row,
    validate_record,
)

BASE = {"plant_id": "A", "timestamp": "2024-03-15", "group_key": "S20240315-T1"}


def test_month_derived_from_timestamp():
    rec = validate_record(BASE)
    assert rec.timestamp == date(2024, 3, 15)
    assert rec.month == 3


def test_zero_placeholder_becomes_missing():
    rec = validate_record({**BASE, "chlor_a": "0.0", "kd490": 0, "nflh": "0"})
    assert rec.chlor_a is None and rec.kd490 is None and rec.nflh is None


def test_sst_zero_is_kept():
    rec = validate_record({**BASE, "sst": "0.0"})
    assert rec.sst == 0.0


def test_probability_out_of_range_rejected():
    with pytest.raises(RecordError, match="hab_prob"):
        validate_record({**BASE, "hab_prob": "1.3"})


@pytest.mark.parametrize("key", ["plant_id", "timestamp", "group_key"])
def test_mandatory_key_missing(key):
    raw = {k: v for k, v in BASE.items() if k != key}
    with pytest.raises(RecordError, match=key):
        validate_record(raw)


def test_empty_group_key_rejected():
    with pytest.raises(RecordError):
        validate_record({**BASE, "group_key": "  "})


def test_unparseable_date():
    with pytest.raises(RecordError, match="timestamp"):
        validate_record({**BASE, "timestamp": "15/03/2024"})


def test_bad_label_value():
    with pytest.raises(RecordError, match="y_trusted"):
        validate_record({**BASE, "y_trusted": "2"})


@given(
    chlor=st.one_of(st.none(), st.floats(0.001, 10)),
    sst=st.one_of(st.none(), st.floats(-2, 35)),
    prob=st.one_of(st.none(), st.floats(0, 1)),
    label=st.one_of(st.none(), st.sampled_from([0, 1])),
)
def test_round_trip(chlor, sst, prob, label):
    rec = validate_record(
        {**BASE, "chlor_a": chlor, "sst": sst, "hab_prob": prob, "y_trusted": label}
    )
    again = validate_record(record_to_row(rec))
    assert again == rec


def test_no_literal_zero_survives_for_placeholder_columns():
    rec = validate_record({**BASE, "chlor_a": 0.0, "kd490": 0.0, "nflh": 0.0})
    for field in ("chlor_a", "kd490", "nflh"):
        assert getattr(rec, field) != 0.0


def test_records_are_immutable():
    rec = validate_record(BASE)
    with pytest.raises(AttributeError):
        rec.plant_id = "B"
