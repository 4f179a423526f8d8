from datetime import date

import pytest

from habrisk.records import SampleRecord
from habrisk.splits import group_safe_folds, temporal_folds


def rec(group, day=1, month=1, year=2020):
    return SampleRecord(plant_id="A", timestamp=date(year, month, day), group_key=group)


def make(groups):
    """groups: dict group_key -> size."""
    out = []
    for g, n in groups.items():
        out.extend(rec(g) for _ in range(n))
    return out


def test_perfect_balance():
    records = make({"g1": 10, "g2": 10, "g3": 10, "g4": 10})
    a = group_safe_folds(records, 2, seed=0)
    sizes = [len(a.test_indices(f)) for f in range(2)]
    assert sizes == [20, 20]


def test_greedy_largest_first():
    records = make({"a": 5, "b": 3, "c": 2, "d": 2})
    a = group_safe_folds(records, 2, seed=0)
    sizes = sorted(len(a.test_indices(f)) for f in range(2))
    assert sizes == [5, 7]


def test_too_few_groups():
    with pytest.raises(ValueError):
        group_safe_folds(make({"only": 4}), 2)


def test_groups_never_split():
    records = make({f"g{i}": (i % 4) + 1 for i in range(20)})
    a = group_safe_folds(records, 5, seed=3)
    fold_by_group = {}
    for i, r in enumerate(records):
        fold_by_group.setdefault(r.group_key, set()).add(a.fold_of[i])
    assert all(len(folds) == 1 for folds in fold_by_group.values())


def test_determinism():
    records = make({f"g{i}": 3 for i in range(12)})
    a = group_safe_folds(records, 4, seed=9)
    b = group_safe_folds(records, 4, seed=9)
    assert a == b
    c = group_safe_folds(records, 4, seed=10)
    assert a != c  # equal-size groups reshuffled


def _dated(days):
    return [rec("g%d" % i, day=d, month=m, year=y) for i, (y, m, d) in enumerate(days)]


def test_temporal_single_cutoff():
    records = _dated([(2017, 1, 1), (2020, 6, 1), (2024, 12, 31), (2025, 3, 1), (2025, 9, 9)])
    pairs = temporal_folds(records, [date(2024, 12, 31)])
    assert len(pairs) == 1
    train, test = pairs[0]
    assert train == [0, 1, 2] and test == [3, 4]


def test_temporal_two_cutoffs_expanding():
    records = _dated(
        [(2020, 1, 1), (2021, 1, 1), (2022, 1, 1), (2023, 1, 1), (2024, 1, 1), (2025, 1, 1)]
    )
    pairs = temporal_folds(records, [date(2021, 6, 1), date(2023, 6, 1)])
    (train1, test1), (train2, test2) = pairs
    assert set(train1) <= set(train2)  # expanding window
    assert test1 == [2, 3] and test2 == [4, 5]
    for train, test in pairs:
        assert max(records[i].timestamp for i in train) < min(records[i].timestamp for i in test)


def test_temporal_degenerate_skipped(caplog):
    records = _dated([(2018, 1, 1), (2018, 2, 1)])
    pairs = temporal_folds(records, [date(2025, 1, 1)])
    assert pairs == []


def test_temporal_unsorted_cutoffs():
    with pytest.raises(ValueError):
        temporal_folds(_dated([(2020, 1, 1)]), [date(2022, 1, 1), date(2021, 1, 1)])


def test_temporal_strict_ordering_property():
    records = _dated([(2017 + i % 9, (i % 12) + 1, (i % 27) + 1) for i in range(60)])
    pairs = temporal_folds(records, [date(2019, 6, 1), date(2022, 1, 1), date(2024, 1, 1)])
    for train, test in pairs:
        assert max(records[i].timestamp for i in train) < min(records[i].timestamp for i in test)
