from datetime import date

import pytest

from habrisk.labeling import (
    MiningConfig,
    fit_monthly_stats,
    heuristic_score,
    mine_labels,
    monthly_z,
    quality,
)
from habrisk.records import SampleRecord


def rec(**kw):
    base = dict(plant_id="A", timestamp=date(2024, 6, 1), group_key="G")
    base.update(kw)
    return SampleRecord(**base)


STATS = {("chlor_a", 6): (0.3, 0.1)}
CFG = MiningConfig()


def test_config_validation():
    with pytest.raises(ValueError):
        MiningConfig(z_hi=0)
    with pytest.raises(ValueError):
        MiningConfig(min_quality=5)


def test_heuristic_zero_anomaly():
    assert heuristic_score(rec(chlor_a=0.3), STATS, CFG) == 0


def test_heuristic_worked_example():
    # z = (0.55 - 0.3) / 0.1 = 2.5 >= 2
    assert heuristic_score(rec(chlor_a=0.55), STATS, CFG) == 1


def test_heuristic_missing_chlor():
    assert heuristic_score(rec(), STATS, CFG) == 0


def test_heuristic_zero_iqr_month():
    assert monthly_z(5.0, 0.3, 0.0) == 0.0
    assert heuristic_score(rec(chlor_a=5.0), {("chlor_a", 6): (0.3, 0.0)}, CFG) == 0


def test_quality_counts():
    assert quality(rec(chlor_a=1, kd490=1, nflh=1, sst=20), CFG)
    assert not quality(rec(chlor_a=1), CFG)
    assert quality(rec(chlor_a=1, sst=20), CFG)  # boundary inclusive


def test_merge_or_semantics():
    records = [
        rec(chlor_a=0.55, kd490=0.1, y_trusted=1),  # trusted wins regardless
        rec(chlor_a=0.55, kd490=0.1),  # weak only
        rec(chlor_a=0.3, kd490=0.1, y_trusted=0),  # neither
    ]
    out = mine_labels(records, CFG, monthly_stats=STATS)
    assert [r.y_final for r in out] == [1, 1, 0]
    assert [r.y_weak for r in out] == [1, 1, 0]
    assert [r.y_trusted for r in out] == [1, None, 0]  # trusted untouched


def test_missing_trusted_is_zero_in_or():
    out = mine_labels([rec(chlor_a=0.3, kd490=0.1)], CFG, monthly_stats=STATS)
    assert out[0].y_final == 0


def test_final_dominates_components():
    records = [rec(chlor_a=c, kd490=0.1, y_trusted=t) for c in (0.3, 0.6) for t in (None, 0, 1)]
    for r in mine_labels(records, CFG, monthly_stats=STATS):
        assert r.y_final >= (r.y_trusted or 0)
        assert r.y_final >= (r.y_weak or 0)


def test_z_hi_monotonicity():
    records = [rec(chlor_a=0.3 + 0.05 * i, kd490=0.1) for i in range(10)]
    counts = []
    for z_hi in (1.0, 2.0, 3.0):
        out = mine_labels(records, MiningConfig(z_hi=z_hi), monthly_stats=STATS)
        counts.append(sum(r.y_weak for r in out))
    assert counts == sorted(counts, reverse=True)


def test_idempotent():
    records = [rec(chlor_a=0.55, kd490=0.1), rec(chlor_a=0.3, kd490=0.1)]
    once = mine_labels(records, CFG, monthly_stats=STATS)
    twice = mine_labels(once, CFG, monthly_stats=STATS)
    assert once == twice


def test_fit_monthly_stats_median_iqr():
    records = [rec(timestamp=date(2024, 6, d), chlor_a=float(v)) for d, v in enumerate([1, 2, 3, 4, 5], start=1)]
    stats = fit_monthly_stats(records)
    median, iqr = stats[("chlor_a", 6)]
    assert median == 3.0
    assert iqr >= 0
