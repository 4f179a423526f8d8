import math
from datetime import date

import pytest

from habrisk.baseline import FitError, LinearScorer, feature_value, fit, score, score_many
from habrisk.metrics import auroc
from habrisk.records import SampleRecord


def rec(chlor=None, det=None, y=None, month=6):
    return SampleRecord(
        plant_id="A",
        timestamp=date(2020, month, 1),
        group_key="G",
        chlor_a=chlor,
        det_mean=det,
        y_final=y,
    )


def separable():
    return [rec(chlor=0.1 + 0.05 * i, y=0) for i in range(5)] + [
        rec(chlor=2.0 + 0.2 * i, y=1) for i in range(5)
    ]


def test_perfectly_separable_auroc_one():
    train = separable()
    model = fit(train, features=("chlor_a_log1p",), l2=0.0, iters=300)
    scores = score_many(model, train)
    assert auroc(scores, [r.y_final for r in train]) == 1.0


def test_single_class_rejected():
    with pytest.raises(FitError):
        fit([rec(chlor=1.0, y=1), rec(chlor=2.0, y=1)], features=("chlor_a_log1p",))


def test_missing_label_rejected():
    with pytest.raises(FitError):
        fit([rec(chlor=1.0, y=1), rec(chlor=2.0)], features=("chlor_a_log1p",))


def test_huge_l2_shrinks_weights_to_zero():
    model = fit(separable(), features=("chlor_a_log1p",), l2=1e6, iters=500)
    assert max(abs(w) for w in model.weights) < 1e-3


def test_zero_model_scores_half():
    model = LinearScorer(("chlor_a",), (1.0,), (1.0,), (0.0,), 0.0)
    assert score(model, rec(chlor=5.0)) == 0.5


def test_record_at_means_scores_logistic_bias():
    model = LinearScorer(("chlor_a",), (2.0,), (1.0,), (3.0,), 0.7)
    assert score(model, rec(chlor=2.0)) == pytest.approx(1 / (1 + math.exp(-0.7)))


def test_hand_logistic_value():
    model = LinearScorer(("chlor_a",), (0.0,), (1.0,), (1.0,), 0.0)
    assert score(model, rec(chlor=1.0)) == pytest.approx(0.7310586, abs=1e-6)


def test_missing_feature_imputes_to_mean():
    model = LinearScorer(("chlor_a",), (2.0,), (1.0,), (5.0,), 0.3)
    assert score(model, rec()) == pytest.approx(1 / (1 + math.exp(-0.3)))


def test_affine_rescale_invariance():
    train = separable()
    model_a = fit(train, features=("chlor_a",), l2=1e-3, iters=400)
    rescaled = [r.replace(chlor_a=7.0 * r.chlor_a + 3.0) for r in train]
    model_b = fit(rescaled, features=("chlor_a",), l2=1e-3, iters=400)
    for r_a, r_b in zip(train, rescaled):
        assert score(model_a, r_a) == pytest.approx(score(model_b, r_b), abs=1e-8)


def test_fit_deterministic():
    a = fit(separable(), features=("chlor_a_log1p", "det_mean"))
    b = fit(separable(), features=("chlor_a_log1p", "det_mean"))
    assert a == b


def test_zero_variance_feature_dropped():
    train = [r.replace(sst=25.0) for r in separable()]
    model = fit(train, features=("chlor_a_log1p", "sst"))
    assert "sst" not in model.feature_list


def test_season_features():
    r = rec(month=3)
    assert feature_value(r, "sin_m") == pytest.approx(1.0)
    assert feature_value(r, "cos_m") == pytest.approx(0.0, abs=1e-12)


def test_serialization_round_trip():
    model = fit(separable(), features=("chlor_a_log1p",))
    again = LinearScorer.from_dict(model.to_dict())
    assert again == model
