"""Reference fusion scorer: deterministic L2-regularized logistic model.

Stands in for the production gradient-boosted fusion model so the full
harness runs with no external ML tooling. Only the ranking it produces is
contractual; its probability calibration is not asserted anywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ingest import season_encode
from .records import SampleRecord

DEFAULT_FEATURES = (
    "chlor_a_log1p",
    "kd490",
    "nflh",
    "sst",
    "fai_mean",
    "ndwi_mean",
    "rednir_mean",
    "det_mean",
    "sin_m",
    "cos_m",
)


class FitError(ValueError):
    pass


def feature_value(rec: SampleRecord, name: str) -> Optional[float]:
    if name == "chlor_a_log1p":
        return None if rec.chlor_a is None else math.log1p(rec.chlor_a)
    if name == "sin_m":
        return season_encode(rec.month)[0]
    if name == "cos_m":
        return season_encode(rec.month)[1]
    return getattr(rec, name)


@dataclass(frozen=True)
class LinearScorer:
    feature_list: Tuple[str, ...]
    feature_means: Tuple[float, ...]
    feature_sds: Tuple[float, ...]
    weights: Tuple[float, ...]
    bias: float

    def to_dict(self) -> dict:
        return {
            "feature_list": list(self.feature_list),
            "feature_means": list(self.feature_means),
            "feature_sds": list(self.feature_sds),
            "weights": list(self.weights),
            "bias": self.bias,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearScorer":
        return cls(
            feature_list=tuple(d["feature_list"]),
            feature_means=tuple(d["feature_means"]),
            feature_sds=tuple(d["feature_sds"]),
            weights=tuple(d["weights"]),
            bias=float(d["bias"]),
        )


def _design_matrix(
    records: Sequence[SampleRecord], features: Sequence[str], means: Optional[np.ndarray] = None
) -> np.ndarray:
    """Raw feature matrix with NaN for missing values (imputed later)."""
    x = np.full((len(records), len(features)), np.nan)
    for i, rec in enumerate(records):
        for j, name in enumerate(features):
            v = feature_value(rec, name)
            if v is not None:
                x[i, j] = v
    if means is not None:
        nan = np.isnan(x)
        x[nan] = np.broadcast_to(means, x.shape)[nan]
    return x


def fit(
    train: Sequence[SampleRecord],
    features: Sequence[str] = DEFAULT_FEATURES,
    l2: float = 1e-3,
    iters: int = 500,
    lr: float = 1.0,
) -> LinearScorer:
    """Full-batch gradient descent on L2 logistic loss, zero init.

    Features are standardized with train-only mean/sd; missing values
    impute to the train mean (standardized zero). Zero-variance features
    are dropped. Backtracking halving keeps the loss non-increasing, so
    the fit is deterministic for a given input.
    """
    y = np.array([r.y_final for r in train], dtype=float)
    if np.any(np.isnan(y)):
        raise FitError("training rows must carry y_final")
    if y.min() == y.max():
        raise FitError("training set has a single class")

    x_raw = _design_matrix(train, features)
    present = np.sum(~np.isnan(x_raw), axis=0)
    x_raw = x_raw[:, present >= 2]
    features = [f for f, n in zip(features, present) if n >= 2]
    means = np.nanmean(x_raw, axis=0)
    sds = np.nanstd(x_raw, axis=0, ddof=1)
    keep = sds > 0
    kept = [f for f, k in zip(features, keep) if k]
    means, sds = means[keep], sds[keep]
    x = x_raw[:, keep]
    nan = np.isnan(x)
    x[nan] = np.broadcast_to(means, x.shape)[nan]
    x = (x - means) / sds

    n = len(train)
    w = np.zeros(x.shape[1])
    b = 0.0

    def loss(w, b):
        z = x @ w + b
        # log(1 + e^z) - y z, stable form
        return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * np.dot(w, w))

    current = loss(w, b)
    step = lr
    for _ in range(iters):
        p = 1.0 / (1.0 + np.exp(-(x @ w + b)))
        grad_w = x.T @ (p - y) / n + l2 * w
        grad_b = float(np.mean(p - y))
        while True:
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            new = loss(w_new, b_new)
            if new <= current or step < 1e-12:
                break
            step *= 0.5
        if new > current:
            break
        w, b, current = w_new, b_new, new

    return LinearScorer(
        feature_list=tuple(kept),
        feature_means=tuple(float(v) for v in means),
        feature_sds=tuple(float(v) for v in sds),
        weights=tuple(float(v) for v in w),
        bias=float(b),
    )


def score(model: LinearScorer, record: SampleRecord) -> float:
    """logistic(bias + w . standardized features), missing -> train mean."""
    z = model.bias
    for name, mean, sd, w in zip(
        model.feature_list, model.feature_means, model.feature_sds, model.weights
    ):
        v = feature_value(record, name)
        if v is None:
            v = mean
        z += w * (v - mean) / sd
    return 1.0 / (1.0 + math.exp(-z))


def score_many(model: LinearScorer, records: Sequence[SampleRecord]) -> List[float]:
    means = np.asarray(model.feature_means)
    x = _design_matrix(records, model.feature_list, means=means)
    x = (x - means) / np.asarray(model.feature_sds)
    z = x @ np.asarray(model.weights) + model.bias
    return [float(v) for v in 1.0 / (1.0 + np.exp(-z))]
