"""Discrimination, thresholded, and calibration-measurement metrics.

AUROC uses the rank (Mann-Whitney) formulation with ties counted half;
AUPRC is step-integrated average precision with equal scores collapsed
into one threshold group, which preserves the no-skill-equals-prevalence
baseline under imbalance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if (self.tp + self.fp) else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if (self.tp + self.fn) else 0.0


@dataclass(frozen=True)
class ReliabilityBin:
    bin_lo: float
    bin_hi: float
    mean_pred: Optional[float]
    frac_pos: Optional[float]
    n: int


def _as_arrays(scores, labels):
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equal-length 1-D sequences")
    return s, y


def auroc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Probability a random positive outranks a random negative, ties 1/2."""
    s, y = _as_arrays(scores, labels)
    npos = int(y.sum())
    nneg = len(y) - npos
    if npos == 0 or nneg == 0:
        raise ValueError("auroc needs both classes present")
    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s))
    sorted_s = s[order]
    # average ranks within tie groups (1-based)
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_s[j + 1] == sorted_s[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    u = ranks[y == 1].sum() - npos * (npos + 1) / 2.0
    return float(u / (npos * nneg))


def auprc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Average precision over descending-score threshold groups."""
    s, y = _as_arrays(scores, labels)
    npos = int(y.sum())
    if npos == 0:
        raise ValueError("auprc needs at least one positive")
    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    ap = 0.0
    tp = 0
    seen = 0
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and s[j + 1] == s[i]:
            j += 1
        group_pos = int(y[i : j + 1].sum())
        tp += group_pos
        seen = j + 1
        if group_pos:
            ap += group_pos * (tp / seen)
        i = j + 1
    return float(ap / npos)


def confusion_at(scores: Sequence[float], labels: Sequence[int], tau: float) -> Confusion:
    """Counts with prediction positive iff score >= tau."""
    s, y = _as_arrays(scores, labels)
    pred = s >= tau
    return Confusion(
        tp=int(np.sum(pred & (y == 1))),
        fp=int(np.sum(pred & (y == 0))),
        tn=int(np.sum(~pred & (y == 0))),
        fn=int(np.sum(~pred & (y == 1))),
    )


def select_threshold_min_recall(
    scores: Sequence[float], labels: Sequence[int], min_recall: float = 0.60
) -> float:
    """Threshold maximizing precision subject to recall >= min_recall.

    Candidates are the unique score values; precision ties resolve to the
    higher threshold.
    """
    s, y = _as_arrays(scores, labels)
    best = None
    for tau in sorted(set(s.tolist()), reverse=True):
        c = confusion_at(s, y, tau)
        if c.recall >= min_recall:
            if best is None or c.precision > best[1]:
                best = (tau, c.precision)
    if best is None:
        raise ValueError(f"min recall {min_recall} unattainable")
    return float(best[0])


def roc_points(scores: Sequence[float], labels: Sequence[int]) -> List[Tuple[float, float, float]]:
    """(fpr, tpr, threshold) over unique thresholds, with (0,0) and (1,1) ends."""
    s, y = _as_arrays(scores, labels)
    npos = int(y.sum())
    nneg = len(y) - npos
    pts = [(0.0, 0.0, float("inf"))]
    for tau in sorted(set(s.tolist()), reverse=True):
        c = confusion_at(s, y, tau)
        pts.append((c.fp / nneg if nneg else 0.0, c.tp / npos if npos else 0.0, tau))
    if pts[-1][:2] != (1.0, 1.0):
        pts.append((1.0, 1.0, -float("inf")))
    return pts


def pr_points(scores: Sequence[float], labels: Sequence[int]) -> List[Tuple[float, float, float]]:
    """(recall, precision, threshold) over unique thresholds, descending tau."""
    s, y = _as_arrays(scores, labels)
    pts = []
    for tau in sorted(set(s.tolist()), reverse=True):
        c = confusion_at(s, y, tau)
        pts.append((c.recall, c.precision, tau))
    return pts


def reliability_curve(
    scores: Sequence[float], labels: Sequence[int], n_bins: int = 10
) -> List[ReliabilityBin]:
    """Equal-width bins on [0, 1]; the last bin includes 1.0 itself.

    Empty bins are emitted with n=0 so the curve always has n_bins rows.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    s, y = _as_arrays(scores, labels)
    idx = np.minimum((s * n_bins).astype(int), n_bins - 1)
    bins = []
    for b in range(n_bins):
        sel = idx == b
        n = int(sel.sum())
        lo, hi = b / n_bins, (b + 1) / n_bins
        if n == 0:
            bins.append(ReliabilityBin(lo, hi, None, None, 0))
        else:
            bins.append(
                ReliabilityBin(lo, hi, float(s[sel].mean()), float(y[sel].mean()), n)
            )
    return bins


def prevalence(labels: Sequence[int]) -> float:
    y = np.asarray(labels, dtype=int)
    return float(y.mean()) if len(y) else 0.0
