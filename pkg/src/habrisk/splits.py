"""Group-safe K-fold and forward temporal cross-validation assignments.

Group-safe folds keep every record sharing a scene/overpass key in one
fold; temporal folds train on earlier periods and test strictly later,
with an expanding training window.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from datetime import date
from typing import Dict, List, Sequence, Tuple

from .records import SampleRecord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: Tuple[int, ...]  # record index -> fold id
    mode: str
    k: int

    def test_indices(self, fold: int) -> List[int]:
        return [i for i, f in enumerate(self.fold_of) if f == fold]

    def train_indices(self, fold: int) -> List[int]:
        return [i for i, f in enumerate(self.fold_of) if f != fold]


def group_safe_folds(records: Sequence[SampleRecord], k: int, seed: int = 0) -> FoldAssignment:
    """Assign whole groups to folds, greedily balancing sample counts.

    Largest group first into the currently smallest fold (ties by fold
    id); the seed shuffles the order of equal-size groups, which is the
    only randomness.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    groups: Dict[str, List[int]] = {}
    for i, rec in enumerate(records):
        groups.setdefault(rec.group_key, []).append(i)
    if len(groups) < k:
        raise ValueError(f"need at least {k} distinct group keys, have {len(groups)}")

    keys = sorted(groups)
    random.Random(seed).shuffle(keys)
    keys.sort(key=lambda g: -len(groups[g]))  # stable: equal sizes keep shuffled order

    fold_sizes = [0] * k
    fold_of = [0] * len(records)
    for g in keys:
        target = min(range(k), key=lambda f: (fold_sizes[f], f))
        for i in groups[g]:
            fold_of[i] = target
        fold_sizes[target] += len(groups[g])
    return FoldAssignment(fold_of=tuple(fold_of), mode="group_safe", k=k)


def temporal_folds(
    records: Sequence[SampleRecord], cutoffs: Sequence[date]
) -> List[Tuple[List[int], List[int]]]:
    """Expanding-window train/test index pairs.

    For cutoff c_k: train = {t <= c_k}, test = {c_k < t <= c_{k+1}} (the
    final window is open-ended). Pairs with an empty side are skipped with
    a warning.
    """
    if list(cutoffs) != sorted(set(cutoffs)):
        raise ValueError("cutoffs must be strictly increasing")
    pairs = []
    for idx, c in enumerate(cutoffs):
        upper = cutoffs[idx + 1] if idx + 1 < len(cutoffs) else None
        train = [i for i, r in enumerate(records) if r.timestamp <= c]
        test = [
            i
            for i, r in enumerate(records)
            if r.timestamp > c and (upper is None or r.timestamp <= upper)
        ]
        if not train or not test:
            log.warning("temporal fold at cutoff %s skipped (train=%d, test=%d)", c, len(train), len(test))
            continue
        pairs.append((train, test))
    return pairs
