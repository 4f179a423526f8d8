"""Acceptance gate: one test per release criterion, each printing a
pass/fail line. Run with `pytest tests/test_acceptance.py -s` to see the
per-criterion report.
"""

import csv
import json
import time

import numpy as np
import pytest

from habrisk.drift import ks_distance, psi
from habrisk.metrics import auprc, auroc, confusion_at, reliability_curve, select_threshold_min_recall
from habrisk.opsrisk import (
    OpsRiskConfig,
    blend_and_discount,
    calibrate_thresholds,
    compute_oci,
    match_exceedance,
    season_adj,
)
from habrisk.pipeline import RunConfig, run_pipeline
from tests.test_metrics import brute_force_auroc, sweep_auprc

CFG = OpsRiskConfig()


def _report(name, ok=True):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok


def test_pooled_confusion_arithmetic():
    start = time.perf_counter()
    scores = [0.9] * (398 + 185) + [0.1] * (887 + 260)
    labels = [1] * 398 + [0] * 185 + [0] * 887 + [1] * 260
    c = confusion_at(scores, labels, 0.454)
    assert (c.tp, c.fp, c.tn, c.fn) == (398, 185, 887, 260)
    assert abs(c.precision - 0.6827) <= 0.0005
    assert abs(c.recall - 0.6049) <= 0.0005
    assert time.perf_counter() - start < 1.0
    _report("pooled-confusion arithmetic (precision 0.6827, recall 0.6049)")


def test_small_instance_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(123)
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        # coarse score grid so ties occur often
        scores = list(rng.choice([0.1, 0.2, 0.5, 0.5, 0.8, 0.9], size=n))
        labels = list(rng.integers(0, 2, size=n))
        if 0 < sum(labels) < n:
            assert auroc(scores, labels) == brute_force_auroc(scores, labels)
        if sum(labels) > 0:
            assert abs(auprc(scores, labels) - sweep_auprc(scores, labels)) < 1e-12
    assert time.perf_counter() - start < 10.0
    _report("small-instance AUROC/AUPRC oracle equivalence (1000 instances)")


def test_ops_risk_identities():
    # weights-sum-to-one fixed point
    row = blend_and_discount(0.6, 0.6, 0.6, 0.6, CFG)
    assert row.ops_risk == 0.6

    # coverage limit
    nothing = {d: None for d in CFG.driver_weights}
    assert compute_oci(nothing, CFG)[2] == 0.5
    assert season_adj(nothing, CFG) == 0.5

    # discount bounds over 1e5 random pairs
    rng = np.random.default_rng(9)
    for hab, det in rng.uniform(size=(100_000, 2)):
        d = blend_and_discount(hab, det, 0.5, 0.5, CFG).discount
        assert 0.75 <= d <= 1.0

    # worked example
    assert blend_and_discount(1.0, 0.0, 0.5, 0.5, CFG).ops_risk == pytest.approx(0.4715, abs=1e-9)
    _report("ops-risk identities (fixed point, coverage limit, discount bounds, worked example)")


def test_threshold_calibration_tightness():
    rng = np.random.default_rng(31)
    for _ in range(500):
        hab = list(rng.uniform(size=200))
        ops = list(rng.uniform(size=200))
        n = len(ops)
        r_watch = sum(1 for v in hab if v >= CFG.base_watch) / n
        tau_raw = match_exceedance(ops, r_watch)  # pre-clamp matched value
        frac = sum(1 for v in ops if v >= tau_raw) / n
        assert frac <= r_watch
        below = [v for v in ops if v < tau_raw]
        if below:
            assert sum(1 for v in ops if v >= max(below)) / n > r_watch
        thr = calibrate_thresholds(hab, ops, CFG)
        assert thr.tau_action - thr.tau_watch >= CFG.min_gap - 1e-12

    thr = calibrate_thresholds([], [], CFG)
    assert (thr.tau_watch, thr.tau_action, thr.source) == (0.55, 0.6238688594, "base_fallback")
    _report("threshold calibration tightness, base fallback, and gap (500 pools)")


def test_drift_oracle():
    rng = np.random.default_rng(7)
    a = list(rng.uniform(size=400))
    assert psi(a, a) == 0.0
    assert ks_distance(a, a) == 0.0

    ref = [0.25] * 5 + [0.75] * 5
    cur = [0.25] * 9 + [0.75] * 1
    assert psi(ref, cur, n_bins=2) == pytest.approx(0.8789, abs=1e-4)

    # offsetting shifts: pooled PSI strictly below the per-plant maximum
    ref_a = rng.normal(0.3, 0.05, 800).clip(0, 1)
    ref_b = rng.normal(0.7, 0.05, 800).clip(0, 1)
    per_plant = [psi(ref_a, ref_a + 0.25), psi(ref_b, ref_b - 0.25)]
    pooled = psi(np.concatenate([ref_a, ref_b]), np.concatenate([ref_a + 0.25, ref_b - 0.25]))
    assert pooled < max(per_plant)

    # synthetic regime fixture: per-plant PSI in [1, 6], KS in [0.4, 0.7]
    rng = np.random.default_rng(7)
    for delta in (1.1, 1.3, 1.5, 1.7):
        plant_ref = rng.normal(0.40, 0.10, 1600).clip(0, 1)
        plant_cur = rng.normal(0.40 + 0.10 * delta, 0.10, 500).clip(0, 1)
        assert 1.0 <= psi(plant_ref, plant_cur) <= 6.0
        assert 0.4 <= ks_distance(plant_ref, plant_cur) <= 0.7
    _report("drift oracle (psi/ks identities, hand case, pooling, shift regime)")


def test_non_leaky_harness(tmp_path, synth_csv, run_dir):
    from tests.test_pipeline import _perturbed_copy
    from habrisk.ingest import load_table
    from habrisk.splits import group_safe_folds, temporal_folds
    from datetime import date

    perturbed = tmp_path / "perturbed.csv"
    _perturbed_copy(synth_csv, perturbed)
    out = tmp_path / "run"
    run_pipeline(RunConfig(input_csv=str(perturbed), out_dir=str(out), seed=17))
    for name in ("model.json", "stats.json", "thresholds.json"):
        assert (out / name).read_bytes() == (run_dir / name).read_bytes(), name

    records = load_table(synth_csv)
    assignment = group_safe_folds(records, 5, seed=17)
    by_group = {}
    for i, r in enumerate(records):
        by_group.setdefault(r.group_key, set()).add(assignment.fold_of[i])
    assert all(len(v) == 1 for v in by_group.values())

    for train, test in temporal_folds(records, [date(2022, 12, 31), date(2024, 12, 31)]):
        assert max(records[i].timestamp for i in train) < min(records[i].timestamp for i in test)
    _report("non-leaky harness (byte-stable fitted params, group/temporal invariants)")


def test_end_to_end_determinism_and_quality(tmp_path, synth_csv, run_dir):
    start = time.perf_counter()
    out = tmp_path / "repeat"
    run_pipeline(RunConfig(input_csv=str(synth_csv), out_dir=str(out), seed=17))
    elapsed = time.perf_counter() - start
    for name in ("eval.json", "drift.json", "thresholds.json"):
        assert (out / name).read_bytes() == (run_dir / name).read_bytes(), name
    assert elapsed < 60.0

    report = json.loads((run_dir / "eval.json").read_text())
    assert report["pooled"]["auroc"] >= 0.80
    assert report["pooled"]["recall"] >= 0.60
    _report(
        f"end-to-end determinism; runtime {elapsed:.1f}s; "
        f"AUROC {report['pooled']['auroc']:.3f} >= 0.80; recall >= 0.60"
    )


def test_reliability_measurement():
    rng = np.random.default_rng(42)
    scores = rng.uniform(size=100_000)
    labels = (rng.uniform(size=100_000) < scores).astype(int)
    worst = max(
        abs(b.mean_pred - b.frac_pos)
        for b in reliability_curve(scores, labels)
        if b.n > 1000
    )
    assert worst < 0.02
    _report(f"reliability measurement (max bin gap {worst:.4f} < 0.02)")
