"""End-to-end orchestration: ingest, label mining, leakage-safe CV,
baseline fit, operational scoring, threshold calibration, evaluation,
drift, and the reproducible run manifest.

Leakage ordering is the load-bearing contract here: monthly label stats,
the fusion scorer, driver normalization stats, and the calibration pools
are all fitted strictly on the reference (pre-cutoff) partition, and
inside cross-validation strictly on the training folds.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .baseline import DEFAULT_FEATURES, LinearScorer, fit, score_many
from .drift import drift_report
from .ingest import load_table, ranges_to_dict, summarize_ranges
from .labeling import MiningConfig, fit_monthly_stats, mine_labels
from .metrics import (
    auprc,
    auroc,
    confusion_at,
    pr_points,
    prevalence,
    reliability_curve,
    roc_points,
    select_threshold_min_recall,
)
from .opsrisk import NormStats, OpsRiskConfig, ThresholdSet, alert_state, calibrate_thresholds, fit_norm_stats, score_record
from .records import SampleRecord
from .splits import group_safe_folds


class PipelineError(RuntimeError):
    """Stage failure with the stage name attached."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class RunConfig:
    input_csv: str
    out_dir: str
    seed: int = 17
    k_folds: int = 5
    reference_cutoff: str = "2024-12-31"
    min_recall: float = 0.60
    z_hi: float = 2.0
    min_quality: int = 2
    topk: int = 10
    psi_bins: int = 10
    l2: float = 1e-3
    iters: int = 300
    features: tuple = DEFAULT_FEATURES

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "features" in data:
            data["features"] = tuple(data["features"])
        return cls(**data)


@dataclass(frozen=True)
class RunManifest:
    config: dict
    input_digest: str
    artifacts: Dict[str, str]
    version: str
    created_utc: str


ARTIFACT_NAMES = (
    "ranges.json",
    "folds.json",
    "model.json",
    "stats.json",
    "thresholds.json",
    "ops.csv",
    "eval.json",
    "drift.json",
)

OPS_CSV_COLUMNS = (
    "plant_id",
    "timestamp",
    "group_key",
    "period",
    "chlor_a",
    "kd490",
    "nflh",
    "sst",
    "fai_mean",
    "ndwi_mean",
    "rednir_mean",
    "det_mean",
    "hab_prob",
    "oci",
    "coverage",
    "oci_adj",
    "season_adj",
    "blend",
    "discount",
    "ops_risk",
    "used_fallback",
    "state",
    "y_final",
)


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def cross_validate(
    reference: Sequence[SampleRecord], cfg: RunConfig
) -> dict:
    """Group-safe CV on the reference partition with per-fold fitting.

    Everything fitted (monthly label stats, scorer) sees training folds
    only; test labels are mined with train-fold stats.
    """
    mining = MiningConfig(z_hi=cfg.z_hi, min_quality=cfg.min_quality)
    assignment = group_safe_folds(reference, cfg.k_folds, seed=cfg.seed)
    pooled_scores: List[float] = []
    pooled_labels: List[int] = []
    per_fold = []
    for f in range(cfg.k_folds):
        train = [reference[i] for i in assignment.train_indices(f)]
        test = [reference[i] for i in assignment.test_indices(f)]
        stats = fit_monthly_stats(train)
        train_l = mine_labels(train, mining, monthly_stats=stats)
        test_l = mine_labels(test, mining, monthly_stats=stats)
        model = fit(train_l, features=cfg.features, l2=cfg.l2, iters=cfg.iters)
        scores = score_many(model, test_l)
        labels = [r.y_final for r in test_l]
        pooled_scores.extend(scores)
        pooled_labels.extend(labels)
        per_fold.append(
            {
                "fold": f,
                "n_train": len(train),
                "n_test": len(test),
                "auroc": auroc(scores, labels),
                "auprc": auprc(scores, labels),
            }
        )

    tau = select_threshold_min_recall(pooled_scores, pooled_labels, cfg.min_recall)
    conf = confusion_at(pooled_scores, pooled_labels, tau)
    bins = reliability_curve(pooled_scores, pooled_labels)
    return {
        "mode": "group_safe",
        "k": cfg.k_folds,
        "per_fold": per_fold,
        "pooled": {
            "auroc": auroc(pooled_scores, pooled_labels),
            "auprc": auprc(pooled_scores, pooled_labels),
            "prevalence": prevalence(pooled_labels),
            "threshold": tau,
            "min_recall": cfg.min_recall,
            "confusion": {"tp": conf.tp, "fp": conf.fp, "tn": conf.tn, "fn": conf.fn},
            "precision": conf.precision,
            "recall": conf.recall,
        },
        "reliability_bins": [
            {
                "bin_lo": b.bin_lo,
                "bin_hi": b.bin_hi,
                "mean_pred": b.mean_pred,
                "frac_pos": b.frac_pos,
                "n": b.n,
            }
            for b in bins
        ],
        "roc_points": [list(p) if p[2] not in (float("inf"), -float("inf")) else [p[0], p[1], None] for p in roc_points(pooled_scores, pooled_labels)],
        "pr_points": [list(p) for p in pr_points(pooled_scores, pooled_labels)],
    }


def run_pipeline(cfg: RunConfig) -> RunManifest:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    input_path = Path(cfg.input_csv)

    try:
        records = load_table(input_path)
    except Exception as exc:
        raise PipelineError("ingest", str(exc)) from exc

    write_json(out / "ranges.json", ranges_to_dict(summarize_ranges(records)))

    cutoff = date.fromisoformat(cfg.reference_cutoff)
    reference = [r for r in records if r.timestamp <= cutoff]
    current = [r for r in records if r.timestamp > cutoff]
    if not reference:
        raise PipelineError("split", "no records at or before the reference cutoff")

    try:
        assignment = group_safe_folds(reference, cfg.k_folds, seed=cfg.seed)
    except ValueError as exc:
        raise PipelineError("split", str(exc)) from exc
    write_json(
        out / "folds.json",
        {"mode": assignment.mode, "k": assignment.k, "fold_of": list(assignment.fold_of)},
    )

    try:
        eval_report = cross_validate(reference, cfg)
    except ValueError as exc:
        raise PipelineError("evaluate", str(exc)) from exc
    write_json(out / "eval.json", eval_report)

    # Final fit on the full reference partition only.
    mining = MiningConfig(z_hi=cfg.z_hi, min_quality=cfg.min_quality)
    label_stats = fit_monthly_stats(reference)
    reference_l = mine_labels(reference, mining, monthly_stats=label_stats)
    current_l = mine_labels(current, mining, monthly_stats=label_stats)
    all_l = reference_l + current_l
    try:
        model = fit(reference_l, features=cfg.features, l2=cfg.l2, iters=cfg.iters)
    except ValueError as exc:
        raise PipelineError("train-baseline", str(exc)) from exc
    write_json(out / "model.json", model.to_dict())

    ops_cfg = OpsRiskConfig()
    norm_stats = fit_norm_stats(reference_l, ops_cfg)
    write_json(
        out / "stats.json",
        {
            "norm_stats": norm_stats.to_dict(),
            "label_monthly_stats": {f"{d}|{m}": list(v) for (d, m), v in sorted(label_stats.items())},
            "mining": {"z_hi": mining.z_hi, "min_quality": mining.min_quality},
        },
    )

    hab_probs = score_many(model, all_l)
    ops_rows = []
    for rec, hp in zip(all_l, hab_probs):
        row = score_record(rec, norm_stats, ops_cfg, hab_prob=hp)
        ops_rows.append((rec, hp, row))

    ref_n = len(reference_l)
    hab_pool = [hp for (_, hp, _) in ops_rows[:ref_n]]
    ops_pool = [r.ops_risk for (_, _, r) in ops_rows[:ref_n] if r.ops_risk is not None]
    thresholds = calibrate_thresholds(hab_pool, ops_pool, ops_cfg)
    write_json(out / "thresholds.json", thresholds.to_dict())

    table = []
    for rec, hp, row in ops_rows:
        state = alert_state(row.ops_risk, thresholds).name if row.ops_risk is not None else ""
        table.append(
            {
                "plant_id": rec.plant_id,
                "timestamp": rec.timestamp.isoformat(),
                "group_key": rec.group_key,
                "period": "reference" if rec.timestamp <= cutoff else "current",
                "chlor_a": _fmt(rec.chlor_a),
                "kd490": _fmt(rec.kd490),
                "nflh": _fmt(rec.nflh),
                "sst": _fmt(rec.sst),
                "fai_mean": _fmt(rec.fai_mean),
                "ndwi_mean": _fmt(rec.ndwi_mean),
                "rednir_mean": _fmt(rec.rednir_mean),
                "det_mean": _fmt(rec.det_mean),
                "hab_prob": _fmt(hp),
                "oci": _fmt(row.oci),
                "coverage": _fmt(row.coverage),
                "oci_adj": _fmt(row.oci_adj),
                "season_adj": _fmt(row.season_adj),
                "blend": _fmt(row.blend),
                "discount": _fmt(row.discount),
                "ops_risk": _fmt(row.ops_risk),
                "used_fallback": _fmt(row.used_fallback),
                "state": state,
                "y_final": _fmt(rec.y_final),
            }
        )
    with (out / "ops.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(OPS_CSV_COLUMNS))
        writer.writeheader()
        writer.writerows(table)

    ref_rows = [_drift_row(t) for t in table if t["period"] == "reference"]
    cur_rows = [_drift_row(t) for t in table if t["period"] == "current"]
    write_json(
        out / "drift.json",
        drift_report(ref_rows, cur_rows, thresholds, k=cfg.topk, n_bins=cfg.psi_bins),
    )

    manifest = RunManifest(
        config=_config_snapshot(cfg, mining, ops_cfg),
        input_digest=_sha256(input_path),
        artifacts={name: str(out / name) for name in ARTIFACT_NAMES},
        version=__version__,
        created_utc=datetime.now(timezone.utc).isoformat(),
    )
    write_json(out / "manifest.json", asdict(manifest))
    return manifest


def _drift_row(t: dict) -> dict:
    return {
        "plant_id": t["plant_id"],
        "timestamp": t["timestamp"],
        "ops_risk": float(t["ops_risk"]) if t["ops_risk"] != "" else None,
        "hab_prob": float(t["hab_prob"]) if t["hab_prob"] != "" else None,
        "det_mean": float(t["det_mean"]) if t["det_mean"] != "" else None,
        "chlor_a": float(t["chlor_a"]) if t["chlor_a"] != "" else None,
        "state": t["state"],
    }


def _config_snapshot(cfg: RunConfig, mining: MiningConfig, ops_cfg: OpsRiskConfig) -> dict:
    snap = asdict(cfg)
    snap["features"] = list(cfg.features)
    snap["mining"] = {"z_hi": mining.z_hi, "min_quality": mining.min_quality}
    snap["ops_risk"] = {
        "driver_weights": ops_cfg.driver_weights,
        "blend_weights": list(ops_cfg.blend_weights),
        "discount_slope": ops_cfg.discount_slope,
        "discount_floor": ops_cfg.discount_floor,
        "sigmoid_slope": ops_cfg.sigmoid_slope,
        "z_clip": ops_cfg.z_clip,
        "norm_quantiles": list(ops_cfg.norm_quantiles),
        "base_watch": ops_cfg.base_watch,
        "base_action": ops_cfg.base_action,
        "min_gap": ops_cfg.min_gap,
        "watch_bounds": list(ops_cfg.watch_bounds),
        "action_bounds": list(ops_cfg.action_bounds),
    }
    return snap
