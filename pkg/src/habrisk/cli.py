"""Command-line entry points for every pipeline stage plus the API server."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import date
from pathlib import Path

import numpy as np

from . import __version__
from .drift import drift_report
from .ingest import load_table, ranges_to_dict, summarize_ranges
from .labeling import MiningConfig, mine_labels
from .opsrisk import NormStats, OpsRiskConfig, ThresholdSet, calibrate_thresholds, fit_norm_stats, score_record
from .pipeline import RunConfig, run_pipeline, write_json
from .records import CSV_COLUMNS, record_to_row
from .splits import group_safe_folds, temporal_folds
from .synth import SynthConfig, write_synthetic_csv


def _read_ops_csv(path: str):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for key in ("hab_prob", "ops_risk"):
            if key in r:
                r[key] = float(r[key]) if r[key] != "" else None
    return rows


def cmd_synth(args) -> int:
    cfg = SynthConfig(seed=args.seed, prevalence=args.prevalence)
    n = write_synthetic_csv(args.out, cfg)
    print(f"wrote {n} rows to {args.out}")
    return 0


def cmd_ingest(args) -> int:
    records = load_table(args.inp)
    write_json(Path(args.ranges_out), ranges_to_dict(summarize_ranges(records)))
    print(f"{len(records)} records; ranges written to {args.ranges_out}")
    return 0


def cmd_label_mine(args) -> int:
    records = load_table(args.inp)
    cfg = MiningConfig(z_hi=args.z_hi, min_quality=args.min_quality)
    labeled = mine_labels(records, cfg)
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(CSV_COLUMNS))
        writer.writeheader()
        writer.writerows(record_to_row(r) for r in labeled)
    n_pos = sum(1 for r in labeled if r.y_final == 1)
    print(f"labeled {len(labeled)} rows ({n_pos} positive) -> {args.out}")
    return 0


def cmd_split(args) -> int:
    records = load_table(args.inp)
    if args.mode == "group":
        a = group_safe_folds(records, args.k, seed=args.seed)
        payload = {"mode": a.mode, "k": a.k, "fold_of": list(a.fold_of)}
    else:
        cutoffs = [date.fromisoformat(c) for c in args.cutoffs]
        pairs = temporal_folds(records, cutoffs)
        payload = {
            "mode": "temporal",
            "cutoffs": [c.isoformat() for c in cutoffs],
            "pairs": [{"train": tr, "test": te} for tr, te in pairs],
        }
    write_json(Path(args.out), payload)
    print(f"split written to {args.out}")
    return 0


def cmd_train_baseline(args) -> int:
    from .baseline import fit

    records = load_table(args.inp)
    if args.folds is not None:
        folds = json.loads(Path(args.folds).read_text())
        records = [r for i, r in enumerate(records) if folds["fold_of"][i] != args.fold]
    model = fit(records, l2=args.l2, iters=args.iters)
    write_json(Path(args.out), model.to_dict())
    print(f"model ({len(model.feature_list)} features) -> {args.out}")
    return 0


def cmd_fit_stats(args) -> int:
    records = load_table(args.inp)
    stats = fit_norm_stats(records)
    write_json(Path(args.out), stats.to_dict())
    print(f"normalization stats -> {args.out}")
    return 0


def cmd_ops_risk(args) -> int:
    records = load_table(args.inp)
    stats = NormStats.from_dict(json.loads(Path(args.stats).read_text()))
    cfg = OpsRiskConfig()
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["plant_id", "timestamp", "hab_prob", "oci", "coverage", "oci_adj", "season_adj", "blend", "discount", "ops_risk", "used_fallback"]
        )
        for rec in records:
            row = score_record(rec, stats, cfg)
            fmt = lambda v: "" if v is None else f"{v:.10g}"
            writer.writerow(
                [
                    rec.plant_id,
                    rec.timestamp.isoformat(),
                    fmt(rec.hab_prob),
                    fmt(row.oci),
                    fmt(row.coverage),
                    fmt(row.oci_adj),
                    fmt(row.season_adj),
                    fmt(row.blend),
                    fmt(row.discount),
                    fmt(row.ops_risk),
                    int(row.used_fallback),
                ]
            )
    print(f"operational scores -> {args.out}")
    return 0


def cmd_calibrate(args) -> int:
    rows = _read_ops_csv(args.pool)
    hab = [r["hab_prob"] for r in rows if r.get("hab_prob") is not None]
    ops = [r["ops_risk"] for r in rows if r.get("ops_risk") is not None]
    thr = calibrate_thresholds(hab, ops)
    write_json(Path(args.out), thr.to_dict())
    print(f"thresholds ({thr.source}) -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    from .metrics import auprc, auroc, confusion_at, pr_points, prevalence, reliability_curve, roc_points, select_threshold_min_recall

    rows = list(csv.DictReader(open(args.scores, newline="")))
    pairs = [
        (float(r[args.score_col]), int(float(r[args.label_col])))
        for r in rows
        if r.get(args.score_col, "") != "" and r.get(args.label_col, "") != ""
    ]
    scores = [s for s, _ in pairs]
    labels = [y for _, y in pairs]
    tau = select_threshold_min_recall(scores, labels, args.min_recall)
    conf = confusion_at(scores, labels, tau)
    report = {
        "auroc": auroc(scores, labels),
        "auprc": auprc(scores, labels),
        "prevalence": prevalence(labels),
        "threshold": tau,
        "min_recall": args.min_recall,
        "confusion": {"tp": conf.tp, "fp": conf.fp, "tn": conf.tn, "fn": conf.fn},
        "precision": conf.precision,
        "recall": conf.recall,
        "reliability_bins": [vars(b) for b in reliability_curve(scores, labels)],
        "roc_points": [[p[0], p[1], None if abs(p[2]) == float("inf") else p[2]] for p in roc_points(scores, labels)],
        "pr_points": [list(p) for p in pr_points(scores, labels)],
    }
    write_json(Path(args.out), report)
    if args.svg_dir:
        _render_svgs(report, Path(args.svg_dir))
    print(f"auroc={report['auroc']:.4f} auprc={report['auprc']:.4f} -> {args.out}")
    return 0


def _render_svgs(report: dict, out_dir: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir.mkdir(parents=True, exist_ok=True)
    roc = np.array([[p[0], p[1]] for p in report["roc_points"]])
    fig, ax = plt.subplots()
    ax.plot(roc[:, 0], roc[:, 1])
    ax.plot([0, 1], [0, 1], ls="--", c="gray")
    ax.set(xlabel="FPR", ylabel="TPR", title=f"ROC (AUROC={report['auroc']:.3f})")
    fig.savefig(out_dir / "roc.svg")
    plt.close(fig)

    pr = np.array([[p[0], p[1]] for p in report["pr_points"]])
    fig, ax = plt.subplots()
    ax.plot(pr[:, 0], pr[:, 1])
    ax.axhline(report["prevalence"], ls="--", c="gray")
    ax.set(xlabel="recall", ylabel="precision", title=f"PR (AUPRC={report['auprc']:.3f})")
    fig.savefig(out_dir / "pr.svg")
    plt.close(fig)

    bins = [b for b in report["reliability_bins"] if b["n"] > 0]
    fig, ax = plt.subplots()
    ax.plot([b["mean_pred"] for b in bins], [b["frac_pos"] for b in bins], marker="o")
    ax.plot([0, 1], [0, 1], ls="--", c="gray")
    ax.set(xlabel="mean predicted", ylabel="empirical positive fraction", title="Reliability")
    fig.savefig(out_dir / "reliability.svg")
    plt.close(fig)


def cmd_drift(args) -> int:
    ref = _read_ops_csv(args.ref)
    cur = _read_ops_csv(args.cur)
    thr = ThresholdSet.from_dict(json.loads(Path(args.thresholds).read_text()))
    write_json(Path(args.out), drift_report(ref, cur, thr, k=args.k))
    print(f"drift report -> {args.out}")
    return 0


def cmd_indices(args) -> int:
    from .indices import ChipBands, chip_summaries

    sidecar = json.loads(Path(str(args.chips) + ".json").read_text())
    shape = sidecar["shape"]  # [n_chips, n_bands, h, w]
    bands = sidecar["bands"]
    wavelengths = tuple(sidecar.get("wavelengths", [665.0, 842.0, 1610.0]))
    data = np.fromfile(args.chips, dtype="<f4").reshape(shape)
    with open(args.out, "w", newline="") as fh:
        writer = None
        for i in range(shape[0]):
            grids = {name: data[i, j].astype(float) for j, name in enumerate(bands)}
            chip = ChipBands(
                green=grids["green"],
                red=grids["red"],
                nir=grids["nir"],
                swir=grids["swir"],
                valid_mask=grids["valid_mask"] > 0.5,
            )
            summary = {"chip": i, **chip_summaries(chip, wavelengths)}
            if writer is None:
                writer = csv.DictWriter(fh, fieldnames=list(summary))
                writer.writeheader()
            writer.writerow({k: ("" if v is None else v) for k, v in summary.items()})
    print(f"chip summaries -> {args.out}")
    return 0


def cmd_run(args) -> int:
    if args.config:
        cfg = RunConfig.from_file(args.config, input_csv=args.input, out_dir=args.out, seed=args.seed)
    else:
        if not (args.input and args.out):
            print("run: need --config or both --input and --out", file=sys.stderr)
            return 2
        cfg = RunConfig(input_csv=args.input, out_dir=args.out, seed=args.seed if args.seed is not None else 17)
    manifest = run_pipeline(cfg)
    print(f"run complete; {len(manifest.artifacts)} artifacts in {cfg.out_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.artifacts, frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="habrisk", description="HAB operational risk pipeline")
    p.add_argument("--version", action="version", version=f"habrisk {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate the deterministic synthetic table")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=17)
    s.add_argument("--prevalence", type=float, default=0.22)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("ingest", help="validate a table and export the range report")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--ranges-out", required=True)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("label-mine", help="mine weak labels and merge with trusted")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--z-hi", type=float, default=2.0)
    s.add_argument("--min-quality", type=int, default=2)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_label_mine)

    s = sub.add_parser("split", help="build group-safe or temporal folds")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--mode", choices=["group", "temporal"], required=True)
    s.add_argument("--k", type=int, default=5)
    s.add_argument("--seed", type=int, default=17)
    s.add_argument("--cutoffs", nargs="*", default=["2024-12-31"])
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("train-baseline", help="fit the reference fusion scorer")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--folds", default=None)
    s.add_argument("--fold", type=int, default=0, help="held-out fold when --folds is given")
    s.add_argument("--l2", type=float, default=1e-3)
    s.add_argument("--iters", type=int, default=300)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_baseline)

    s = sub.add_parser("fit-stats", help="fit driver normalization stats on a reference table")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_fit_stats)

    s = sub.add_parser("ops-risk", help="score a table with the operational risk index")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--stats", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ops_risk)

    s = sub.add_parser("calibrate", help="exceedance-rate threshold calibration")
    s.add_argument("--pool", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("evaluate", help="discrimination / threshold / calibration report")
    s.add_argument("--scores", required=True)
    s.add_argument("--score-col", default="hab_prob")
    s.add_argument("--label-col", default="y_final")
    s.add_argument("--min-recall", type=float, default=0.60)
    s.add_argument("--out", required=True)
    s.add_argument("--svg-dir", default=None)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("drift", help="PSI/KS drift, monthly alert rates, top-k events")
    s.add_argument("--ref", required=True)
    s.add_argument("--cur", required=True)
    s.add_argument("--thresholds", required=True)
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_drift)

    s = sub.add_parser("indices", help="summarize spectral indices over chip binaries")
    s.add_argument("--chips", required=True, help="float32-LE binary; JSON sidecar at <chips>.json")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_indices)

    s = sub.add_parser("run", help="full pipeline run")
    s.add_argument("--config", default=None)
    s.add_argument("--input", default=None)
    s.add_argument("--out", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("serve", help="serve the ops console API over run artifacts")
    s.add_argument("--artifacts", default=None)
    s.add_argument("--frontend", default=None, help="static console build to mount at /")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8080)
    s.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
