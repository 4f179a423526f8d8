"""Read-only ops console API over a completed run's artifact directory.

The artifact snapshot is loaded once at startup and never mutated;
what-if recalibration is computed per request against the frozen
reference pools, so responses are pure functions of (snapshot, query).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, model_validator

from .drift import monthly_alert_rates
from .opsrisk import OpsRiskConfig, ThresholdSet, match_exceedance
from .pipeline import ARTIFACT_NAMES

ARTIFACTS_ENV = "REDNET_ARTIFACTS"


@dataclass(frozen=True)
class Snapshot:
    rows: List[dict]  # ops.csv rows with parsed numerics
    thresholds: ThresholdSet
    drift: dict
    ranges: dict
    eval_report: dict
    manifest: dict

    @property
    def plants(self) -> List[str]:
        return sorted({r["plant_id"] for r in self.rows})

    def reference_ops_pool(self) -> List[float]:
        return [
            r["ops_risk"]
            for r in self.rows
            if r["period"] == "reference" and r["ops_risk"] is not None
        ]

    def current_rows(self) -> List[dict]:
        return [r for r in self.rows if r["period"] == "current"]


def _parse_ops_row(raw: Dict[str, str]) -> dict:
    row = dict(raw)
    for key in (
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
    ):
        row[key] = float(raw[key]) if raw.get(key, "") != "" else None
    row["used_fallback"] = raw.get("used_fallback") == "1"
    return row


def load_snapshot(artifacts: str | Path) -> Snapshot:
    root = Path(artifacts)
    missing = [n for n in ARTIFACT_NAMES if not (root / n).exists()]
    if missing:
        raise FileNotFoundError(f"artifact directory {root} is missing: {', '.join(missing)}")
    with (root / "ops.csv").open(newline="") as fh:
        rows = [_parse_ops_row(r) for r in csv.DictReader(fh)]
    return Snapshot(
        rows=rows,
        thresholds=ThresholdSet.from_dict(json.loads((root / "thresholds.json").read_text())),
        drift=json.loads((root / "drift.json").read_text()),
        ranges=json.loads((root / "ranges.json").read_text()),
        eval_report=json.loads((root / "eval.json").read_text()),
        manifest=json.loads((root / "manifest.json").read_text()),
    )


class WhatIfRequest(BaseModel):
    """Explicit thresholds, or target exceedance rates to re-match."""

    tau_watch: Optional[float] = None
    tau_action: Optional[float] = None
    r_watch: Optional[float] = None
    r_action: Optional[float] = None

    @model_validator(mode="after")
    def _one_mode(self):
        explicit = self.tau_watch is not None and self.tau_action is not None
        rates = self.r_watch is not None and self.r_action is not None
        if explicit == rates:
            raise ValueError("provide either (tau_watch, tau_action) or (r_watch, r_action)")
        return self


def _whatif_thresholds(req: WhatIfRequest, snapshot: Snapshot, cfg: OpsRiskConfig) -> ThresholdSet:
    if req.tau_watch is not None:
        tw, ta = float(req.tau_watch), float(req.tau_action)
        rw = ra = 0.0
        source = "whatif_explicit"
    else:
        pool = snapshot.reference_ops_pool()
        if not pool:
            raise HTTPException(status_code=409, detail="no reference pool in snapshot")
        rw, ra = float(req.r_watch), float(req.r_action)
        tw = match_exceedance(pool, rw)
        ta = match_exceedance(pool, ra)
        tw = min(cfg.watch_bounds[1], max(cfg.watch_bounds[0], tw))
        ta = min(cfg.action_bounds[1], max(cfg.action_bounds[0], ta))
        source = "whatif_rates"
    if not (0.0 <= tw <= 1.0 and 0.0 <= ta <= 1.0):
        raise HTTPException(status_code=422, detail="thresholds must lie in [0, 1]")
    if ta - tw < cfg.min_gap:
        raise HTTPException(status_code=422, detail=f"threshold gap must be >= {cfg.min_gap}")
    return ThresholdSet(tau_watch=tw, tau_action=ta, r_watch=rw, r_action=ra, source=source)


def create_app(artifacts: Optional[str | Path] = None, frontend_dir: Optional[str | Path] = None) -> FastAPI:
    if artifacts is None:
        artifacts = os.environ.get(ARTIFACTS_ENV)
    if artifacts is None:
        raise ValueError(f"no artifact directory given and {ARTIFACTS_ENV} unset")
    snapshot = load_snapshot(artifacts)
    cfg = OpsRiskConfig()
    app = FastAPI(title="HAB ops console API")

    @app.get("/api/plants")
    def plants() -> List[str]:
        return snapshot.plants

    @app.get("/api/risk")
    def risk(
        plant: str,
        from_: Optional[str] = Query(default=None, alias="from"),
        to: Optional[str] = Query(default=None),
    ) -> List[dict]:
        if plant not in snapshot.plants:
            raise HTTPException(status_code=404, detail=f"unknown plant {plant!r}")
        out = []
        for r in snapshot.rows:
            if r["plant_id"] != plant:
                continue
            t = r["timestamp"]
            if from_ is not None and t < from_:
                continue
            if to is not None and t > to:
                continue
            out.append(
                {
                    "t": t,
                    "hab_prob": r["hab_prob"],
                    "ops_risk": r["ops_risk"],
                    "state": r["state"] or None,
                    "period": r["period"],
                    "chlor_a": r["chlor_a"],
                    "det_mean": r["det_mean"],
                    "oci_adj": r["oci_adj"],
                    "season_adj": r["season_adj"],
                    "used_fallback": r["used_fallback"],
                }
            )
        return out

    @app.get("/api/thresholds")
    def thresholds() -> dict:
        return snapshot.thresholds.to_dict()

    @app.post("/api/whatif")
    def whatif(req: WhatIfRequest) -> dict:
        thr = _whatif_thresholds(req, snapshot, cfg)
        rates = monthly_alert_rates(snapshot.current_rows(), thr)
        return {"thresholds": thr.to_dict(), "monthly_alert_rates": rates}

    @app.get("/api/drift")
    def drift(plant: Optional[str] = None) -> dict:
        if plant is None:
            return snapshot.drift
        per_plant = snapshot.drift.get("per_plant", {})
        if plant not in per_plant:
            raise HTTPException(status_code=404, detail=f"no drift entry for plant {plant!r}")
        return {
            "plant": plant,
            **per_plant[plant],
            "monthly_alert_rates": snapshot.drift["monthly_alert_rates"].get(plant, {}),
        }

    @app.get("/api/topk")
    def topk(plant: str, k: Optional[int] = None) -> List[dict]:
        events = snapshot.drift.get("topk", {}).get(plant)
        if events is None:
            raise HTTPException(status_code=404, detail=f"no events for plant {plant!r}")
        return events if k is None else events[: max(k, 0)]

    @app.get("/api/ranges")
    def ranges() -> dict:
        return snapshot.ranges

    @app.get("/api/eval")
    def eval_report() -> dict:
        return snapshot.eval_report

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="console")
    return app
