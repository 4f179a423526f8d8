// Payload shapes of the read-only JSON API.

export type AlertStateName = "NORMAL" | "WATCH" | "ACTION";

export interface RiskPoint {
  t: string; // ISO date
  hab_prob: number | null;
  ops_risk: number | null;
  state: AlertStateName | null;
  period: "reference" | "current";
  chlor_a: number | null;
  det_mean: number | null;
  oci_adj: number | null;
  season_adj: number | null;
  used_fallback: boolean;
}

export interface Thresholds {
  tau_watch: number;
  tau_action: number;
  r_watch: number;
  r_action: number;
  source: string;
}

export interface MonthRates {
  n: number;
  rate_watch: number;
  rate_action: number;
}

export type MonthlyAlertRates = Record<string, Record<string, MonthRates>>;

export interface WhatIfResponse {
  thresholds: Thresholds;
  monthly_alert_rates: MonthlyAlertRates;
}

export interface DriftSummary {
  per_plant: Record<string, { psi: number; ks: number }>;
  pooled: { psi: number; ks: number } | null;
  monthly_alert_rates: MonthlyAlertRates;
  topk: Record<string, TopEvent[]>;
}

export interface TopEvent {
  plant_id: string;
  timestamp: string;
  ops_risk: number | null;
  hab_prob: number | null;
  det_mean: number | null;
  chlor_a: number | null;
  state: string;
}
