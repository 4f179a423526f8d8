import type { DriftSummary, RiskPoint, Thresholds, TopEvent, WhatIfResponse } from "./types.js";

export function riskUrl(plant: string, from?: string, to?: string): string {
  const params = new URLSearchParams({ plant });
  if (from) params.set("from", from);
  if (to) params.set("to", to);
  return `/api/risk?${params.toString()}`;
}

export function topkUrl(plant: string, k?: number): string {
  const params = new URLSearchParams({ plant });
  if (k !== undefined) params.set("k", String(k));
  return `/api/topk?${params.toString()}`;
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) throw new Error(`${url}: HTTP ${resp.status}`);
  return (await resp.json()) as T;
}

export const api = {
  plants: () => getJson<string[]>("/api/plants"),
  risk: (plant: string, from?: string, to?: string) =>
    getJson<RiskPoint[]>(riskUrl(plant, from, to)),
  thresholds: () => getJson<Thresholds>("/api/thresholds"),
  drift: () => getJson<DriftSummary>("/api/drift"),
  topk: (plant: string, k?: number) => getJson<TopEvent[]>(topkUrl(plant, k)),
  ranges: () => getJson<Record<string, Record<string, number>>>("/api/ranges"),

  whatif: async (body: {
    tau_watch?: number;
    tau_action?: number;
    r_watch?: number;
    r_action?: number;
  }): Promise<WhatIfResponse> => {
    const resp = await fetch("/api/whatif", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      const detail = await resp.json().catch(() => ({}));
      throw new Error(detail.detail ?? `what-if rejected (HTTP ${resp.status})`);
    }
    return (await resp.json()) as WhatIfResponse;
  },
};
