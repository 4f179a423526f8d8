import { STATE_COLORS } from "./timeline.js";
import type { MonthRates, TopEvent } from "./types.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const pct = (v: number) => `${(100 * v).toFixed(1)}%`;

/**
 * Horizontal bar chart of monthly WATCH-or-above and ACTION rates for
 * one plant. Months render in chronological order (keys are YYYY-MM).
 */
export function renderMonthlyRates(rates: Record<string, MonthRates>): string {
  const months = Object.keys(rates).sort();
  if (months.length === 0) {
    return `<p class="empty-state">No scored months in the monitoring window</p>`;
  }
  const rows = months
    .map((m) => {
      const r = rates[m];
      return (
        `<div class="rate-row" data-month="${m}">` +
        `<span class="rate-month">${m}</span>` +
        `<span class="rate-bar"><span class="bar watch" style="width:${pct(r.rate_watch)}"></span>` +
        `<span class="bar action" style="width:${pct(r.rate_action)}"></span></span>` +
        `<span class="rate-nums">watch ${pct(r.rate_watch)} / action ${pct(r.rate_action)} (n=${r.n})</span>` +
        `</div>`
      );
    })
    .join("");
  return `<div class="monthly-rates">${rows}</div>`;
}

/** Top scoring events table for the selected plant. */
export function renderTopEvents(events: TopEvent[]): string {
  if (events.length === 0) {
    return `<p class="empty-state">No scored events for this plant</p>`;
  }
  const fmt = (v: number | null) => (v === null ? "–" : v.toFixed(3));
  const body = events
    .map(
      (e) =>
        `<tr><td>${esc(e.timestamp)}</td>` +
        `<td>${fmt(e.ops_risk)}</td>` +
        `<td>${fmt(e.hab_prob)}</td>` +
        `<td>${fmt(e.det_mean)}</td>` +
        `<td>${fmt(e.chlor_a)}</td>` +
        `<td><span class="state-chip" style="background:${STATE_COLORS[e.state] ?? "#888"}">${esc(e.state)}</span></td></tr>`
    )
    .join("");
  return (
    `<table class="topk"><thead><tr>` +
    `<th>date</th><th>ops risk</th><th>hab prob</th><th>detector</th><th>chlor_a</th><th>state</th>` +
    `</tr></thead><tbody>${body}</tbody></table>`
  );
}

/** PSI/KS drift figures with a simple severity label. */
export function renderDrift(plant: string, psi: number, ks: number): string {
  const level = psi >= 0.25 ? "major shift" : psi >= 0.1 ? "moderate shift" : "stable";
  return (
    `<div class="drift-card" data-level="${level}">` +
    `<h3>${esc(plant)}</h3>` +
    `<dl><dt>PSI</dt><dd>${psi.toFixed(4)}</dd>` +
    `<dt>KS</dt><dd>${ks.toFixed(4)}</dd></dl>` +
    `<p class="drift-level">${level}</p></div>`
  );
}
