import { classify } from "./state.js";
import type { RiskPoint, Thresholds } from "./types.js";

// Pure SVG string rendering so chart geometry is unit-testable.

export const STATE_COLORS: Record<string, string> = {
  NORMAL: "#4d8a57",
  WATCH: "#d99a2b",
  ACTION: "#c43d3d",
};

export interface TimelineLayout {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_LAYOUT: TimelineLayout = {
  width: 900,
  height: 320,
  padLeft: 46,
  padRight: 14,
  padTop: 12,
  padBottom: 28,
};

function dayNumber(iso: string): number {
  return Date.parse(iso + "T00:00:00Z") / 86_400_000;
}

export function xScale(series: RiskPoint[], layout: TimelineLayout): (t: string) => number {
  const days = series.map((p) => dayNumber(p.t));
  const lo = Math.min(...days);
  const hi = Math.max(...days);
  const span = hi - lo || 1;
  const inner = layout.width - layout.padLeft - layout.padRight;
  return (t) => layout.padLeft + ((dayNumber(t) - lo) / span) * inner;
}

export function yScale(layout: TimelineLayout): (p: number) => number {
  const inner = layout.height - layout.padTop - layout.padBottom;
  return (p) => layout.padTop + (1 - p) * inner;
}

export function renderTimeline(
  series: RiskPoint[],
  thresholds: Thresholds,
  layout: TimelineLayout = DEFAULT_LAYOUT
): string {
  const scored = series.filter((p) => p.ops_risk !== null);
  if (scored.length === 0) {
    return `<svg class="timeline" viewBox="0 0 ${layout.width} ${layout.height}"><text class="empty-state" x="${layout.width / 2}" y="${layout.height / 2}" text-anchor="middle">No scored rows in the selected range</text></svg>`;
  }
  const x = xScale(scored, layout);
  const y = yScale(layout);
  const parts: string[] = [];
  parts.push(`<svg class="timeline" viewBox="0 0 ${layout.width} ${layout.height}">`);

  // threshold bands: WATCH zone and ACTION zone
  const yWatch = y(thresholds.tau_watch);
  const yAction = y(thresholds.tau_action);
  const xLeft = layout.padLeft;
  const bandWidth = layout.width - layout.padLeft - layout.padRight;
  parts.push(
    `<rect class="band-watch" x="${xLeft}" y="${yAction}" width="${bandWidth}" height="${yWatch - yAction}"/>`
  );
  parts.push(
    `<rect class="band-action" x="${xLeft}" y="${y(1)}" width="${bandWidth}" height="${yAction - y(1)}"/>`
  );
  parts.push(`<line class="thr-line" x1="${xLeft}" x2="${xLeft + bandWidth}" y1="${yWatch}" y2="${yWatch}"/>`);
  parts.push(`<line class="thr-line" x1="${xLeft}" x2="${xLeft + bandWidth}" y1="${yAction}" y2="${yAction}"/>`);

  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    parts.push(
      `<text class="axis" x="${layout.padLeft - 6}" y="${y(tick) + 4}" text-anchor="end">${tick.toFixed(2)}</text>`
    );
  }

  const line = scored
    .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.t).toFixed(1)},${y(p.ops_risk as number).toFixed(1)}`)
    .join(" ");
  parts.push(`<path class="risk-line" d="${line}"/>`);

  for (const p of scored) {
    const state = p.state ?? classify(p.ops_risk as number, thresholds);
    const hover = [
      `${p.t} ops_risk=${(p.ops_risk as number).toFixed(3)} [${state}]`,
      p.hab_prob !== null ? `hab_prob=${p.hab_prob.toFixed(3)}` : "hab_prob=n/a",
      p.det_mean !== null ? `det_mean=${p.det_mean.toFixed(3)}` : "det_mean=n/a",
      p.chlor_a !== null ? `chlor_a=${p.chlor_a.toFixed(3)}` : "chlor_a=n/a",
      `oci_adj=${p.oci_adj?.toFixed(3) ?? "n/a"} season_adj=${p.season_adj?.toFixed(3) ?? "n/a"}`,
      p.used_fallback ? "fallback: hab_prob only" : "",
    ]
      .filter(Boolean)
      .join("\n");
    parts.push(
      `<circle class="pt" data-state="${state}" cx="${x(p.t).toFixed(1)}" cy="${y(p.ops_risk as number).toFixed(1)}" r="2.5" fill="${STATE_COLORS[state]}"><title>${hover}</title></circle>`
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
