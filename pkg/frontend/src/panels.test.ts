import { describe, expect, it } from "vitest";
import { renderDrift, renderMonthlyRates, renderTopEvents } from "./panels";
import type { TopEvent } from "./types";

describe("renderMonthlyRates", () => {
  it("renders months in chronological order", () => {
    const html = renderMonthlyRates({
      "2025-03": { n: 10, rate_watch: 0.5, rate_action: 0.2 },
      "2025-01": { n: 8, rate_watch: 0.25, rate_action: 0.0 },
    });
    expect(html.indexOf("2025-01")).toBeLessThan(html.indexOf("2025-03"));
    expect(html).toContain("watch 50.0%");
    expect(html).toContain("action 20.0%");
    expect(html).toContain("n=10");
  });

  it("handles an empty rate map", () => {
    expect(renderMonthlyRates({})).toContain("No scored months");
  });
});

describe("renderTopEvents", () => {
  const ev: TopEvent = {
    plant_id: "A",
    timestamp: "2025-06-07",
    ops_risk: 0.912,
    hab_prob: 0.88,
    det_mean: 0.7,
    chlor_a: null,
    state: "ACTION",
  };

  it("renders one row per event with missing values dashed", () => {
    const html = renderTopEvents([ev, { ...ev, timestamp: "2025-06-10", state: "WATCH" }]);
    expect(html.match(/<tr>/g)).toHaveLength(3); // header + 2 rows
    expect(html).toContain("0.912");
    expect(html).toContain("–");
    expect(html).toContain("WATCH");
  });

  it("escapes markup in field values", () => {
    const html = renderTopEvents([{ ...ev, state: "<script>" }]);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("handles no events", () => {
    expect(renderTopEvents([])).toContain("No scored events");
  });
});

describe("renderDrift", () => {
  it("labels severity from PSI", () => {
    expect(renderDrift("A", 0.02, 0.05)).toContain("stable");
    expect(renderDrift("A", 0.15, 0.2)).toContain("moderate shift");
    expect(renderDrift("A", 0.9, 0.5)).toContain("major shift");
  });

  it("shows both statistics", () => {
    const html = renderDrift("B", 0.1234, 0.4567);
    expect(html).toContain("0.1234");
    expect(html).toContain("0.4567");
    expect(html).toContain("B");
  });
});
