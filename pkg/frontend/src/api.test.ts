import { describe, expect, it } from "vitest";
import { riskUrl, topkUrl } from "./api";

describe("riskUrl", () => {
  it("always includes the plant", () => {
    expect(riskUrl("A")).toBe("/api/risk?plant=A");
  });

  it("adds optional bounds with the server's parameter names", () => {
    expect(riskUrl("A", "2025-01-01", "2025-06-30")).toBe(
      "/api/risk?plant=A&from=2025-01-01&to=2025-06-30"
    );
    expect(riskUrl("A", undefined, "2025-06-30")).toBe("/api/risk?plant=A&to=2025-06-30");
  });

  it("percent-encodes plant ids", () => {
    expect(riskUrl("plant 1")).toBe("/api/risk?plant=plant+1");
  });
});

describe("topkUrl", () => {
  it("omits k unless given", () => {
    expect(topkUrl("B")).toBe("/api/topk?plant=B");
    expect(topkUrl("B", 5)).toBe("/api/topk?plant=B&k=5");
  });
});
