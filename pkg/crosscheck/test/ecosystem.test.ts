import { describe, expect, it } from "vitest";

import { ecosystemStatus, resetEcosystemProbe } from "../src/ecosystem";

describe("ecosystem probe", () => {
  it("reports availability either way", () => {
    resetEcosystemProbe();
    const status = ecosystemStatus();
    expect(status.report).toContain("admcycles");
    if (!status.available) {
      // the skip report must say what was missing
      expect(status.report).toMatch(/not importable/);
    }
  });

  it("is cached across calls", () => {
    expect(ecosystemStatus()).toBe(ecosystemStatus());
  });
});
