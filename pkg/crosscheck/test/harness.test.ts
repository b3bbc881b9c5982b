// End-to-end: run the shipped case list against the engine.  Weight
// tables and recorded ring dimensions must come out ok; cases that need
// a live computer-algebra export may instead be skipped with a report
// when that package is absent here.  Nothing is ever allowed to
// mismatch.

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { parseCaseFile } from "../src/cases";
import { ecosystemStatus } from "../src/ecosystem";
import { CaseReport, runCases } from "../src/harness";

const ROOT = path.join(__dirname, "..");

describe("shipped case list", () => {
  const cases = parseCaseFile(fs.readFileSync(path.join(ROOT, "cases.txt"), "utf-8"));
  let reports: CaseReport[];
  const byLabel = (label: string) => {
    const rep = reports.find((r) => r.label === label);
    expect(rep, label).toBeDefined();
    return rep!;
  };

  beforeAll(() => {
    const workDir = fs.mkdtempSync(path.join(os.tmpdir(), "crosscheck-e2e-"));
    reports = runCases(cases, { workDir });
  });

  it("covers rings, weight tables, and gluing maps", () => {
    const kinds = new Set(cases.map((c) => c.kind));
    expect(kinds).toEqual(new Set(["ring", "weights", "pushforward", "pullback"]));
    expect(reports).toHaveLength(cases.length);
  });

  it("no case mismatches", () => {
    const bad = reports.filter((r) => r.status === "mismatch");
    expect(bad.map((r) => [r.label, ...r.detail])).toEqual([]);
  });

  it("recorded ring dimensions agree", () => {
    for (const label of ["ring 0 5 1", "ring 0 6 2", "ring 1 2 1", "ring 1 3 2"]) {
      expect(byLabel(label).status, label).toBe("ok");
    }
  });

  it("recorded weight tables agree", () => {
    for (const name of ["m1_1", "m1_2", "m1_3", "m2", "m2_1"]) {
      expect(byLabel(`weights ${name}`).status, name).toBe("ok");
    }
  });

  it("live-only cases either run or skip with a report", () => {
    const eco = ecosystemStatus();
    const liveOnly = ["ring 2 2 1", "ring 2 3 2", "pushforward 1+1 n=1", "pullback 1+1 n=1"];
    for (const label of liveOnly) {
      const rep = byLabel(label);
      if (eco.available) {
        expect(rep.status, label).toBe("ok");
      } else {
        expect(rep.status, label).toBe("skip");
        expect(rep.detail.join(" "), label).toContain("admcycles");
      }
    }
  });
});
