// Live reference exports come from the admcycles package when it is
// importable.  This environment usually will not have it (it needs a
// SageMath substrate), so availability is probed once and cases that
// need a live export are skipped with a report instead of failing.

import { spawnSync } from "node:child_process";
import * as path from "node:path";

import { packageRoot, PYTHON } from "./primary";

export interface EcosystemStatus {
  available: boolean;
  report: string;
}

let cached: EcosystemStatus | null = null;

export function ecosystemStatus(): EcosystemStatus {
  if (cached) return cached;
  const probe = spawnSync(
    PYTHON,
    ["-c", "import admcycles; print(getattr(admcycles, '__version__', 'unknown'))"],
    { encoding: "utf-8", timeout: 120_000 },
  );
  if (probe.status === 0) {
    cached = { available: true, report: `admcycles ${probe.stdout.trim()}` };
  } else {
    const reason = (probe.stderr ?? "").trim().split("\n").pop() ?? "import failed";
    cached = { available: false, report: `admcycles not importable (${reason})` };
  }
  return cached;
}

/**
 * Run the live exporter for one case; returns the interchange document.
 * Callers must check availability first.
 */
export function exportLive(args: string[]): string {
  const adapter = path.join(packageRoot(), "adapter", "export_admcycles.py");
  const res = spawnSync(PYTHON, [adapter, ...args], {
    encoding: "utf-8",
    timeout: 900_000,
    maxBuffer: 64 * 1024 * 1024,
  });
  if (res.status !== 0) {
    throw new Error(`live export failed: ${(res.stderr ?? "").trim()}`);
  }
  return res.stdout;
}

// test hook
export function resetEcosystemProbe(): void {
  cached = null;
}
