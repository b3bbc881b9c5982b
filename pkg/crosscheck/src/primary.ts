// Bridge to the engine under test.  Everything goes through its public
// surface: the command line for computing tables and exporting ring
// bases, and its document readers (via the round-trip adapter script)
// for parse fidelity.  Nothing here touches engine internals.

import { execFileSync, spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as path from "node:path";

export const PYTHON = process.env.CROSSCHECK_PYTHON ?? "python3";

export function packageRoot(): string {
  const env = process.env.CROSSCHECK_ROOT;
  if (env) return env;
  for (const cand of [process.cwd(), path.join(process.cwd(), "crosscheck")]) {
    const pj = path.join(cand, "package.json");
    if (fs.existsSync(pj)) {
      try {
        if (JSON.parse(fs.readFileSync(pj, "utf-8")).name === "crosscheck") {
          return cand;
        }
      } catch {
        // fall through to the next candidate
      }
    }
  }
  throw new Error("cannot locate the crosscheck package root; set CROSSCHECK_ROOT");
}

function run(args: string[], timeoutMs = 900_000): string {
  return execFileSync(PYTHON, args, {
    encoding: "utf-8",
    timeout: timeoutMs,
    maxBuffer: 64 * 1024 * 1024,
  });
}

export interface WeightsParams {
  g: number;
  n: number;
  variant: string;
  direction: string;
}

/** Compute a weight table with the engine CLI; returns the document text. */
export function computeTable(p: WeightsParams, cacheDir: string, workDir: string): string {
  const out = path.join(workDir, `m${p.g}_${p.n}_${p.variant}_${p.direction}.txt`);
  run([
    "-m", "wss.cli", "compute",
    "-g", String(p.g), "-n", String(p.n),
    "--variant", p.variant, "--direction", p.direction,
    "--workers", "2", "--cache-dir", cacheDir, "--out", out,
  ]);
  return fs.readFileSync(out, "utf-8");
}

/** Export a ring basis with the engine CLI; returns the document text. */
export function exportRing(g: number, n: number, r: number, workDir: string): string {
  const out = path.join(workDir, `ring_${g}_${n}_${r}.txt`);
  run(["-m", "wss.cli", "ring", "-g", String(g), "-n", String(n), "-r", String(r), "--out", out]);
  return fs.readFileSync(out, "utf-8");
}

/** Exit code of the engine's own verify subcommand on two documents. */
export function verifyWithEngine(gotPath: string, refPath: string): number {
  const res = spawnSync(PYTHON, ["-m", "wss.cli", "verify", gotPath, refPath], {
    encoding: "utf-8",
  });
  return res.status ?? -1;
}

/**
 * Parse and re-serialize a document with the engine's own readers.
 * Byte equality with the input is the round-trip invariant every
 * exported document must satisfy.
 */
export function roundtripThroughEngine(kind: "result" | "ringtable" | "matrix", docPath: string): string {
  const adapter = path.join(packageRoot(), "adapter", "roundtrip.py");
  return run([adapter, kind, docPath]);
}
