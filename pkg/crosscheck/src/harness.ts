// One runner per case kind.  A case ends in one of three states: ok
// (reference obtained and the engine output matches), mismatch (with
// the diff lines), or skip (reference unavailable here, with a report
// saying why).  Skips happen exactly when a live computer-algebra
// export would be needed and the package is absent.
//
// Ring tables from the live exporter use their own stratum labels, so
// cross-package comparison is dimension plus each side's probe
// certificate; token-level diffs are only meaningful between two
// exports of this engine and are covered by the round-trip checks.

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { caseLabel, CrossCheckCase, GluingCase, RingCase, WeightsCase } from "./cases";
import { parseMatrix, parseResult, parseRingTable } from "./documents";
import { diffResults, validateRingTable } from "./diff";
import { ecosystemStatus, exportLive } from "./ecosystem";
import {
  computeTable,
  exportRing,
  packageRoot,
  roundtripThroughEngine,
  verifyWithEngine,
} from "./primary";

export interface CaseReport {
  label: string;
  status: "ok" | "mismatch" | "skip";
  detail: string[];
}

export interface HarnessOptions {
  workDir?: string;
  cacheDir?: string;
}

interface Ctx {
  workDir: string;
  cacheDir: string;
  refDir: string;
}

function makeCtx(opts: HarnessOptions): Ctx {
  const workDir = opts.workDir ?? fs.mkdtempSync(path.join(os.tmpdir(), "crosscheck-"));
  const cacheDir = opts.cacheDir ?? path.join(workDir, "cache");
  fs.mkdirSync(workDir, { recursive: true });
  fs.mkdirSync(cacheDir, { recursive: true });
  return { workDir, cacheDir, refDir: path.join(packageRoot(), "reference") };
}

function writeWork(ctx: Ctx, name: string, text: string): string {
  const p = path.join(ctx.workDir, name);
  fs.writeFileSync(p, text);
  return p;
}

/** Byte-stable through the engine's own parser, per exported document. */
function roundtripErrors(
  ctx: Ctx,
  kind: "result" | "ringtable" | "matrix",
  name: string,
  text: string,
): string[] {
  const p = writeWork(ctx, name, text);
  const back = roundtripThroughEngine(kind, p);
  return back === text ? [] : [`${name}: engine parser round-trip altered the document`];
}

function runRingCase(ctx: Ctx, c: RingCase): CaseReport {
  const label = caseLabel(c);
  const gotText = exportRing(c.g, c.n, c.r, ctx.workDir);
  const got = parseRingTable(gotText);
  const detail: string[] = [];
  detail.push(...validateRingTable(got).map((d) => `engine export: ${d}`));
  detail.push(...roundtripErrors(ctx, "ringtable", `got_ring_${c.g}_${c.n}_${c.r}.txt`, gotText));

  const eco = ecosystemStatus();
  if (eco.available) {
    const refText = exportLive(["ring", String(c.g), String(c.n), String(c.r)]);
    const ref = parseRingTable(refText);
    detail.push(...validateRingTable(ref).map((d) => `reference export: ${d}`));
    // the live side orders things its own way, so ask for parser
    // idempotence instead of byte identity
    const p = writeWork(ctx, `ref_ring_${c.g}_${c.n}_${c.r}.txt`, refText);
    const once = roundtripThroughEngine("ringtable", p);
    const q = writeWork(ctx, `ref_ring_${c.g}_${c.n}_${c.r}_rt.txt`, once);
    if (roundtripThroughEngine("ringtable", q) !== once) {
      detail.push("reference export: engine parser round-trip is not idempotent");
    }
    if (ref.dimension !== got.dimension) {
      detail.push(`dimension: reference ${ref.dimension} != engine ${got.dimension}`);
    }
    return detail.length
      ? { label, status: "mismatch", detail }
      : { label, status: "ok", detail: [`dimension ${got.dimension} (live ${eco.report})`] };
  }

  const recorded = JSON.parse(
    fs.readFileSync(path.join(ctx.refDir, "ring_dims.json"), "utf-8"),
  ) as Record<string, number | null>;
  const key = `${c.g} ${c.n} ${c.r}`;
  const want = recorded[key];
  if (want === null || want === undefined) {
    return {
      label,
      status: "skip",
      detail: [`no recorded dimension for ${key}; ${eco.report}`],
    };
  }
  if (got.dimension !== want) {
    detail.push(`dimension: recorded ${want} != engine ${got.dimension}`);
  }
  return detail.length
    ? { label, status: "mismatch", detail }
    : { label, status: "ok", detail: [`dimension ${want} (recorded)`] };
}

function runWeightsCase(ctx: Ctx, c: WeightsCase): CaseReport {
  const label = caseLabel(c);
  const index = JSON.parse(
    fs.readFileSync(path.join(ctx.refDir, "weight_tables.json"), "utf-8"),
  ) as Record<string, { document: string }>;
  const entry = index[c.name];
  if (!entry) {
    return { label, status: "skip", detail: [`no recorded table named ${c.name}`] };
  }
  const refPath = path.join(ctx.refDir, entry.document);
  const refText = fs.readFileSync(refPath, "utf-8");
  const detail: string[] = [];
  detail.push(...roundtripErrors(ctx, "result", `ref_${c.name}.txt`, refText));

  const gotText = computeTable(c, ctx.cacheDir, ctx.workDir);
  const gotPath = writeWork(ctx, `got_${c.name}.txt`, gotText);
  const diffs = diffResults(parseResult(refText), parseResult(gotText));
  detail.push(...diffs);

  // the engine's own verify subcommand must agree with our diff
  const code = verifyWithEngine(gotPath, refPath);
  if ((code === 0) !== (diffs.length === 0)) {
    detail.push(`engine verify exit ${code} disagrees with ${diffs.length} diff lines`);
  }
  return detail.length
    ? { label, status: "mismatch", detail }
    : { label, status: "ok", detail: [`${parseResult(refText).sectors.size} sectors agree`] };
}

function runGluingCase(ctx: Ctx, c: GluingCase): CaseReport {
  const label = caseLabel(c);
  const eco = ecosystemStatus();
  if (!eco.available) {
    return { label, status: "skip", detail: [`needs a live export; ${eco.report}`] };
  }
  const text = exportLive([c.kind, String(c.g1), String(c.g2), String(c.n)]);
  const doc = parseMatrix(text);
  const detail: string[] = [];
  if (!doc.entries.length) detail.push("gluing matrix is identically zero");
  detail.push(...roundtripErrors(ctx, "matrix", `${c.kind}_${c.g1}_${c.g2}_${c.n}.txt`, text));
  return detail.length
    ? { label, status: "mismatch", detail }
    : { label, status: "ok", detail: [`${doc.nrows}x${doc.ncols} matrix exported`] };
}

export function runCase(c: CrossCheckCase, opts: HarnessOptions = {}): CaseReport {
  const ctx = makeCtx(opts);
  switch (c.kind) {
    case "ring":
      return runRingCase(ctx, c);
    case "weights":
      return runWeightsCase(ctx, c);
    default:
      return runGluingCase(ctx, c);
  }
}

export function runCases(cases: CrossCheckCase[], opts: HarnessOptions = {}): CaseReport[] {
  // one shared context so engine runs reuse a cache across cases
  const ctx = makeCtx(opts);
  return cases.map((c) => {
    switch (c.kind) {
      case "ring":
        return runRingCase(ctx, c);
      case "weights":
        return runWeightsCase(ctx, c);
      default:
        return runGluingCase(ctx, c);
    }
  });
}
