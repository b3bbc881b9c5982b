// Standalone entry point: run every case in a case-list file and print
// one status line each.  Exit 1 when any case mismatches; skips are
// reported but do not fail the run.

import * as fs from "node:fs";
import * as path from "node:path";

import { parseCaseFile } from "./cases";
import { runCases } from "./harness";
import { packageRoot } from "./primary";

function main(): number {
  const arg = process.argv[2] ?? "cases.txt";
  const caseFile = fs.existsSync(arg) ? arg : path.join(packageRoot(), arg);
  const cases = parseCaseFile(fs.readFileSync(caseFile, "utf-8"));
  console.log(`running ${cases.length} cases from ${caseFile}`);
  const reports = runCases(cases);
  let bad = 0;
  for (const rep of reports) {
    console.log(`${rep.status.padEnd(8)} ${rep.label}`);
    for (const line of rep.detail) console.log(`         ${line}`);
    if (rep.status === "mismatch") bad++;
  }
  const counts = {
    ok: reports.filter((r) => r.status === "ok").length,
    mismatch: bad,
    skip: reports.filter((r) => r.status === "skip").length,
  };
  console.log(`done: ${counts.ok} ok, ${counts.mismatch} mismatch, ${counts.skip} skipped`);
  return bad ? 1 : 0;
}

process.exit(main());
