// Structural diffs between interchange documents.  An empty list means
// agreement.  Ring tables are compared up to reordering: basis tokens as
// multisets, probe pairing data up to one simultaneous permutation of
// the value columns, so two exports of the same table in different
// enumeration orders come out clean.

import {
  encodePartition,
  MatrixDoc,
  parsePartition,
  ResultDoc,
  RingTableDoc,
} from "./documents";
import { rank, Rational } from "./rational";

function headerDiffs(a: ResultDoc, b: ResultDoc): string[] {
  const out: string[] = [];
  if (a.space[0] !== b.space[0] || a.space[1] !== b.space[1]) {
    out.push(`space: ${a.space} != ${b.space}`);
  }
  if (a.variant !== b.variant) out.push(`variant: ${a.variant} != ${b.variant}`);
  if (a.direction !== b.direction) {
    out.push(`direction: ${a.direction} != ${b.direction}`);
  }
  if (a.weights[0] !== b.weights[0] || a.weights[1] !== b.weights[1]) {
    out.push(`weights: ${a.weights[0]}..${a.weights[1]} != ${b.weights[0]}..${b.weights[1]}`);
  }
  return out;
}

function mapDiffs(kind: string, a: Map<string, number>, b: Map<string, number>): string[] {
  const out: string[] = [];
  const keys = [...new Set([...a.keys(), ...b.keys()])].sort();
  for (const key of keys) {
    const va = a.get(key);
    const vb = b.get(key);
    if (va !== vb) {
      const [q, r, lam] = key.split(" ");
      const tag = encodePartition(parsePartition(lam));
      out.push(`${kind} q=${q} r=${r} ${tag}: ${va ?? "absent"} != ${vb ?? "absent"}`);
    }
  }
  return out;
}

export function diffResults(ref: ResultDoc, got: ResultDoc): string[] {
  return [
    ...headerDiffs(ref, got),
    ...mapDiffs("sector", ref.sectors, got.sectors),
    ...mapDiffs("mult", ref.mults, got.mults),
  ];
}

function multisetDiff(label: string, a: string[], b: string[]): string[] {
  const count = new Map<string, number>();
  for (const x of a) count.set(x, (count.get(x) ?? 0) + 1);
  for (const x of b) count.set(x, (count.get(x) ?? 0) - 1);
  const out: string[] = [];
  for (const [x, c] of [...count.entries()].sort()) {
    if (c > 0) out.push(`${label} only in first: ${x}`);
    if (c < 0) out.push(`${label} only in second: ${x}`);
  }
  return out;
}

/** Value columns as signature strings, one per pairing column. */
function columnSignatures(doc: RingTableDoc): string[] {
  if (!doc.probes.length) return [];
  const width = doc.probes[0].values.length;
  const sigs: string[] = [];
  for (let col = 0; col < width; col++) {
    sigs.push(doc.probes.map((p) => p.values[col].toString()).join("|"));
  }
  return sigs;
}

export function diffRingTables(ref: RingTableDoc, got: RingTableDoc): string[] {
  const out: string[] = [];
  if (ref.space[0] !== got.space[0] || ref.space[1] !== got.space[1]) {
    out.push(`space: ${ref.space} != ${got.space}`);
  }
  if (ref.degree !== got.degree) out.push(`degree: ${ref.degree} != ${got.degree}`);
  if (ref.symmetry !== got.symmetry) {
    out.push(`symmetry: ${ref.symmetry} != ${got.symmetry}`);
  }
  if (ref.dimension !== got.dimension) {
    out.push(`dimension: ${ref.dimension} != ${got.dimension}`);
    return out; // pairing data is not comparable across dimensions
  }
  out.push(...multisetDiff("basis", ref.basis, got.basis));
  out.push(
    ...multisetDiff(
      "probe",
      ref.probes.map((p) => p.stratum),
      got.probes.map((p) => p.stratum),
    ),
  );
  if (out.length) return out;
  // align probe rows by stratum token, then demand one permutation of the
  // pairing columns that matches every aligned row at once
  const order = [...ref.probes.keys()].sort((i, j) =>
    ref.probes[i].stratum < ref.probes[j].stratum ? -1 : 1,
  );
  const byTok = new Map(got.probes.map((p) => [p.stratum, p] as const));
  const refAligned: RingTableDoc = {
    ...ref,
    probes: order.map((i) => ref.probes[i]),
  };
  const gotAligned: RingTableDoc = {
    ...got,
    probes: order.map((i) => byTok.get(ref.probes[i].stratum)!),
  };
  const diffs = multisetDiff(
    "pairing column",
    columnSignatures(refAligned),
    columnSignatures(gotAligned),
  );
  return diffs.length ? ["probe pairing data differs", ...diffs] : [];
}

/**
 * Internal consistency of one ring table: the basis has the stated size
 * and the probe pairing matrix certifies it (full rank, one probe per
 * dimension).  Returns problem descriptions, empty when sound.
 */
export function validateRingTable(doc: RingTableDoc): string[] {
  const out: string[] = [];
  if (doc.basis.length !== doc.dimension) {
    out.push(`basis lists ${doc.basis.length} strata, dimension says ${doc.dimension}`);
  }
  if (!doc.probes.length) return out;
  if (doc.probes.length !== doc.dimension) {
    out.push(`${doc.probes.length} probes for dimension ${doc.dimension}`);
  }
  const width = doc.probes[0].values.length;
  for (const p of doc.probes) {
    if (p.values.length !== width) {
      out.push(`probe ${p.stratum} has ${p.values.length} values, expected ${width}`);
      return out;
    }
  }
  const rk = rank(doc.probes.map((p) => p.values));
  if (rk !== doc.dimension) {
    out.push(`probe matrix has rank ${rk}, dimension says ${doc.dimension}`);
  }
  return out;
}

export function validateMatrixShape(
  doc: MatrixDoc,
  nrows: number,
  ncols: number,
): string[] {
  const out: string[] = [];
  if (doc.nrows !== nrows || doc.ncols !== ncols) {
    out.push(`shape ${doc.nrows}x${doc.ncols}, expected ${nrows}x${ncols}`);
  }
  const seen = new Set<string>();
  for (const e of doc.entries) {
    const key = `${e.row},${e.col}`;
    if (seen.has(key)) out.push(`duplicate entry at ${key}`);
    seen.add(key);
    if (e.value.isZero()) out.push(`explicit zero at ${key}`);
  }
  return out;
}

export { Rational };
