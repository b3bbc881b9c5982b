// Readers and writers for the line-oriented interchange documents the
// engine emits: result tables, ring tables, and sparse matrices.  Basis
// strata are carried as opaque tokens; this side never evaluates them,
// it only lines documents up against each other.

import { Rational } from "./rational";

export type Partition = number[];

export function encodePartition(lam: Partition): string {
  return lam.length ? lam.join(".") : "-";
}

export function parsePartition(s: string): Partition {
  const t = s.trim();
  if (t === "-") return [];
  return t.split(".").map((p) => {
    const v = Number(p);
    if (!Number.isInteger(v) || v < 1) throw new Error(`bad partition part ${p}`);
    return v;
  });
}

export interface SectorKey {
  q: number;
  r: number;
  lam: Partition;
}

export function sectorToken(k: SectorKey): string {
  return `${k.q} ${k.r} ${encodePartition(k.lam)}`;
}

export interface ResultDoc {
  space: [number, number];
  variant: string;
  direction: string;
  weights: [number, number];
  sectors: Map<string, number>; // sectorToken -> dim
  mults: Map<string, number>; // sectorToken (partition = schur label) -> count
  notes: string[];
}

function splitKv(value: string): Record<string, string> {
  const out: Record<string, string> = {};
  for (const tok of value.split(/\s+/)) {
    if (!tok) continue;
    const eq = tok.indexOf("=");
    if (eq < 0) throw new Error(`bad key=value token ${tok}`);
    out[tok.slice(0, eq)] = tok.slice(eq + 1);
  }
  return out;
}

function intField(kv: Record<string, string>, key: string): number {
  const v = Number(kv[key]);
  if (!Number.isInteger(v)) throw new Error(`missing integer field ${key}`);
  return v;
}

export function parseResult(text: string): ResultDoc {
  const lines = text.split("\n").filter((ln) => ln.trim() !== "");
  if (!lines.length || lines[0].trim() !== "result") {
    throw new Error("not a result document");
  }
  if (lines[lines.length - 1].trim() !== "end") {
    throw new Error("unterminated result document");
  }
  const fields: Record<string, string> = {};
  const doc: ResultDoc = {
    space: [0, 0],
    variant: "",
    direction: "",
    weights: [0, 0],
    sectors: new Map(),
    mults: new Map(),
    notes: [],
  };
  for (const ln of lines.slice(1, -1)) {
    const colon = ln.indexOf(":");
    if (colon < 0) throw new Error(`bad line ${ln}`);
    const key = ln.slice(0, colon).trim();
    const value = ln.slice(colon + 1).trim();
    if (key === "sector") {
      const kv = splitKv(value);
      const lam = parsePartition(kv["lambda"]);
      doc.sectors.set(
        sectorToken({ q: intField(kv, "q"), r: intField(kv, "r"), lam }),
        intField(kv, "dim"),
      );
    } else if (key === "mult") {
      const kv = splitKv(value);
      const mu = parsePartition(kv["s"]);
      doc.mults.set(
        sectorToken({ q: intField(kv, "q"), r: intField(kv, "r"), lam: mu }),
        intField(kv, "m"),
      );
    } else if (key === "note") {
      doc.notes.push(value);
    } else {
      fields[key] = value;
    }
  }
  const [g, n] = fields["space"].split(/\s+/).map(Number);
  const [lo, hi] = fields["weights"].split("..").map(Number);
  for (const v of [g, n, lo, hi]) {
    if (!Number.isInteger(v)) throw new Error("malformed header field");
  }
  doc.space = [g, n];
  doc.variant = fields["variant"];
  doc.direction = fields["direction"];
  doc.weights = [lo, hi];
  return doc;
}

function sectorSortKey(token: string): [number, number, Partition] {
  const sp = token.split(" ");
  return [Number(sp[0]), Number(sp[1]), parsePartition(sp[2])];
}

function compareKeys(a: string, b: string): number {
  const [qa, ra, la] = sectorSortKey(a);
  const [qb, rb, lb] = sectorSortKey(b);
  if (qa !== qb) return qa - qb;
  if (ra !== rb) return ra - rb;
  for (let i = 0; i < Math.max(la.length, lb.length); i++) {
    const x = la[i] ?? -1;
    const y = lb[i] ?? -1;
    if (x !== y) return x - y;
  }
  return 0;
}

export function serializeResult(doc: ResultDoc): string {
  const out = [
    "result",
    `space: ${doc.space[0]} ${doc.space[1]}`,
    `variant: ${doc.variant}`,
    `direction: ${doc.direction}`,
    `weights: ${doc.weights[0]}..${doc.weights[1]}`,
  ];
  for (const key of [...doc.sectors.keys()].sort(compareKeys)) {
    const [q, r, lam] = sectorSortKey(key);
    out.push(`sector: q=${q} r=${r} lambda=${encodePartition(lam)} dim=${doc.sectors.get(key)}`);
  }
  for (const key of [...doc.mults.keys()].sort(compareKeys)) {
    const [q, r, mu] = sectorSortKey(key);
    out.push(`mult: q=${q} r=${r} s=${encodePartition(mu)} m=${doc.mults.get(key)}`);
  }
  for (const note of doc.notes) {
    out.push(`note: ${note}`);
  }
  out.push("end");
  return out.join("\n") + "\n";
}

// -- ring tables -----------------------------------------------------------

export interface RingTableDoc {
  space: [number, number];
  degree: number;
  symmetry: string;
  dimension: number;
  basis: string[]; // opaque stratum tokens
  probes: { stratum: string; values: Rational[] }[];
}

const STRATUM_SHAPE = /^\S+ k:\S* p:\S*$/;

export function parseRingTable(text: string): RingTableDoc {
  const lines = text.split("\n");
  if (!lines.length || lines[0].trim() !== "ringtable") {
    throw new Error("not a ring-table document");
  }
  const fields: Record<string, string> = {};
  const basis: string[] = [];
  const probes: { stratum: string; values: Rational[] }[] = [];
  let section: string | null = null;
  let done = false;
  for (const ln of lines.slice(1)) {
    if (ln.trim() === "") continue;
    if (ln.trim() === "end") {
      done = true;
      break;
    }
    if (ln.startsWith("  ") && section === "basis") {
      const tok = ln.trim();
      if (!STRATUM_SHAPE.test(tok)) throw new Error(`malformed stratum token ${tok}`);
      basis.push(tok);
      continue;
    }
    if (ln.startsWith("  ") && section === "reduction_probe") {
      const sep = ln.indexOf("::");
      if (sep < 0) throw new Error(`malformed probe line ${ln}`);
      const tok = ln.slice(0, sep).trim();
      if (!STRATUM_SHAPE.test(tok)) throw new Error(`malformed stratum token ${tok}`);
      const values = ln
        .slice(sep + 2)
        .split(",")
        .filter((c) => c.trim() !== "")
        .map((c) => Rational.parse(c));
      probes.push({ stratum: tok, values });
      continue;
    }
    const colon = ln.indexOf(":");
    const key = ln.slice(0, colon).trim();
    if (key === "basis" || key === "reduction_probe") {
      section = key;
      continue;
    }
    section = null;
    fields[key] = ln.slice(colon + 1).trim();
  }
  if (!done) throw new Error("unterminated ring-table document");
  const [g, n] = fields["space"].split(/\s+/).map(Number);
  return {
    space: [g, n],
    degree: Number(fields["degree"]),
    symmetry: fields["symmetry"],
    dimension: Number(fields["dimension"]),
    basis,
    probes,
  };
}

export function serializeRingTable(doc: RingTableDoc): string {
  const out = [
    "ringtable",
    `space: ${doc.space[0]} ${doc.space[1]}`,
    `degree: ${doc.degree}`,
    `symmetry: ${doc.symmetry}`,
    `dimension: ${doc.dimension}`,
    "basis:",
  ];
  for (const tok of doc.basis) out.push(`  ${tok}`);
  if (doc.probes.length) {
    out.push("reduction_probe:");
    for (const p of doc.probes) {
      out.push(`  ${p.stratum} :: ${p.values.map((v) => v.toString()).join(",")}`);
    }
  }
  out.push("end");
  return out.join("\n") + "\n";
}

// -- sparse matrices -------------------------------------------------------

export interface MatrixDoc {
  nrows: number;
  ncols: number;
  entries: { row: number; col: number; value: Rational }[];
}

export function parseMatrix(text: string): MatrixDoc {
  const lines = text.split("\n").filter((ln) => ln.trim() !== "");
  if (!lines.length || lines[0] !== "matrix" || lines[lines.length - 1] !== "end") {
    throw new Error("not a matrix document");
  }
  if (!lines[1].startsWith("shape: ")) throw new Error("missing shape line");
  const [nrows, ncols] = lines[1].slice(7).split(/\s+/).map(Number);
  const entries = lines.slice(2, -1).map((ln) => {
    const [i, c, v] = ln.trim().split(/\s+/);
    return { row: Number(i), col: Number(c), value: Rational.parse(v) };
  });
  for (const e of entries) {
    if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols) {
      throw new Error("matrix entry out of shape");
    }
  }
  return { nrows, ncols, entries };
}
