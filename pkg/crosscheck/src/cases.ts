// Case list parsing.  A case file is line oriented: blank lines and
// "#" comments are ignored, every other line is a kind followed by its
// parameters, documented at the top of cases.txt.

export type CaseKind = "ring" | "weights" | "pushforward" | "pullback";

export interface RingCase {
  kind: "ring";
  g: number;
  n: number;
  r: number;
}

export interface WeightsCase {
  kind: "weights";
  name: string;
  g: number;
  n: number;
  variant: string;
  direction: string;
}

export interface GluingCase {
  kind: "pushforward" | "pullback";
  g1: number;
  g2: number;
  n: number;
}

export type CrossCheckCase = RingCase | WeightsCase | GluingCase;

export function caseLabel(c: CrossCheckCase): string {
  switch (c.kind) {
    case "ring":
      return `ring ${c.g} ${c.n} ${c.r}`;
    case "weights":
      return `weights ${c.name}`;
    default:
      return `${c.kind} ${c.g1}+${c.g2} n=${c.n}`;
  }
}

function asInt(tok: string, line: string): number {
  const v = Number(tok);
  if (!Number.isInteger(v) || v < 0) throw new Error(`bad integer ${tok} in case ${line}`);
  return v;
}

export function parseCaseLine(line: string): CrossCheckCase {
  const toks = line.trim().split(/\s+/);
  const kind = toks[0];
  if (kind === "ring" && toks.length === 4) {
    return { kind, g: asInt(toks[1], line), n: asInt(toks[2], line), r: asInt(toks[3], line) };
  }
  if (kind === "weights" && toks.length === 6) {
    return {
      kind,
      name: toks[1],
      g: asInt(toks[2], line),
      n: asInt(toks[3], line),
      variant: toks[4],
      direction: toks[5],
    };
  }
  if ((kind === "pushforward" || kind === "pullback") && toks.length === 4) {
    return { kind, g1: asInt(toks[1], line), g2: asInt(toks[2], line), n: asInt(toks[3], line) };
  }
  throw new Error(`unrecognized case line: ${line}`);
}

export function parseCaseFile(text: string): CrossCheckCase[] {
  const out: CrossCheckCase[] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line || line.startsWith("#")) continue;
    out.push(parseCaseLine(line));
  }
  return out;
}
