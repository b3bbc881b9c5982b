"""Text interchange formats.

Single-line tokens:
  graph     genera;legs;edges          0,1,2;2,2;0-2,1-2
  stratum   <graph> k:<kappa> p:<psi>  0,1;1,1;0-1 k:/1 p:l2^1,h0.1^2
            kappa lists vertex multisets dot-joined, "/"-separated;
            psi entries point^exponent with points l<m> or h<e>.<side>
  fraction  num or num/den
  lambda    parts dot-joined (3.1); "-" for the empty partition

Documents are line records "field: value" between a type header line and
"end".  Ring tables carry space/degree/symmetry/dimension, the basis
strata, and optional reduction probes "<stratum> :: c1,c2,...".  Result
documents carry space/variant/direction/weights plus one "sector:" line
per (q, r, lambda) and optional "mult:" lines per (q, r, partition), both
in sorted key order so equal runs emit identical bytes.  Matrix documents
list "row col value" triples.  Correlator lines are g;a1,a2,...;value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from wss.graphs import StableGraph
from wss.strata import DecoratedStratum, make_stratum


# -- tokens ----------------------------------------------------------------


def encode_fraction(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


def encode_graph(G: StableGraph) -> str:
    genera = ",".join(str(g) for g in G.genera)
    legs = ",".join(str(v) for v in G.legs)
    edges = ",".join(f"{a}-{b}" for a, b in G.edges)
    return f"{genera};{legs};{edges}"


def parse_graph(s: str) -> StableGraph:
    parts = s.strip().split(";")
    if len(parts) != 3:
        raise ValueError(f"malformed graph token {s!r}")
    genera = tuple(int(x) for x in parts[0].split(",") if x != "")
    legs = tuple(int(x) for x in parts[1].split(",") if x != "")
    edges = []
    for tok in parts[2].split(","):
        if tok == "":
            continue
        a, b = tok.split("-")
        edges.append((int(a), int(b)))
    return StableGraph(genera, legs, tuple(edges))


def _encode_point(p) -> str:
    if p[0] == "l":
        return f"l{p[1]}"
    return f"h{p[1]}.{p[2]}"


def _parse_point(s: str):
    if s.startswith("l"):
        return ("l", int(s[1:]))
    if s.startswith("h"):
        e, side = s[1:].split(".")
        return ("h", int(e), int(side))
    raise ValueError(f"malformed point {s!r}")


def encode_stratum(s: DecoratedStratum) -> str:
    kappa = "/".join(".".join(str(k) for k in ks) for ks in s.kappa)
    psi = ",".join(f"{_encode_point(p)}^{e}" for p, e in s.psi)
    return f"{encode_graph(s.graph)} k:{kappa} p:{psi}"


def parse_stratum(s: str) -> DecoratedStratum:
    fields = s.strip().split(" ")
    if len(fields) != 3 or not fields[1].startswith("k:") or not fields[2].startswith("p:"):
        raise ValueError(f"malformed stratum token {s!r}")
    G = parse_graph(fields[0])
    kappa = [
        tuple(int(k) for k in part.split(".") if k != "")
        for part in fields[1][2:].split("/")
    ]
    if len(kappa) != G.n_vertices:
        raise ValueError("kappa vertex count mismatch")
    psi = {}
    for tok in fields[2][2:].split(","):
        if tok == "":
            continue
        pt, e = tok.split("^")
        psi[_parse_point(pt)] = int(e)
    return make_stratum(G, kappa, psi)


def encode_partition(lam) -> str:
    return ".".join(str(p) for p in lam) if lam else "-"


def parse_partition(s: str) -> tuple:
    s = s.strip()
    if s == "-":
        return ()
    return tuple(int(p) for p in s.split("."))


# -- correlator lines ------------------------------------------------------


def encode_correlator(g: int, args, value) -> str:
    return f"{g};{','.join(str(a) for a in args)};{encode_fraction(value)}"


def parse_correlator(line: str):
    g, args, value = line.strip().split(";")
    return (
        int(g),
        tuple(int(a) for a in args.split(",") if a != ""),
        parse_fraction(value),
    )


# -- matrix documents ------------------------------------------------------


def matrix_document(rows, nrows: int, ncols: int) -> str:
    out = ["matrix", f"shape: {nrows} {ncols}"]
    for i, row in enumerate(rows):
        for c in sorted(row):
            if row[c]:
                out.append(f"{i} {c} {encode_fraction(row[c])}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_matrix(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "matrix" or lines[-1] != "end":
        raise ValueError("not a matrix document")
    if not lines[1].startswith("shape: "):
        raise ValueError("missing shape line")
    nrows, ncols = (int(x) for x in lines[1][7:].split())
    rows = [dict() for _ in range(nrows)]
    for ln in lines[2:-1]:
        i, c, v = ln.split()
        rows[int(i)][int(c)] = parse_fraction(v)
    return rows, nrows, ncols


# -- ring-table documents --------------------------------------------------


@dataclass
class RingTableDoc:
    space: tuple[int, int]
    degree: int
    symmetry: str
    dimension: int
    basis: list[DecoratedStratum]
    reduction_probe: list[tuple[DecoratedStratum, tuple[Fraction, ...]]] = field(
        default_factory=list
    )


def ring_table_document(doc: RingTableDoc) -> str:
    out = [
        "ringtable",
        f"space: {doc.space[0]} {doc.space[1]}",
        f"degree: {doc.degree}",
        f"symmetry: {doc.symmetry}",
        f"dimension: {doc.dimension}",
        "basis:",
    ]
    for s in doc.basis:
        out.append(f"  {encode_stratum(s)}")
    if doc.reduction_probe:
        out.append("reduction_probe:")
        for s, co in doc.reduction_probe:
            vec = ",".join(encode_fraction(c) for c in co)
            out.append(f"  {encode_stratum(s)} :: {vec}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_ring_table(text: str) -> RingTableDoc:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ringtable":
        raise ValueError("not a ring-table document")
    fields = {}
    basis: list[DecoratedStratum] = []
    probes: list[tuple[DecoratedStratum, tuple]] = []
    section = None
    for ln in lines[1:]:
        if not ln.strip():
            continue
        if ln.strip() == "end":
            section = "done"
            break
        if ln.startswith("  ") and section == "basis":
            basis.append(parse_stratum(ln))
            continue
        if ln.startswith("  ") and section == "reduction_probe":
            tok, vec = ln.split("::")
            probes.append(
                (
                    parse_stratum(tok),
                    tuple(parse_fraction(c) for c in vec.split(",") if c.strip()),
                )
            )
            continue
        key, _, value = ln.partition(":")
        key = key.strip()
        if key in ("basis", "reduction_probe"):
            section = key
            continue
        section = None
        fields[key] = value.strip()
    if section != "done":
        raise ValueError("unterminated ring-table document")
    g, n = (int(x) for x in fields["space"].split())
    return RingTableDoc(
        space=(g, n),
        degree=int(fields["degree"]),
        symmetry=fields["symmetry"],
        dimension=int(fields["dimension"]),
        basis=basis,
        reduction_probe=probes,
    )


# -- result documents ------------------------------------------------------


@dataclass
class ResultDoc:
    space: tuple[int, int]
    variant: str
    direction: str
    weights: tuple[int, int]  # inclusive bounds
    sectors: dict  # (q, r, lam) -> dim
    mults: dict = field(default_factory=dict)  # (q, r, partition) -> int
    notes: list = field(default_factory=list)

    def key(self) -> str:
        g, n = self.space
        lo, hi = self.weights
        return f"{g},{n},{self.variant},{self.direction},{lo}..{hi}"


def result_document(doc: ResultDoc) -> str:
    g, n = doc.space
    lo, hi = doc.weights
    out = [
        "result",
        f"space: {g} {n}",
        f"variant: {doc.variant}",
        f"direction: {doc.direction}",
        f"weights: {lo}..{hi}",
    ]
    for (q, r, lam), dim in sorted(doc.sectors.items()):
        out.append(f"sector: q={q} r={r} lambda={encode_partition(lam)} dim={dim}")
    for (q, r, mu), m in sorted(doc.mults.items()):
        out.append(f"mult: q={q} r={r} s={encode_partition(mu)} m={m}")
    for note in doc.notes:
        out.append(f"note: {note}")
    out.append("end")
    return "\n".join(out) + "\n"


def _parse_kv(value: str) -> dict:
    out = {}
    for tok in value.split():
        k, _, v = tok.partition("=")
        out[k] = v
    return out


def parse_result(text: str) -> ResultDoc:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "result":
        raise ValueError("not a result document")
    if lines[-1].strip() != "end":
        raise ValueError("unterminated result document")
    fields = {}
    sectors = {}
    mults = {}
    notes = []
    for ln in lines[1:-1]:
        key, _, value = ln.partition(":")
        key, value = key.strip(), value.strip()
        if key == "sector":
            kv = _parse_kv(value)
            sectors[(int(kv["q"]), int(kv["r"]), parse_partition(kv["lambda"]))] = int(
                kv["dim"]
            )
        elif key == "mult":
            kv = _parse_kv(value)
            mults[(int(kv["q"]), int(kv["r"]), parse_partition(kv["s"]))] = int(kv["m"])
        elif key == "note":
            notes.append(value)
        else:
            fields[key] = value
    g, n = (int(x) for x in fields["space"].split())
    lo, hi = (int(x) for x in fields["weights"].split(".."))
    return ResultDoc(
        space=(g, n),
        variant=fields["variant"],
        direction=fields["direction"],
        weights=(lo, hi),
        sectors=sectors,
        mults=mults,
        notes=notes,
    )


def diff_results(ref: ResultDoc, got: ResultDoc) -> list[str]:
    """Entrywise structural diff; empty means the documents agree."""
    out = []
    for name in ("space", "variant", "direction", "weights"):
        a, b = getattr(ref, name), getattr(got, name)
        if a != b:
            out.append(f"{name}: {a} != {b}")
    for kind, a, b in (("sector", ref.sectors, got.sectors), ("mult", ref.mults, got.mults)):
        for key in sorted(set(a) | set(b)):
            va, vb = a.get(key), b.get(key)
            if va != vb:
                q, r, lam = key
                out.append(
                    f"{kind} q={q} r={r} {encode_partition(lam)}: "
                    f"{'absent' if va is None else va} != "
                    f"{'absent' if vb is None else vb}"
                )
    return out
