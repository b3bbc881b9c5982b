"""Live reference exports from the admcycles package.

Usage:
  export_admcycles.py ring <g> <n> <r>
  export_admcycles.py pushforward <g1> <g2> <n>
  export_admcycles.py pullback <g1> <g2> <n>

Prints one interchange document on stdout.  Needs admcycles (and its
SageMath substrate); the harness probes for it first and skips these
cases with a report when it is absent, so this script may assume the
import works.

Only stable, documented admcycles entry points are used: tautgens,
class multiplication, evaluate, StableGraph gluing maps.  Dimensions
and pairings are taken from the package; this side never recomputes
them.  Generator translation maps each admcycles decorated stratum to
the interchange token grammar so the exported documents parse with the
engine's own readers.
"""

import sys
from fractions import Fraction


def _rank(rows):
    """Row rank by exact elimination; rows are lists of Fractions."""
    m = [list(r) for r in rows]
    rk = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rk][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk


def _greedy_independent(rows):
    """Indices of a maximal independent subset, first-come order."""
    picked = []
    for i, row in enumerate(rows):
        if _rank([rows[j] for j in picked] + [row]) > len(picked):
            picked.append(i)
    return picked


def _fraction_token(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _stratum_token(tc):
    """Interchange token for a one-term tautological class."""
    terms = list(tc.terms)
    if len(terms) != 1:
        raise RuntimeError("generator is not a single decorated stratum")
    ds = terms[0]
    gamma = ds.gamma
    genera = list(gamma.genera())
    nv = len(genera)
    legs = [list(gamma.legs(v, copy=True)) for v in range(nv)]
    edges = list(gamma.edges(copy=True))
    half_to_vertex = {h: v for v in range(nv) for h in legs[v]}
    edge_halves = {h for e in edges for h in e}
    markings = sorted(h for h in half_to_vertex if h not in edge_halves)
    marking_vertex = [half_to_vertex[m] for m in markings]
    vertex_edges = [tuple(sorted((half_to_vertex[a], half_to_vertex[b]))) for a, b in edges]

    kappa = [[] for _ in range(nv)]
    psi = {}
    # decstratum polynomials expose (kappa, psi) exponent data per monomial;
    # generators carry a single monomial with unit coefficient
    poly = ds.poly
    monoms = list(poly.monom)
    if len(monoms) != 1:
        raise RuntimeError("generator polynomial is not a single monomial")
    kappa_part, psi_part = monoms[0]
    for v, exps in enumerate(kappa_part):
        for idx, e in enumerate(exps):
            kappa[v].extend([idx + 1] * e)
    for h, e in psi_part.items():
        if h in edge_halves:
            eidx = next(i for i, ed in enumerate(edges) if h in ed)
            side = 0 if edges[eidx][0] == h else 1
            psi[("h", eidx, side)] = e
        else:
            psi[("l", markings.index(h) + 1)] = e

    gtok = ";".join(
        [
            ",".join(str(x) for x in genera),
            ",".join(str(v) for v in marking_vertex),
            ",".join(f"{a}-{b}" for a, b in vertex_edges),
        ]
    )
    ktok = "/".join(".".join(str(k) for k in sorted(ks)) for ks in kappa)
    ptok = ",".join(
        (f"l{p[1]}" if p[0] == "l" else f"h{p[1]}.{p[2]}") + f"^{e}"
        for p, e in sorted(psi.items())
    )
    return f"{gtok} k:{ktok} p:{ptok}"


def export_ring(g, n, r):
    from admcycles import tautgens

    d = 3 * g - 3 + n
    gens = tautgens(g, n, r)
    comp = tautgens(g, n, d - r)
    pairing = [
        [Fraction((a * b).evaluate()) for b in comp]
        for a in gens
    ]
    basis_idx = _greedy_independent(pairing)
    cols = [[pairing[i][j] for i in range(len(gens))] for j in range(len(comp))]
    probe_idx = _greedy_independent([[row[i] for i in basis_idx] for row in cols])
    out = [
        "ringtable",
        f"space: {g} {n}",
        f"degree: {r}",
        "symmetry: trivial",
        f"dimension: {len(basis_idx)}",
        "basis:",
    ]
    for i in basis_idx:
        out.append(f"  {_stratum_token(gens[i])}")
    out.append("reduction_probe:")
    for j in probe_idx:
        vec = ",".join(_fraction_token(v) for v in cols[j])
        out.append(f"  {_stratum_token(comp[j])} :: {vec}")
    out.append("end")
    return "\n".join(out) + "\n"


def _one_edge_graph(g1, g2, n):
    from admcycles import StableGraph

    # markings on the first vertex, one separating edge n+1 -- n+2
    return StableGraph(
        [g1, g2], [list(range(1, n + 1)) + [n + 1], [n + 2]], [(n + 1, n + 2)]
    )


def _matrix_document(rows):
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    out = ["matrix", f"shape: {nrows} {ncols}"]
    for i, row in enumerate(rows):
        for c, v in enumerate(row):
            if v:
                out.append(f"{i} {c} {_fraction_token(v)}")
    out.append("end")
    return "\n".join(out) + "\n"


def export_pushforward(g1, g2, n):
    from admcycles import fundclass

    gamma = _one_edge_graph(g1, g2, n)
    cls = gamma.boundary_pushforward([fundclass(g1, n + 1), fundclass(g2, 1)])
    vec = list(cls.toTautbasis(g1 + g2, n, 1))
    return _matrix_document([[Fraction(v) for v in vec]])


def export_pullback(g1, g2, n):
    from admcycles import tautgens

    gamma = _one_edge_graph(g1, g2, n)
    rows = []
    for t in tautgens(g1 + g2, n, 1):
        pulled = gamma.boundary_pullback(t)
        rows.append([Fraction(v) for v in pulled.totensorTautbasis(1, vecout=True)])
    return _matrix_document(rows)


def main(argv):
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    kind, args = argv[1], [int(x) for x in argv[2:]]
    if kind == "ring" and len(args) == 3:
        sys.stdout.write(export_ring(*args))
    elif kind == "pushforward" and len(args) == 3:
        sys.stdout.write(export_pushforward(*args))
    elif kind == "pullback" and len(args) == 3:
        sys.stdout.write(export_pullback(*args))
    else:
        print(f"unrecognized request {argv[1:]}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
