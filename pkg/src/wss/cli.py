"""Command line front end.

Three subcommands: `compute` runs a weight table and writes the result
document, `verify` diffs a result document against a known one, `ring`
exports a basis of one tautological group in the interchange format.

Exit codes: 0 success, 2 verification mismatch, 3 unsupported
configuration (including usage errors), 4 internal inconsistency such as
a pairing rank exceeding the known dimension.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from wss.engine import TableConfig, compute_table
from wss.formats import (
    RingTableDoc,
    diff_results,
    encode_partition,
    parse_result,
    result_document,
    ring_table_document,
)
from wss.repthy import schur_string
from wss.ring import (
    PAIRING_BOUND,
    Symmetry,
    UnsupportedRingModel,
    basis,
    young_blocks,
)

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; that code is taken by verification
    # mismatches, so route usage problems to the unsupported-config code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_UNSUPPORTED, f"{self.prog}: error: {message}\n")


def _parse_weights(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError("weights must look like A..B")
    a, b = int(lo), int(hi)
    if a < 0 or b < a:
        raise ValueError("weight range must satisfy 0 <= A <= B")
    if a % 2 or b % 2:
        raise ValueError("weight bounds must be even")
    return (a, b)


def _parse_lam(text: str, n: int):
    if text == "all":
        return "all"
    parts = tuple(int(p) for p in text.split("."))
    if sorted(parts, reverse=True) != list(parts) or any(p < 1 for p in parts):
        raise ValueError(f"not a partition: {text}")
    if sum(parts) != n:
        raise ValueError(f"partition {text} does not have size n={n}")
    return parts


def _echo_table(doc) -> list[str]:
    h = "H" if doc.direction == "push" else "H_c"
    lines = []
    cells = sorted({(q, r) for q, r, _ in doc.sectors})
    for q, r in cells:
        mults = {mu: m for (qq, rr, mu), m in doc.mults.items() if (qq, rr) == (q, r)}
        if mults and doc.space[1] > 1:
            lines.append(f"gr_{q} {h}^{r} = {schur_string(mults, q // 2)}")
        else:
            dim = doc.sectors[(q, r, min(lam for qq, rr, lam in doc.sectors if (qq, rr) == (q, r)))]
            lines.append(f"gr_{q} {h}^{r} = {dim}" + (f" (weight L^{q//2})" if q else ""))
    if not cells:
        lines.append("all requested weights vanish")
    for note in doc.notes:
        lines.append(f"note: {note}")
    return lines


def cmd_compute(args) -> int:
    if 2 * args.g - 2 + args.n <= 0:
        print(f"unsupported: ({args.g},{args.n}) is unstable", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if 2 * args.g + args.n > PAIRING_BOUND:
        # gate before any graph enumeration: the ambient ring model is the
        # first thing a page needs
        print(
            f"unsupported: ring models are certified for 2g+n <= {PAIRING_BOUND}",
            file=sys.stderr,
        )
        return EXIT_UNSUPPORTED
    try:
        weights = _parse_weights(args.weights) if args.weights else None
        if args.lam and "all" in args.lam:
            lam_set = "all"
        else:
            lam_set = tuple(_parse_lam(t, args.n) for t in args.lam or ())
    except ValueError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    cfg = TableConfig(
        g=args.g,
        n=args.n,
        variant=args.variant,
        direction=args.direction,
        weights=weights,
        lam_set=lam_set,
    )
    doc, report = compute_table(
        cfg,
        workers=args.workers,
        memory_budget=args.memory_budget,
        cache_dir=args.cache_dir,
    )
    text = result_document(doc)
    if args.out:
        Path(args.out).write_text(text)
    for line in _echo_table(doc):
        print(line)
    if args.out:
        print(f"result document written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        got = parse_result(Path(args.results).read_text())
        ref = parse_result(Path(args.known).read_text())
    except (OSError, ValueError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    diffs = diff_results(ref, got)
    if diffs:
        for d in diffs:
            print(d)
        print(f"verification failed: {len(diffs)} differences")
        return EXIT_MISMATCH
    n = len(ref.sectors) + len(ref.mults)
    print(f"verification passed: {n} entries agree")
    return EXIT_OK


def cmd_ring(args) -> int:
    if args.lam:
        try:
            lam = _parse_lam(args.lam, args.n)
        except ValueError as exc:
            print(f"unsupported: {exc}", file=sys.stderr)
            return EXIT_UNSUPPORTED
        sym = Symmetry(blocks=young_blocks(lam))
        sym_name = f"lambda={encode_partition(lam)}"
    else:
        sym = Symmetry()
        sym_name = "trivial"
    b = basis(args.g, args.n, args.r, sym)
    reps = [orbit[0][0] for orbit in b.basis_orbits()]
    probe_cols = []
    for j, p in enumerate(b.probes):
        col = tuple(row.get(j, 0) for row in b.rows)
        probe_cols.append((p, col))
    doc = RingTableDoc(
        space=(args.g, args.n),
        degree=args.r,
        symmetry=sym_name,
        dimension=b.dim,
        basis=reps,
        reduction_probe=probe_cols,
    )
    text = ring_table_document(doc)
    if args.out:
        Path(args.out).write_text(text)
        print(f"dimension {b.dim}; ring table written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="wss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="compute a weight table")
    pc.add_argument("-g", type=int, required=True)
    pc.add_argument("-n", type=int, required=True)
    pc.add_argument("--variant", choices=("open", "ct", "rt"), default="open")
    pc.add_argument("--direction", choices=("push", "pull"), default="push")
    pc.add_argument("--weights", help="inclusive even range A..B, default full")
    pc.add_argument(
        "--lambda",
        dest="lam",
        action="append",
        help="marking symmetry sector: a dotted partition, or 'all'",
    )
    pc.add_argument("--workers", type=int, default=1)
    pc.add_argument("--memory-budget", type=int, default=None)
    pc.add_argument("--cache-dir", default=None)
    pc.add_argument("--out", default=None)
    pc.set_defaults(fn=cmd_compute)

    pv = sub.add_parser("verify", help="diff a result document against a known one")
    pv.add_argument("results")
    pv.add_argument("known")
    pv.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("ring", help="export a tautological group basis")
    pr.add_argument("-g", type=int, required=True)
    pr.add_argument("-n", type=int, required=True)
    pr.add_argument("-r", type=int, required=True)
    pr.add_argument("--lambda", dest="lam", default=None)
    pr.add_argument("--out", default=None)
    pr.set_defaults(fn=cmd_ring)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UnsupportedRingModel as exc:
        if "exceeds" in str(exc):
            print(f"internal inconsistency: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except RuntimeError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
