#!/usr/bin/env python3
"""Independent genus-0 oracle from point counts over finite fields.

Ordered configurations of n points on a line modulo projective
transformations: fixing the first three points at 0, 1, infinity leaves
(n-3)-tuples of distinct field elements avoiding 0 and 1, so

    |count over F_q| = (q-2)(q-3)...(q-(n-2)).

The weight-graded Betti numbers are read off the coefficients: the
k-th elementary symmetric polynomial in 2..n-2 is the dimension in
weight 2k and cohomological degree k, and every other weight vanishes.

This script shares no code with the engine package; it recomputes the
polynomial by expansion, brute-force checks it against actual tuple
counts for small prime fields, and emits result documents suitable for
`wss verify`.
"""

import argparse
import sys
from pathlib import Path


def elementary_coeffs(n):
    """Coefficients c_k of prod_{j=2}^{n-2} (1 + j t)."""
    coeffs = [1]
    for j in range(2, n - 1):
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k] += c
            nxt[k + 1] += c * j
        coeffs = nxt
    return coeffs


def brute_count(n, q):
    """Count (n-3)-tuples of distinct elements of F_q minus {0, 1}."""
    pool = [x for x in range(q) if x not in (0, 1)]
    count = 0

    def rec(chosen, used):
        nonlocal count
        if len(chosen) == n - 3:
            count += 1
            return
        for x in pool:
            if x not in used:
                rec(chosen + [x], used | {x})

    rec([], set())
    return count


def product_count(n, q):
    out = 1
    for j in range(2, n - 1):
        out *= q - j
    return out


def selfcheck(nmax=7, primes=(7, 11, 13)):
    for n in range(4, nmax + 1):
        for q in primes:
            got, want = brute_count(n, q), product_count(n, q)
            if got != want:
                raise SystemExit(f"selfcheck failed: n={n} q={q} {got} != {want}")
    print(f"selfcheck passed: brute-force tuple counts match for n<=7, q in {primes}")


def document(n):
    coeffs = elementary_coeffs(n)
    d = n - 3
    lam = ".".join(["1"] * n)
    lines = [
        "result",
        f"space: 0 {n}",
        "variant: open",
        "direction: push",
        f"weights: 0..{2 * d}",
    ]
    for k, c in enumerate(coeffs):
        lines.append(f"sector: q={2 * k} r={k} lambda={lam} dim={c}")
    if 2 * d >= 1:
        lines.append("note: odd weights are structurally zero in scope")
    lines.append("end")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--outdir", help="write m0_N_push.txt files here")
    ap.add_argument("--nmax", type=int, default=7)
    ap.add_argument("--skip-selfcheck", action="store_true")
    args = ap.parse_args()
    if not args.skip_selfcheck:
        selfcheck(min(args.nmax, 7))
    for n in range(4, args.nmax + 1):
        text = document(n)
        if args.outdir:
            path = Path(args.outdir) / f"m0_{n}_push.txt"
            path.write_text(text)
            print(f"wrote {path}")
        else:
            sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
