#!/usr/bin/env python3
"""Sweep full weight tables over all small spaces and sanity-check them.

For every (g, n) with 3g-3+n <= bound this prints the push table per
variant, checks the per-weight Euler characteristic of the first page
against the table, and compares push against pull under duality.
"""

import argparse
import time

from wss.graphs import space_dim
from wss.pages import duality_mismatches, e2_table, euler_check


def spaces(bound):
    out = []
    for g in range(0, bound + 2):
        for n in range(0, 3 * (bound + 1)):
            if 2 * g - 2 + n <= 0:
                continue
            if space_dim(g, n) <= bound:
                out.append((g, n))
    return sorted(out, key=lambda s: (space_dim(*s), s))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=2, help="max dimension 3g-3+n")
    ap.add_argument("--variants", default="open,ct,rt")
    args = ap.parse_args()

    for g, n in spaces(args.bound):
        for variant in args.variants.split(","):
            t0 = time.time()
            push = e2_table(g, n, variant=variant, direction="push")
            pull = e2_table(g, n, variant=variant, direction="pull")
            dims = {c: push.dim(*c) for c in push.cells()}
            ok_euler = all(
                euler_check(g, n, q, variant=variant)
                for q in range(0, 2 * space_dim(g, n) + 1, 2)
            )
            mism = duality_mismatches(push, pull)
            status = "ok" if ok_euler and not mism else f"EULER={ok_euler} DUAL={mism}"
            print(
                f"({g},{n}) {variant:4s} {dims} {status} [{time.time()-t0:.1f}s]"
            )


if __name__ == "__main__":
    main()
