#!/usr/bin/env python3
"""Recompute the two headline weight slices with timings.

Genus five (no markings) and genus three with three markings, weights 0
and 2.  Both runs go through the engine scheduler so a cache directory
makes reruns instant; pass --full-m33 to extend the genus-3 run to
weight 4, which is noticeably heavier.
"""

import argparse
import time

from wss.engine import TableConfig, compute_table
from wss.formats import result_document
from wss.repthy import schur_string


def show(doc):
    cells = sorted({(q, r) for q, r, _ in doc.sectors})
    for q, r in cells:
        mults = {mu: m for (qq, rr, mu), m in doc.mults.items() if (qq, rr) == (q, r)}
        if mults and doc.space[1] > 1:
            print(f"  gr_{q} H^{r} = {schur_string(mults, q // 2)}")
        else:
            dims = {lam: d for (qq, rr, lam), d in doc.sectors.items() if (qq, rr) == (q, r)}
            print(f"  gr_{q} H^{r} dim {min(dims.values())}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--full-m33", action="store_true")
    ap.add_argument("--out-prefix", help="write result documents with this prefix")
    args = ap.parse_args()

    hi = 4 if args.full_m33 else 2
    runs = [
        ("M_5", TableConfig(5, 0, weights=(0, 2))),
        ("M_3,3", TableConfig(3, 3, weights=(0, hi), lam_set="all")),
    ]
    for name, cfg in runs:
        t0 = time.time()
        doc, report = compute_table(
            cfg, workers=args.workers, cache_dir=args.cache_dir
        )
        dt = time.time() - t0
        print(f"{name} weights {cfg.weights[0]}..{cfg.weights[1]} [{dt:.1f}s]")
        show(doc)
        if args.out_prefix:
            path = f"{args.out_prefix}{name.replace(',', '_').replace('M_', 'm')}.txt"
            with open(path, "w") as fh:
                fh.write(result_document(doc))
            print(f"  wrote {path}")


if __name__ == "__main__":
    main()
