#!/usr/bin/env python3
"""Certification sweep over a degree range, reproducing the exceptional-degree
scan.

With no alpha table the built-in estimate is used; supply --alpha-table with a
`d,alpha` CSV of independence-ratio values to reproduce table-driven runs.

Usage: python scripts/run_sweep.py [--d-min 30] [--d-max 3000] [--threads 8]
"""

import argparse
import json
import sys
import time

from stardecomp.certify import load_alpha_table, sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d-min", type=int, default=30)
    ap.add_argument("--d-max", type=int, default=3000)
    ap.add_argument("--threads", type=int, default=8)
    ap.add_argument("--alpha-table")
    ap.add_argument("--out", default="sweep.json")
    args = ap.parse_args()

    table = load_alpha_table(args.alpha_table) if args.alpha_table else None
    source = "table" if table else "estimate"
    t0 = time.time()
    report = sweep(
        args.d_min, args.d_max, alpha_source=source, alpha_table=table,
        threads=args.threads,
    )
    elapsed = time.time() - t0
    with open(args.out, "w") as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
    exc = report.exceptional_degrees
    print(f"swept d in [{args.d_min}, {args.d_max}] ({source}) "
          f"in {elapsed:.1f}s on {args.threads} workers")
    print(f"{len(exc)} exceptional degrees:", " ".join(map(str, exc)))
    errs = [r.d for r in report.records if r.error]
    if errs:
        print(f"degrees with errors: {errs}", file=sys.stderr)


if __name__ == "__main__":
    main()
