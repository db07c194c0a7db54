#!/usr/bin/env python3
"""Sweep alpha at fixed (n, q) and write the scan CSV plus a short summary
of where the phase flags flip.

Usage:
    python3 scripts/run_alpha_scan.py --n 5 --q 3 --lo -4 --hi 12 --step 0.5 \
        --out scan_n5_q3.csv
"""
import argparse
import sys

from ckn.cli import dispatch


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--q", type=float, default=3.0)
    ap.add_argument("--lo", type=float, default=-4.0)
    ap.add_argument("--hi", type=float, default=12.0)
    ap.add_argument("--step", type=float, default=0.5)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--out", default="alpha_scan.csv")
    args = ap.parse_args()

    argv = ["scan", "--n", str(args.n), "--q", str(args.q),
            f"--alpha-range={args.lo},{args.hi},{args.step}",
            "--out", args.out]
    if args.jobs is not None:
        argv += ["--jobs", str(args.jobs)]
    code = dispatch(argv)
    if code != 0:
        return code

    # summarize flag transitions
    rows = [line.split(",") for line in open(args.out).read().splitlines()[1:]]
    prev = None
    for row in rows:
        flags = (row[5], row[6], row[7])
        if flags != prev:
            print(f"alpha={row[0]:>8}: sq_positive={flags[0]} "
                  f"bs_closed_form={flags[1]} bs_certificate={flags[2]}")
            prev = flags
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
