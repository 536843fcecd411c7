"""Tilde and roof curves on the qutrit family, written as CSV next to the
analytic values.

    python scripts/fig1.py a --grid 101 --out fig1a.csv
"""
import argparse
import sys
import time

from imaginarity import cli
from imaginarity.roof import RoofOptions


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("variant", choices=("a", "b"))
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--starts", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = cli.fig1_rows(args.variant, args.grid, RoofOptions(n_starts=args.starts, seed=args.seed))
    text = cli.fig1_to_csv(rows)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = sum(r.flag != "ok" for r in rows)
    print(f"{len(rows)} points, {bad} mismatches, {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
