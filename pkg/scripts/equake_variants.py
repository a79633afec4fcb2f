"""Sparse symmetric mat-vec (equake-style) under each reduction strategy.

Sweeps matrix size and thread count for the locked, atomic and privatized
scatter strategies plus the adaptive choice, and prints one report per
size. A small size plays the role of a cache-resident "train" input and
a large one the "ref" input.

    python scripts/equake_variants.py --sizes 2000,100000 --threads 1,2,4,8
"""

import argparse
import sys

from synpar.bench.harness import RunSpec, emit, run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--sizes", default="2000,100000")
    p.add_argument("--threads", default="1,2,4,8")
    p.add_argument("--degree", type=float, default=8.0)
    p.add_argument("--block", type=int, default=3)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--cache-budget", type=int, default=8 * 1024 * 1024)
    p.add_argument("--format", choices=("csv", "md"), default="md")
    args = p.parse_args(argv)

    threads = tuple(int(t) for t in args.threads.split(","))
    failed = False
    for n in (int(s) for s in args.sizes.split(",")):
        spec = RunSpec("smvp", ("locked", "atomic", "privatized", "auto"), threads, size=n,
                       degree=args.degree, block=args.block, reps=args.reps,
                       cache_budget=args.cache_budget)
        report = run(spec)
        failed |= report.failed
        print(f"\nn = {n}, degree {args.degree}, block {args.block}")
        print(emit(report, args.format), end="")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
