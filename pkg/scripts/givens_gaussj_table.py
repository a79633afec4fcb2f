"""Speedups of the skewed/tiled Givens kernel and speculative Gauss-J.

Both variants are verified bitwise against their serial versions; the
table reports median time, speedup and (for Gauss-J) recovery rounds.

    python scripts/givens_gaussj_table.py --size 2000 --threads 1,2,4,8
"""

import argparse
import sys

from synpar.bench.harness import RunSpec, emit, run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--size", type=int, default=1000)
    p.add_argument("--threads", default="1,2,4,8")
    p.add_argument("--tile", type=int, default=32)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--gen", choices=("random", "spd", "zero-pivot"), default="random")
    p.add_argument("--plant", default="", help="zero-pivot steps for --gen zero-pivot")
    p.add_argument("--format", choices=("csv", "md"), default="md")
    args = p.parse_args(argv)

    threads = tuple(int(t) for t in args.threads.split(","))
    plant = tuple(int(k) for k in args.plant.split(",") if k)
    reports = [
        run(RunSpec("givens", ("tiled",), threads, size=args.size, tile=args.tile, reps=args.reps)),
        run(RunSpec("gaussj", ("speculative",), threads, size=args.size, tile=args.tile,
                    reps=args.reps, gen=args.gen, plant=plant)),
    ]
    merged = reports[0]
    merged.rows.extend(reports[1].rows)
    print(emit(merged, args.format), end="")
    return 1 if merged.failed else 0


if __name__ == "__main__":
    sys.exit(main())
