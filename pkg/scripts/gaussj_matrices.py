"""Speculative Gauss-J over a set of Matrix Market files.

Each file is densified (refusing anything above 20000 x 20000), eliminated
serially and speculatively, and reported with its misspeculation and swap
counts. Sparse engineering matrices often carry zero diagonals, so they
exercise the recovery path far more than random inputs.

    python scripts/gaussj_matrices.py data/*.mtx --threads 1,4,8
"""

import argparse
import sys

from synpar.bench.harness import RunReport, RunSpec, emit, run
from synpar.kernels import SingularMatrixError
from synpar.numerics import MatrixMarketError


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("files", nargs="+")
    p.add_argument("--threads", default="1,4,8")
    p.add_argument("--tile", type=int, default=32)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--format", choices=("csv", "md"), default="md")
    args = p.parse_args(argv)

    threads = tuple(int(t) for t in args.threads.split(","))
    merged = RunReport()
    for path in args.files:
        try:
            report = run(RunSpec("gaussj", ("speculative",), threads, input=path,
                                 tile=args.tile, reps=args.reps))
        except (OSError, MatrixMarketError, SingularMatrixError, ValueError) as exc:
            print(f"{path}: skipped ({exc})", file=sys.stderr)
            continue
        for row in report.rows:
            row.size = f"{path}:{row.size}"
        merged.rows.extend(report.rows)
    print(emit(merged, args.format), end="")
    return 1 if merged.failed else 0


if __name__ == "__main__":
    sys.exit(main())
