"""``bench`` command line.

    bench run --kernel gaussj --strategy all --threads 1,2,4,8 --size 500
    bench run --kernel gaussj --input matrix.mtx --format md
    bench legality --preset gaussj --skew 1,0,1,1

Exit codes: 0 ok / Legal, 1 verification failure, 2 bad input or usage,
3 legal only under assumptions, 4 illegal. ``BENCH_THREADS`` (e.g.
``1,4``) overrides ``--threads``.
"""

from __future__ import annotations

import argparse
import os
import sys

from .. import schedule as sch
from ..adaptive import DEFAULT_CACHE_BUDGET
from ..kernels import SingularMatrixError
from ..numerics import MatrixMarketError
from .harness import KERNELS, InputError, RunSpec, emit, run

THREADS_ENV = "BENCH_THREADS"
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_ASSUMED, EXIT_ILLEGAL = 0, 1, 2, 3, 4


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _skew(text: str):
    if text in ("identity", "id"):
        return sch.IDENTITY
    if text == "skew":
        return sch.SKEW
    vals = _int_list(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("--skew takes four integers a,b,c,d (row-major 2x2)")
    return (vals[0], vals[1]), (vals[2], vals[3])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="time and verify kernel variants")
    r.add_argument("--kernel", choices=KERNELS, required=True)
    r.add_argument("--strategy", default="all",
                   help="comma list of strategies, 'all', or 'auto' (smvp)")
    r.add_argument("--threads", type=_int_list, default=(1,))
    src = r.add_mutually_exclusive_group()
    src.add_argument("--size", type=int, default=500)
    src.add_argument("--input", help="Matrix Market file (gaussj, givens, smvp)")
    r.add_argument("--tile", type=int, default=32)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--reps", type=int, default=3)
    r.add_argument("--warmup", type=int, default=1, help="untimed runs before each timed series")
    r.add_argument("--tol", type=float, default=1e-12)
    r.add_argument("--format", choices=("csv", "md", "markdown"), default="csv")
    r.add_argument("--cache-budget", type=int, default=DEFAULT_CACHE_BUDGET, metavar="BYTES")
    r.add_argument("--degree", type=float, default=8.0, help="smvp: mean neighbours per node")
    r.add_argument("--block", type=int, default=3, help="smvp: block edge length")
    r.add_argument("--features", type=int, default=8, help="argmax: feature vector length")
    r.add_argument("--winners", type=int, default=1024, help="argmax: number of winner slots")
    r.add_argument("--gen", choices=("random", "spd", "zero-pivot"), default="random",
                   help="gaussj: input generator")
    r.add_argument("--plant", type=_int_list, default=(),
                   help="gaussj zero-pivot steps / givens cold rows")
    r.add_argument("--rhs", choices=("ones", "random"), default="ones", help="gaussj right-hand side")
    r.add_argument("--dynamic", action="store_true", help="dynamic scheduling instead of static blocks")

    lg = sub.add_parser("legality", help="check a skew+tile schedule against dependences")
    deps = lg.add_mutually_exclusive_group(required=True)
    deps.add_argument("--preset", choices=sorted(sch.PRESETS))
    deps.add_argument("--deps", help="dependence file: '[lo,hi] [lo,hi] tag weight' per line")
    lg.add_argument("--skew", type=_skew, default=sch.SKEW, help="a,b,c,d | identity | skew")
    lg.add_argument("--tile", type=_int_list, default=(32, 32))
    lg.add_argument("--speculate-below", type=float, default=None, metavar="WEIGHT",
                    help="drop assumed dependences less likely than WEIGHT before checking")
    return p


def cmd_run(args, out) -> int:
    threads = args.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            threads = _int_list(env)
        except argparse.ArgumentTypeError as exc:
            print(f"bench: bad {THREADS_ENV}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        spec = RunSpec(
            kernel=args.kernel, strategies=tuple(s.strip() for s in args.strategy.split(",")),
            threads=threads, size=args.size, input=args.input, tile=args.tile, seed=args.seed,
            reps=args.reps, warmup=args.warmup, tol=args.tol, cache_budget=args.cache_budget, degree=args.degree,
            block=args.block, features=args.features, winners=args.winners, gen=args.gen,
            plant=args.plant, rhs=args.rhs,
        )
        report = run(spec, deterministic=not args.dynamic)
    except (FileNotFoundError, MatrixMarketError, InputError, SingularMatrixError, ValueError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(emit(report, args.format))
    return EXIT_FAILED if report.failed else EXIT_OK


def cmd_legality(args, out) -> int:
    try:
        if args.preset:
            deps = sch.PRESETS[args.preset]()
        else:
            with open(args.deps) as fh:
                deps = sch.parse_dependences(fh.read())
        schedule = sch.SkewTileSchedule(args.skew, args.tile)
    except (OSError, ValueError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return EXIT_USAGE

    speculated = []
    if args.speculate_below is not None:
        deps, speculated = sch.speculative_partition(deps, args.speculate_below)
    for d in deps:
        img = sch.apply_skew(schedule, d)
        tag = "always" if d.always else f"assumed:{d.assumption} (weight {d.weight!r})"
        ok = "ok" if sch.is_satisfied(schedule, d) else "VIOLATED"
        out.write(f"  {d} -> {img}  {tag}  {ok}\n")
    for d in speculated:
        out.write(f"  {d} speculated away: assumed:{d.assumption} (weight {d.weight!r})\n")
    verdict = sch.check_schedule(deps, schedule)
    out.write(f"{verdict}\n")
    if isinstance(verdict, sch.Legal):
        return EXIT_OK
    if isinstance(verdict, sch.LegalUnderAssumptions):
        return EXIT_ASSUMED
    return EXIT_ILLEGAL


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args, out)
    return cmd_legality(args, out)


if __name__ == "__main__":
    sys.exit(main())
