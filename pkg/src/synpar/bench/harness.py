"""Benchmark grid runner: build inputs, time variants against a serial
oracle measured in the same process, verify outputs, render reports."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..adaptive import DEFAULT_CACHE_BUDGET, choose_strategy, measure_features
from ..kernels import (
    ArgmaxInput,
    SmvpInput,
    argmax_update_parallel,
    argmax_update_serial,
    gaussj_serial,
    gaussj_speculative,
    gen_argmax,
    givens_serial,
    givens_tiled,
    smvp_parallel,
    smvp_serial,
)
from ..kernels.smvp import max_rel_err, row_scale
from ..numerics import (
    BlockSparseSym,
    ComplexSplitMatrix,
    DenseMatrix,
    Rng,
    gen_block_sparse,
    gen_complex_random,
    gen_multi_zero_pivot,
    gen_random_dense,
    gen_spd,
    read_matrix_market,
)
from ..runtime import ExecConfig, Strategy

KERNELS = ("smvp", "argmax", "givens", "gaussj")
ALL_STRATEGIES = {
    "smvp": ("locked", "atomic", "privatized"),
    "argmax": ("critical", "privatized"),
    "givens": ("tiled",),
    "gaussj": ("speculative",),
}
CSV_HEADER = ("kernel", "strategy", "threads", "size", "median_time_ms", "speedup",
              "verified", "misspeculations", "swaps")
MAX_DENSE = 20000 * 20000


@dataclass
class RunSpec:
    kernel: str
    strategies: tuple = ("all",)
    threads: tuple = (1,)
    size: int = 500
    input: str | None = None
    tile: int = 32
    seed: int = 0
    reps: int = 3
    warmup: int = 1
    tol: float = 1e-12
    cache_budget: int = DEFAULT_CACHE_BUDGET
    degree: float = 8.0
    block: int = 3
    features: int = 8
    winners: int = 1024
    gen: str = "random"
    plant: tuple = ()
    rhs: str = "ones"

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; pick one of {', '.join(KERNELS)}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if not self.threads or min(self.threads) < 1:
            raise ValueError("thread counts must be >= 1")
        if self.input is not None and not Path(self.input).is_file():
            raise FileNotFoundError(f"input file not found: {self.input}")

    def expanded_strategies(self) -> list[str]:
        out = []
        for s in self.strategies:
            out.extend(ALL_STRATEGIES[self.kernel] if s == "all" else [s])
        return out


@dataclass
class RunRow:
    kernel: str
    strategy: str
    threads: int
    size: str
    median_time_ms: float
    speedup: float
    verified: str
    misspeculations: int = 0
    swaps: int = 0

    @property
    def failed(self) -> bool:
        return self.verified == "FAILED"

    def fields(self) -> list[str]:
        return [self.kernel, self.strategy, str(self.threads), self.size, repr(self.median_time_ms),
                repr(self.speedup), self.verified, str(self.misspeculations), str(self.swaps)]


@dataclass
class RunReport:
    rows: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.rows)


class InputError(ValueError):
    """Input cannot be used by the requested kernel."""


# -- input construction --------------------------------------------------------


def _load_dense(spec: RunSpec) -> DenseMatrix:
    return read_matrix_market(spec.input, max_elements=MAX_DENSE)


def _gaussj_input(spec: RunSpec):
    rng = Rng(spec.seed)
    if spec.input:
        a = _load_dense(spec)
        if a.rows != a.cols:
            raise InputError(f"gaussj needs a square matrix, got {a.rows}x{a.cols}")
    elif spec.gen == "random":
        a = gen_random_dense(spec.size, rng)
    elif spec.gen == "spd":
        a = gen_spd(spec.size, rng)
    elif spec.gen == "zero-pivot":
        a = gen_multi_zero_pivot(spec.size, spec.plant or (spec.size // 3,), rng)
    else:
        raise InputError(f"unknown generator {spec.gen!r}")
    n = a.rows
    b = np.ones((n, 1)) if spec.rhs == "ones" else Rng(spec.seed + 1).uniform(0.5, 1.5, (n, 1))
    return a, DenseMatrix(b)


def _givens_input(spec: RunSpec) -> ComplexSplitMatrix:
    if spec.input:
        re = _load_dense(spec)
        return ComplexSplitMatrix(re, DenseMatrix.zeros(*re.shape))
    return gen_complex_random(spec.size, spec.size, Rng(spec.seed), cold_rows=spec.plant)


def sparse_from_dense(a: DenseMatrix) -> BlockSparseSym:
    """Upper-triangle nonzeros of a symmetric dense matrix as 1x1 blocks."""
    d = a.data
    if d.shape[0] != d.shape[1] or not np.array_equal(d, d.T):
        raise InputError("smvp needs a symmetric matrix")
    n = d.shape[0]
    row_ptr, cols, vals = [0], [], []
    for i in range(n):
        nz = np.nonzero(d[i, i + 1:])[0] + i + 1
        cols.append(i)
        vals.append(d[i, i])
        cols.extend(nz.tolist())
        vals.extend(d[i, nz].tolist())
        row_ptr.append(len(cols))
    return BlockSparseSym(n, 1, np.array(row_ptr), np.array(cols), np.array(vals).reshape(-1, 1, 1))


def _smvp_input(spec: RunSpec) -> SmvpInput:
    if spec.input:
        m = sparse_from_dense(_load_dense(spec))
        v = DenseMatrix(Rng(spec.seed).uniform(-1.0, 1.0, (m.n, 1)))
    else:
        m, v = gen_block_sparse(spec.size, spec.degree, spec.block, Rng(spec.seed))
    return SmvpInput(m, v, DenseMatrix.zeros(m.n, m.block))


# -- per-kernel adapters ---------------------------------------------------------


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return (time.perf_counter() - t) * 1e3, out


def _measure(spec, clone, run):
    """Run ``run(clone())`` ``spec.reps`` times after ``spec.warmup`` untimed runs.

    Returns (median ms, output of the first timed run).
    """
    for _ in range(spec.warmup):
        run(clone())
    times, first = [], None
    for r in range(spec.reps):
        x = clone()
        ms, out = _timed(lambda: run(x))
        times.append(ms)
        if r == 0:
            first = out
    return statistics.median(times), first


class _Gaussj:
    def __init__(self, spec):
        self.spec = spec
        self.a, self.b = _gaussj_input(spec)
        self.size = f"{self.a.rows}x{self.a.cols}"

    def serial(self):
        return _measure(self.spec, lambda: None, lambda _: gaussj_serial(self.a, self.b))

    def variant(self, strategy, cfg):
        if strategy != "speculative":
            raise InputError(f"gaussj has no strategy {strategy!r}")
        return strategy, *_measure(self.spec, lambda: None,
                                   lambda _: gaussj_speculative(self.a, self.b, self.spec.tile, cfg))

    def verify(self, out, ref):
        return ("exact" if out.same_output(ref) else "FAILED"), out.misspeculations, len(out.swaps)


class _Givens:
    def __init__(self, spec):
        self.spec = spec
        self.A = _givens_input(spec)
        self.size = f"{self.A.shape[0]}x{self.A.shape[1]}"

    def _run(self, fn):
        def go(A):
            fn(A)
            return A
        return go

    def serial(self):
        return _measure(self.spec, self.A.copy, self._run(givens_serial))

    def variant(self, strategy, cfg):
        if strategy != "tiled":
            raise InputError(f"givens has no strategy {strategy!r}")
        run = self._run(lambda A: givens_tiled(A, tile=self.spec.tile, cfg=cfg))
        return strategy, *_measure(self.spec, self.A.copy, run)

    def verify(self, out, ref):
        return ("exact" if out.bitwise_equal(ref) else "FAILED"), 0, 0


class _Smvp:
    def __init__(self, spec):
        self.spec = spec
        self.inp = _smvp_input(spec)
        self.size = f"{self.inp.matrix.n}x{self.inp.matrix.block}"
        self.scale = row_scale(self.inp, self.inp.w.data)

    def serial(self):
        def go(x):
            smvp_serial(x)
            return x.w.data
        return _measure(self.spec, self.inp.copy, go)

    def variant(self, strategy, cfg):
        label = strategy
        if strategy == "auto":
            chosen = choose_strategy(measure_features(self.inp, cfg, self.spec.cache_budget))
            label = f"auto→{chosen}"
            strategy = chosen.value

        def go(x):
            smvp_parallel(x, strategy, cfg)
            return x.w.data
        return label, *_measure(self.spec, self.inp.copy, go)

    def verify(self, out, ref):
        if np.array_equal(out.view(np.int64), ref.view(np.int64)):
            return "exact", 0, 0
        err = max_rel_err(out, ref, self.scale)
        return (f"within_tol({err!r})" if err <= self.spec.tol else "FAILED"), 0, 0


class _Argmax:
    def __init__(self, spec):
        if spec.input:
            raise InputError("argmax generates its own trials; --input is not supported")
        self.spec = spec
        self.inp = gen_argmax(spec.size, spec.winners, spec.features, Rng(spec.seed))
        self.size = f"{spec.size}x{spec.features}"

    def serial(self):
        def go(x):
            argmax_update_serial(x)
            return x
        return _measure(self.spec, self.inp.copy, go)

    def variant(self, strategy, cfg):
        def go(x):
            argmax_update_parallel(x, strategy, cfg)
            return x
        return strategy, *_measure(self.spec, self.inp.copy, go)

    def verify(self, out, ref):
        return ("exact" if out.same_state(ref) else "FAILED"), 0, 0


_ADAPTERS = {"gaussj": _Gaussj, "givens": _Givens, "smvp": _Smvp, "argmax": _Argmax}


def run(spec: RunSpec, deterministic: bool = True) -> RunReport:
    """Run every (strategy, threads) pair of ``spec`` and verify it.

    The serial oracle is timed in the same process on identical input; its
    first run (on a pristine clone) is the reference output.
    """
    kern = _ADAPTERS[spec.kernel](spec)
    serial_ms, ref = kern.serial()
    report = RunReport()
    for strategy in spec.expanded_strategies():
        for threads in spec.threads:
            cfg = ExecConfig(threads, deterministic)
            label, ms, out = kern.variant(strategy, cfg)
            verified, missp, swaps = kern.verify(out, ref)
            speedup = serial_ms / ms if ms > 0 else float("inf")
            report.rows.append(RunRow(spec.kernel, label, threads, kern.size, ms, speedup, verified, missp, swaps))
    return report


def emit(report: RunReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in report.rows:
            w.writerow(row.fields())
        return buf.getvalue()
    if fmt in ("md", "markdown"):
        lines = ["| " + " | ".join(CSV_HEADER) + " |", "|" + "---|" * len(CSV_HEADER)]
        lines += ["| " + " | ".join(row.fields()) + " |" for row in report.rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
