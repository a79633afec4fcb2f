"""Gauss-J forward elimination: serial oracle and the speculative tiled version.

The speculative version assumes no diagonal element is zero, which removes
the row-permutation dependences and makes the (k, i) update nest legal to
skew and tile. The first update of each step checks its pivot; on a zero it
stops the round, the unfinished updates of earlier steps are completed
serially, the pivot search runs, and tiling restarts at the offending step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .. import _atomics as at
from ..numerics import DenseMatrix
from ..runtime import ExecConfig, SpecController, execute_wavefronts
from ..schedule import SKEW, SkewTileSchedule, gaussj_domain, wavefronts

# Trace record kinds
UPDATE, DETECT, DRAIN = 0, 1, 2


class SingularMatrixError(ArithmeticError):
    def __init__(self, step: int):
        super().__init__(f"zero pivot column at elimination step {step}: matrix is singular")
        self.step = step


@dataclass
class GaussjResult:
    a: DenseMatrix
    b: DenseMatrix
    swaps: list = field(default_factory=list)
    misspeculations: int = 0
    events: list = field(default_factory=list)
    trace: np.ndarray | None = None

    def same_output(self, other: GaussjResult) -> bool:
        return self.a.bitwise_equal(other.a) and self.b.bitwise_equal(other.b) and self.swaps == other.swaps


@njit(nogil=True, cache=True, inline="always")
def _update(a, b, n, k, i):
    xfac = a[i, k] / a[k, k]
    for j in range(k + 1, n):
        a[i, j] = a[i, j] - xfac * a[k, j]
    b[i] = b[i] - xfac * b[k]


@njit(nogil=True, cache=True)
def _pivot(a, b, n, k):
    """Largest-magnitude row search and swap for step ``k``; -1 if the column is all zero."""
    amax = abs(a[k, k])
    m = k
    for i in range(k + 1, n):
        aabs = abs(a[i, k])
        if aabs > amax:
            amax = aabs
            m = i
    if m == k:
        return -1
    b[m], b[k] = b[k], b[m]
    for j in range(k, n):
        tmp = a[k, j]
        a[k, j] = a[m, j]
        a[m, j] = tmp
    return m


@njit(nogil=True, cache=True)
def _serial(a, b, n, swaps):
    ns = 0
    for k in range(n - 1):
        if a[k, k] == 0.0:
            m = _pivot(a, b, n, k)
            if m < 0:
                return ns, k
            swaps[ns, 0] = k
            swaps[ns, 1] = m
            ns += 1
        for i in range(k + 1, n):
            _update(a, b, n, k, i)
    return ns, -1


@njit(nogil=True, cache=True)
def _log(log, seq, kind, k, i):
    s = at.fetch_add_i64(seq, 0, 1)
    log[s, 0] = kind
    log[s, 1] = k
    log[s, 2] = i


@njit(nogil=True, cache=True)
def _tile(a, b, n, k0, t0, t1, T0, T1, failed, progress, log, seq):
    """Run one tile of the skewed update nest; returns the step of a zero pivot, else -1."""
    tracing = log.shape[0] > 0
    for k in range(max(k0, t0 * T0), min(n - 1, t0 * T0 + T0)):
        for i in range(max(k + 1, t1 * T1 - k), min(n, t1 * T1 + T1 - k)):
            if k >= at.atomic_load(failed, 0):
                return -1
            if i == k + 1 and a[k, k] == 0.0:
                if tracing:
                    _log(log, seq, DETECT, k, i)
                return k
            _update(a, b, n, k, i)
            progress[k] = i
            if tracing:
                _log(log, seq, UPDATE, k, i)
    return -1


@njit(nogil=True, cache=True)
def _drain(a, b, n, k0, stop, progress, log, seq):
    tracing = log.shape[0] > 0
    for k in range(k0, stop):
        for i in range(max(progress[k] + 1, k + 1), n):
            _update(a, b, n, k, i)
            progress[k] = i
            if tracing:
                _log(log, seq, DRAIN, k, i)


def _check(a: DenseMatrix, b: DenseMatrix):
    n = a.rows
    if a.cols != n or n < 2:
        raise ValueError(f"need a square matrix with n >= 2, got {a.rows}x{a.cols}")
    if b.shape != (n, 1):
        raise ValueError(f"b must be {n}x1, got {b.rows}x{b.cols}")
    return n


def gaussj_serial(a: DenseMatrix, b: DenseMatrix) -> GaussjResult:
    """Forward elimination with pivot search only when a diagonal entry is zero.

    Works on copies. Column ``k`` below the diagonal is left as it was when
    step ``k`` began.
    """
    n = _check(a, b)
    A, B = a.data.copy(), b.data.copy()
    swaps = np.empty((n, 2), dtype=np.int64)
    ns, singular = _serial(A, B.reshape(-1), n, swaps)
    if singular >= 0:
        raise SingularMatrixError(int(singular))
    return GaussjResult(DenseMatrix(A), DenseMatrix(B), [tuple(map(int, s)) for s in swaps[:ns]])


def gaussj_speculative(a: DenseMatrix, b: DenseMatrix, tile: int = 32,
                       cfg: ExecConfig | None = None, trace: bool = False) -> GaussjResult:
    """Skewed, tiled elimination speculating that no pivot is zero.

    With ``trace=True`` the result carries an ``(events, 3)`` array of
    ``(kind, k, i)`` rows in global order (``UPDATE``, ``DETECT``, ``DRAIN``),
    sequenced by an atomic counter.
    """
    n = _check(a, b)
    cfg = cfg or ExecConfig()
    A, B = a.data.copy(), b.data.copy()
    bv = B.reshape(-1)
    sched = SkewTileSchedule(SKEW, (tile, tile))
    swaps, events, logs = [], [], []
    rounds = 0
    k0 = 0
    no_log = np.empty((0, 3), dtype=np.int64)
    while k0 < n - 1:
        domain = gaussj_domain(n, k0)
        plan = wavefronts(domain, sched)
        ctl = SpecController(progress_init=np.arange(n))
        log = np.empty((domain.size() + n, 3), dtype=np.int64) if trace else no_log
        seq = np.zeros(1, dtype=np.int64)

        def body(t, widx, worker, k0=k0, ctl=ctl, log=log, seq=seq):
            hit = _tile(A, bv, n, k0, t[0], t[1], tile, tile, ctl.failed_cell, ctl.progress, log, seq)
            if hit >= 0:
                ctl.report_misspeculation(hit, widx)

        status = execute_wavefronts(plan, cfg, ctl, body)
        events.extend(ctl.events)
        if status.completed:
            if trace:
                logs.append(log[:seq[0]].copy())
            break
        f = status.failed_at
        _drain(A, bv, n, k0, f, ctl.progress, log, seq)
        if trace:
            logs.append(log[:seq[0]].copy())
        m = _pivot(A, bv, n, f)
        if m < 0:
            raise SingularMatrixError(f)
        swaps.append((f, int(m)))
        rounds += 1
        k0 = f
    return GaussjResult(
        DenseMatrix(A), DenseMatrix(B), swaps, rounds, events,
        np.concatenate(logs) if trace and logs else (no_log.copy() if trace else None),
    )
