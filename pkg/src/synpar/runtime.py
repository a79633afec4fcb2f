"""Shared-memory worker pool: parallel loops, wavefront execution with
barriers, reduction slots and the speculation controller.

Workers are Python threads; the heavy lifting happens in numba functions
compiled with ``nogil=True``, so tile bodies and loop blocks run truly in
parallel while the pool only handles distribution and synchronization.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from . import _atomics as at

UNSET = np.iinfo(np.int64).max


class Strategy(str, enum.Enum):
    SERIAL = "serial"
    LOCKED = "locked"
    ATOMIC = "atomic"
    PRIVATIZED = "privatized"
    CRITICAL = "critical"  # compare-and-update under a lock (argmax kernel)

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ExecConfig:
    threads: int = 1
    deterministic: bool = True

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


def _run_workers(nworkers: int, target):
    """Run ``target(worker)`` on ``nworkers`` threads; re-raise the first error after all join."""
    errors = []

    def wrap(w):
        try:
            target(w)
        except BaseException as exc:  # noqa: BLE001 - re-raised below
            errors.append((w, exc))

    threads = [threading.Thread(target=wrap, args=(w,), name=f"synpar-worker-{w}") for w in range(nworkers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        errors.sort(key=lambda e: e[0])
        raise errors[0][1]


def static_block(lo: int, hi: int, nworkers: int, worker: int) -> tuple[int, int]:
    n = hi - lo
    return lo + (n * worker) // nworkers, lo + (n * (worker + 1)) // nworkers


class _Chunker:
    def __init__(self, lo, hi, chunk):
        self.lo, self.hi, self.chunk = lo, hi, chunk
        self._next = itertools.count(lo, chunk)
        self._lock = threading.Lock()

    def take(self):
        with self._lock:
            start = next(self._next)
        if start >= self.hi:
            return None
        return start, min(start + self.chunk, self.hi)


def parallel_blocks(rng, cfg: ExecConfig, body, chunk: int | None = None):
    """Call ``body(lo, hi, worker)`` over sub-ranges covering ``rng`` once.

    Deterministic configs hand worker ``w`` the ``w``-th contiguous block;
    otherwise workers pull dynamic chunks.
    """
    r = rng if isinstance(rng, range) else range(*rng) if isinstance(rng, tuple) else range(rng)
    if r.step != 1:
        raise ValueError("parallel_blocks needs a unit-stride range")
    lo, hi = r.start, max(r.start, r.stop)
    if hi == lo:
        return
    nworkers = min(cfg.threads, hi - lo)
    if nworkers == 1:
        body(lo, hi, 0)
        return
    if cfg.deterministic:
        _run_workers(nworkers, lambda w: body(*static_block(lo, hi, nworkers, w), w))
        return
    chunker = _Chunker(lo, hi, chunk or max(1, (hi - lo) // (8 * nworkers)))

    def work(w):
        while (span := chunker.take()) is not None:
            body(span[0], span[1], w)

    _run_workers(nworkers, work)


def parallel_for(rng, cfg: ExecConfig, body):
    """Call ``body(index, worker)`` exactly once per index of ``rng``."""

    def block(lo, hi, w):
        for idx in range(lo, hi):
            body(idx, w)

    parallel_blocks(rng, cfg, block)


# -- speculation ---------------------------------------------------------------


@dataclass(frozen=True)
class Misspeculation:
    step: int
    wavefront: int


class SpecController:
    """Shared misspeculation state for one speculative execution round.

    ``failed_cell[0]`` holds the smallest offending step (``UNSET`` if none)
    and is readable from nogil code; ``progress[k]`` is the last completed
    inner index of step ``k``.
    """

    def __init__(self, steps: int = 0, progress_init=None):
        self.failed_cell = np.full(1, UNSET, dtype=np.int64)
        self.events: list[Misspeculation] = []
        self._lock = threading.Lock()
        if progress_init is None:
            progress_init = np.full(steps, -1, dtype=np.int64)
        self.progress = np.asarray(progress_init, dtype=np.int64).copy()

    @property
    def failed_at(self) -> int | None:
        v = int(at.atomic_load(self.failed_cell, 0))
        return None if v == UNSET else v

    def report_misspeculation(self, step: int, wavefront: int):
        at.atomic_min_i64(self.failed_cell, 0, int(step))
        with self._lock:
            self.events.append(Misspeculation(int(step), int(wavefront)))


@dataclass(frozen=True)
class ExecStatus:
    completed: bool
    failed_at: int | None = None
    failed_wavefront: int | None = None
    wavefronts_run: int = 0


def execute_wavefronts(plan, cfg: ExecConfig, ctl: SpecController | None, tile_body) -> ExecStatus:
    """Run ``tile_body(tile, wavefront, worker)`` over every tile of ``plan``.

    Wavefronts execute in order with a full barrier between them. If ``ctl``
    records a misspeculation, the current wavefront is completed and the
    remaining ones are skipped.
    """
    waves = plan.wavefronts if hasattr(plan, "wavefronts") else plan
    if not waves:
        return ExecStatus(True)
    nworkers = min(cfg.threads, max(len(w) for w in waves))

    if nworkers == 1:
        for widx, wave in enumerate(waves):
            for tile in wave:
                tile_body(tile, widx, 0)
            if ctl is not None and ctl.failed_at is not None:
                return ExecStatus(False, ctl.failed_at, widx, widx + 1)
        return ExecStatus(True, wavefronts_run=len(waves))

    state = {"widx": 0, "stop": False, "error": None, "failed_wf": None}
    err_lock = threading.Lock()
    chunkers = {}

    def between_wavefronts():
        # Runs on exactly one thread while all others are parked at the barrier.
        try:
            advance()
        except BaseException as exc:  # noqa: BLE001 - a broken barrier would hide it
            state["error"] = state["error"] or exc
            state["stop"] = True

    def advance():
        w = state["widx"]
        if state["error"] is not None:
            state["stop"] = True
        elif ctl is not None and ctl.failed_at is not None:
            state["stop"] = True
            state["failed_wf"] = w
        state["widx"] = w + 1
        if state["widx"] >= len(waves):
            state["stop"] = True
        elif not cfg.deterministic:
            nxt = waves[state["widx"]]
            chunkers[state["widx"]] = _Chunker(0, len(nxt), 1)

    barrier = threading.Barrier(nworkers, action=between_wavefronts)
    if not cfg.deterministic:
        chunkers[0] = _Chunker(0, len(waves[0]), 1)

    def run_tile(tile, widx, w):
        try:
            tile_body(tile, widx, w)
        except BaseException as exc:  # noqa: BLE001 - propagated after the barrier
            with err_lock:
                if state["error"] is None:
                    state["error"] = exc
            return False
        return True

    def worker(w):
        while not state["stop"]:
            widx = state["widx"]
            wave = waves[widx]
            if cfg.deterministic:
                lo, hi = static_block(0, len(wave), nworkers, w)
                for t in range(lo, hi):
                    if not run_tile(wave[t], widx, w):
                        break
            else:
                ch = chunkers[widx]
                while (span := ch.take()) is not None:
                    if not run_tile(wave[span[0]], widx, w):
                        break
            barrier.wait()

    _run_workers(nworkers, worker)
    if state["error"] is not None:
        raise state["error"]
    if state["failed_wf"] is not None:
        return ExecStatus(False, ctl.failed_at, state["failed_wf"], state["failed_wf"] + 1)
    return ExecStatus(True, wavefronts_run=len(waves))


# -- reductions ----------------------------------------------------------------


class ReductionSlots:
    """Accumulation target of ``length x components`` float64 values.

    ``serial``, ``locked`` and ``atomic`` write straight into ``base``;
    ``privatized`` keeps one buffer per worker and adds them into ``base``
    on :meth:`finalize`, in ascending worker order.
    """

    def __init__(self, strategy, base: np.ndarray, workers: int = 1, stripes: int = 1024):
        self.strategy = Strategy(strategy)
        if self.strategy is Strategy.CRITICAL:
            raise ValueError("critical sections are not a reduction-slot strategy")
        if base.dtype != np.float64 or not base.flags.c_contiguous:
            raise ValueError("base must be a C-contiguous float64 array")
        self.base = base
        self.flat = base.reshape(-1)
        self.components = base.shape[1] if base.ndim == 2 else 1
        self.length = self.flat.size // self.components
        self.workers = workers
        self.bits = at.int64_view(base) if self.strategy is Strategy.ATOMIC else None
        self.locks = np.zeros(stripes, dtype=np.int64) if self.strategy is Strategy.LOCKED else None
        self.private = (
            np.zeros((workers, self.flat.size)) if self.strategy is Strategy.PRIVATIZED else None
        )

    def add(self, worker: int, slot: int, component: int, value: float):
        if not (0 <= slot < self.length and 0 <= component < self.components):
            raise IndexError(f"slot ({slot}, {component}) outside {self.length}x{self.components}")
        if not 0 <= worker < self.workers:
            raise IndexError(f"worker {worker} outside [0, {self.workers})")
        cell = slot * self.components + component
        s = self.strategy
        if s is Strategy.SERIAL:
            self.flat[cell] += value
        elif s is Strategy.LOCKED:
            at.locked_add_f64(self.flat, self.locks, slot, cell, float(value))
        elif s is Strategy.ATOMIC:
            at.atomic_add_f64(self.bits, cell, float(value))
        else:
            self.private[worker, cell] += value

    def finalize(self, base: np.ndarray | None = None):
        target = self.flat if base is None else base.reshape(-1)
        if target.size != self.flat.size:
            raise ValueError(f"base holds {target.size} values, slots hold {self.flat.size}")
        if self.strategy is not Strategy.PRIVATIZED:
            return  # updates already landed in base
        for w in range(self.workers):
            target += self.private[w]
        self.private[:] = 0.0


def slots_add(s: ReductionSlots, worker: int, slot: int, component: int, value: float):
    s.add(worker, slot, component, value)


def slots_finalize(s: ReductionSlots, base: np.ndarray | None = None):
    s.finalize(base)
