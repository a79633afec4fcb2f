"""Symmetric block-sparse matrix-vector product with a scatter reduction.

For each stored off-diagonal block ``M`` at ``(i, col)`` the row gathers
``M @ v[col]`` into a private accumulator and scatters ``M.T @ v[i]`` into
``w[col]``. ``col`` comes from the data, so scatters from different rows
may collide; the parallel version routes every write to ``w`` through a
:class:`ReductionSlots` strategy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .. import _atomics as at
from ..numerics import BlockSparseSym, DenseMatrix
from ..runtime import ExecConfig, ReductionSlots, Strategy, parallel_blocks

_MODES = {Strategy.SERIAL: 0, Strategy.LOCKED: 1, Strategy.ATOMIC: 2, Strategy.PRIVATIZED: 3}
_EMPTY_I = np.zeros(1, dtype=np.int64)
_EMPTY_F = np.zeros(1)


@dataclass
class SmvpInput:
    matrix: BlockSparseSym
    v: DenseMatrix
    w: DenseMatrix

    def __post_init__(self):
        shape = (self.matrix.n, self.matrix.block)
        if self.v.shape != shape or self.w.shape != shape:
            raise ValueError(f"v and w must be {shape}, got {self.v.shape} and {self.w.shape}")

    def copy(self) -> SmvpInput:
        return SmvpInput(self.matrix, self.v, self.w.copy())


@njit(nogil=True, cache=True, inline="always")
def _emit(mode, w, wbits, locks, priv, slot, cell, value):
    if mode == 0:
        w[cell] += value
    elif mode == 1:
        at.locked_add_f64(w, locks, slot, cell, value)
    elif mode == 2:
        at.atomic_add_f64(wbits, cell, value)
    else:
        priv[cell] += value


@njit(nogil=True, cache=True)
def _rows(row_ptr, col_idx, blocks, v, w, lo, hi, mode, wbits, locks, priv):
    B = v.shape[1]
    sum0 = np.empty(B)
    for i in range(lo, hi):
        d = row_ptr[i]
        for c in range(B):
            acc = blocks[d, c, 0] * v[i, 0]
            for r in range(1, B):
                acc = acc + blocks[d, c, r] * v[i, r]
            sum0[c] = acc
        for e in range(row_ptr[i] + 1, row_ptr[i + 1]):
            col = col_idx[e]
            for c in range(B):
                t = blocks[e, c, 0] * v[col, 0]
                for r in range(1, B):
                    t = t + blocks[e, c, r] * v[col, r]
                sum0[c] += t
            # sparse reduction
            for c in range(B):
                t = blocks[e, 0, c] * v[i, 0]
                for r in range(1, B):
                    t = t + blocks[e, r, c] * v[i, r]
                _emit(mode, w, wbits, locks, priv, col, col * B + c, t)
        for c in range(B):
            if mode == 3:
                w[i * B + c] += sum0[c]  # row i is owned by this worker's base slice
            else:
                _emit(mode, w, wbits, locks, priv, i, i * B + c, sum0[c])


def smvp_serial(inp: SmvpInput):
    """``w += A v`` in place, rows ascending, scatter after gather per entry."""
    m = inp.matrix
    _rows(m.row_ptr, m.col_idx, m.blocks, inp.v.data, inp.w.data.reshape(-1), 0, m.n, 0,
          _EMPTY_I, _EMPTY_I, _EMPTY_F)


def smvp_parallel(inp: SmvpInput, strategy, cfg: ExecConfig):
    strategy = Strategy(strategy)
    if strategy not in _MODES:
        raise ValueError(f"{strategy} is not a reduction strategy")
    if strategy is Strategy.SERIAL and cfg.threads > 1:
        raise ValueError("the serial strategy cannot run with more than one thread")
    m = inp.matrix
    slots = ReductionSlots(strategy, inp.w.data, workers=cfg.threads)
    mode = _MODES[strategy]
    wflat = slots.flat
    bits = slots.bits if slots.bits is not None else _EMPTY_I
    locks = slots.locks if slots.locks is not None else _EMPTY_I

    def block(lo, hi, worker):
        priv = slots.private[worker] if slots.private is not None else _EMPTY_F
        _rows(m.row_ptr, m.col_idx, m.blocks, inp.v.data, wflat, lo, hi, mode, bits, locks, priv)

    parallel_blocks(range(m.n), cfg, block)
    slots.finalize()


def row_scale(inp: SmvpInput, w0: np.ndarray) -> np.ndarray:
    """Per-entry magnitude ``|w0| + |A| |v|`` used to scale rounding-error checks."""
    m = inp.matrix
    absm = BlockSparseSym(m.n, m.block, m.row_ptr, m.col_idx, np.abs(m.blocks))
    out = np.abs(w0).copy()
    smvp_serial(SmvpInput(absm, DenseMatrix(np.abs(inp.v.data)), DenseMatrix(out)))
    return out


def max_rel_err(result: np.ndarray, reference: np.ndarray, scale: np.ndarray) -> float:
    diff = np.abs(result - reference)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, diff / scale, np.where(diff > 0, np.inf, 0.0))
    return float(rel.max()) if rel.size else 0.0
