"""Givens-rotation elimination on a complex matrix in split (re, im) storage.

Three branches per (k, i): swap rows when the lower pivot is zero, a
half rotation when the upper one is zero, and the general complex rotation.
The tiled version runs the same iteration body over a skewed (k, k+i)
space; it is valid whichever branch the data selects.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..numerics import ComplexSplitMatrix
from ..runtime import ExecConfig, execute_wavefronts
from ..schedule import SKEW, SkewTileSchedule, givens_domain, wavefronts

SWAP, HALF, FULL = 0, 1, 2


@njit(nogil=True, cache=True, inline="always")
def _iteration(Ar, Ai, N, k, i):
    if Ar[i + 1, k] == 0.0 and Ai[i + 1, k] == 0.0:
        for j in range(k, N):
            t1_r = Ar[i + 1, j]
            t1_i = Ai[i + 1, j]
            t2_r = Ar[i, j]
            t2_i = Ai[i, j]
            Ar[i, j] = t1_r
            Ai[i, j] = t1_i
            Ar[i + 1, j] = t2_r
            Ai[i + 1, j] = t2_i
        return SWAP
    elif Ar[i, k] == 0.0 and Ai[i, k] == 0.0:
        ng = math.sqrt(Ar[i + 1, k] * Ar[i + 1, k] + Ai[i + 1, k] * Ai[i + 1, k])
        s_r = Ar[i + 1, k] / ng
        s_i = -Ai[i + 1, k] / ng
        for j in range(k, N):
            t1_r = -s_r * Ar[i, j] - s_i * Ai[i, j]
            t1_i = -s_r * Ai[i, j] + s_i * Ar[i, j]
            t2_r = s_r * Ar[i + 1, j] - s_i * Ai[i + 1, j]
            t2_i = s_r * Ai[i + 1, j] + s_i * Ar[i + 1, j]
            Ar[i, j] = t1_r
            Ai[i, j] = t1_i
            Ar[i + 1, j] = t2_r
            Ai[i + 1, j] = t2_i
        return HALF
    else:
        nm = math.sqrt(Ar[i, k] * Ar[i, k] + Ai[i, k] * Ai[i, k]
                       + Ar[i + 1, k] * Ar[i + 1, k] + Ai[i + 1, k] * Ai[i + 1, k])
        nf = math.sqrt(Ar[i, k] * Ar[i, k] + Ai[i, k] * Ai[i, k])
        sig_r = Ar[i, k] / nf
        sig_i = Ai[i, k] / nf
        c_r = nf / nm
        s_r = (sig_r * Ar[i + 1, k] + sig_i * Ai[i + 1, k]) / nm
        s_i = (sig_i * Ar[i + 1, k] - sig_r * -Ai[i + 1, k]) / nm
        for j in range(k, N):
            t1_r = -s_r * Ar[i, j] - s_i * Ai[i, j] + c_r * Ar[i + 1, j]
            t1_i = -s_r * Ai[i, j] + s_i * Ar[i, j] + c_r * Ai[i + 1, j]
            t2_r = c_r * Ar[i, j] + s_r * Ar[i + 1, j] - s_i * Ai[i + 1, j]
            t2_i = c_r * Ai[i, j] + s_r * Ai[i + 1, j] + s_i * Ar[i + 1, j]
            Ar[i, j] = t1_r
            Ai[i, j] = t1_i
            Ar[i + 1, j] = t2_r
            Ai[i + 1, j] = t2_i
        return FULL


@njit(nogil=True, cache=True)
def _serial(Ar, Ai, M, N, counts):
    for k in range(N):
        for i in range(M - 1 - k):
            counts[_iteration(Ar, Ai, N, k, i)] += 1


@njit(nogil=True, cache=True)
def _tile(Ar, Ai, M, N, t0, t1, T0, T1, counts):
    # Skew (k, i) -> (k, k + i); iterate the tile's points in (k, i) order.
    for k in range(max(0, t0 * T0), min(N, t0 * T0 + T0)):
        for i in range(max(0, t1 * T1 - k), min(M - 1 - k, t1 * T1 + T1 - k)):
            counts[_iteration(Ar, Ai, N, k, i)] += 1


def _dims(A: ComplexSplitMatrix, M, N):
    rows, cols = A.shape
    M = rows if M is None else M
    N = cols if N is None else N
    if M < 2 or M > rows or N > cols:
        raise ValueError(f"need 2 <= M <= {rows} and N <= {cols}, got M={M}, N={N}")
    return M, N


def givens_serial(A: ComplexSplitMatrix, M: int | None = None, N: int | None = None) -> np.ndarray:
    """Run the kernel in place; returns how often each branch (swap, half, full) ran."""
    M, N = _dims(A, M, N)
    counts = np.zeros(3, dtype=np.int64)
    _serial(A.re.data, A.im.data, M, N, counts)
    return counts


def givens_tiled(A: ComplexSplitMatrix, M: int | None = None, N: int | None = None,
                 tile: int = 32, cfg: ExecConfig | None = None) -> np.ndarray:
    """Skewed and tiled parallel version of :func:`givens_serial`; same output bits."""
    M, N = _dims(A, M, N)
    cfg = cfg or ExecConfig()
    plan = wavefronts(givens_domain(M, N), SkewTileSchedule(SKEW, (tile, tile)))
    counts = np.zeros((cfg.threads, 3), dtype=np.int64)
    Ar, Ai = A.re.data, A.im.data

    def body(t, widx, worker):
        _tile(Ar, Ai, M, N, t[0], t[1], tile, tile, counts[worker])

    execute_wavefronts(plan, cfg, None, body)
    return counts.sum(axis=0)
