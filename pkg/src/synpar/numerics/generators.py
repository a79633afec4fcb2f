"""Deterministic input generators.

Every generator draws only from the ``Rng`` it is handed, so a fresh
``Rng(seed)`` makes the output a pure function of sizes and seed.
Dense values come from [0.5, 1.5) so that, absent planted zeros,
no pivot or Givens cold branch is ever triggered.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .containers import BlockSparseSym, ComplexSplitMatrix, DenseMatrix
from .rng import Rng

LO, HI = 0.5, 1.5


def gen_random_dense(n: int, rng: Rng) -> DenseMatrix:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return DenseMatrix(rng.uniform(LO, HI, (n, n)))


@njit(cache=True)
def _gram_plus_shift(b, shift):
    # Fixed summation order keeps the result identical across BLAS builds.
    n = b.shape[1]
    out = np.empty((n, n))
    for r in range(n):
        for c in range(r, n):
            acc = 0.0
            for t in range(b.shape[0]):
                acc += b[t, r] * b[t, c]
            out[r, c] = acc
            out[c, r] = acc
        out[r, r] += shift
    return out


def gen_spd(n: int, rng: Rng) -> DenseMatrix:
    """``B^T B + n I`` with ``B`` uniform in [0, 1); exactly symmetric."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    b = rng.random((n, n))
    return DenseMatrix(_gram_plus_shift(b, float(n)))


def gen_zero_pivot(n: int, k_plant: int, rng: Rng) -> DenseMatrix:
    """Random dense matrix whose elimination pivot at step ``k_plant`` is exactly zero.

    Row ``k_plant`` is zeroed on columns ``0..k_plant``, so every earlier
    elimination step computes a zero multiplier for it and the diagonal
    entry is still 0.0 when step ``k_plant`` begins.
    """
    if not 0 <= k_plant <= n - 2:
        raise ValueError(f"k_plant must lie in [0, {n - 2}], got {k_plant}")
    a = gen_random_dense(n, rng)
    a.data[k_plant, :k_plant + 1] = 0.0
    below = a.data[k_plant + 1:, k_plant]
    if not np.any(below != 0.0):
        below[:] = rng.uniform(LO, HI, below.size)
    return a


def gen_complex_random(m: int, n: int, rng: Rng, cold_rows=()) -> ComplexSplitMatrix:
    """Complex matrix for the Givens kernel.

    Rows listed in ``cold_rows`` get a zero in column 0, which routes some
    ``k = 0`` iteration through one of the two rarely taken branches.
    """
    if m < 2 or n < 1:
        raise ValueError(f"need m >= 2 and n >= 1, got {m}x{n}")
    cold = sorted(set(int(r) for r in cold_rows))
    if cold and (cold[0] < 0 or cold[-1] >= m):
        raise ValueError(f"cold row index out of range for m={m}: {cold}")
    re = rng.uniform(LO, HI, (m, n))
    im = rng.uniform(LO, HI, (m, n))
    for r in cold:
        re[r, 0] = 0.0
        im[r, 0] = 0.0
    return ComplexSplitMatrix(DenseMatrix(re), DenseMatrix(im))


def gen_block_sparse(n: int, avg_degree: float, block: int, rng: Rng):
    """Random symmetric block-sparse matrix and a matching ``v``.

    ``avg_degree`` is the mean number of neighbours per node in the
    symmetric graph, so about ``n * avg_degree / 2`` off-diagonal blocks are
    stored (upper triangle, no duplicates). Diagonal blocks are symmetric.

    Returns ``(matrix, v)`` with ``v`` of shape ``n x block``.
    """
    if n < 1 or avg_degree < 0 or block < 1:
        raise ValueError(f"bad sizes n={n} avg_degree={avg_degree} block={block}")
    max_pairs = n * (n - 1) // 2
    target = min(max_pairs, int(round(n * avg_degree / 2)))

    keys = np.empty(0, dtype=np.int64)
    while keys.size < target:
        need = target - keys.size
        draw = max(16, 2 * need)
        a = rng.integers(0, n, draw)
        b = rng.integers(0, n, draw)
        ok = a != b
        lo, hi = np.minimum(a, b)[ok], np.maximum(a, b)[ok]
        fresh = lo * n + hi
        # Keep first occurrences in draw order, then drop keys already taken.
        _, first = np.unique(fresh, return_index=True)
        fresh = fresh[np.sort(first)]
        fresh = fresh[~np.isin(fresh, keys)]
        keys = np.concatenate([keys, fresh[:need]])
    keys.sort()
    rows_off, cols_off = keys // n, keys % n

    counts = np.bincount(rows_off, minlength=n) + 1
    row_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    col_idx = np.empty(row_ptr[-1], dtype=np.int64)
    col_idx[row_ptr[:-1]] = np.arange(n)
    off_slot = np.ones(row_ptr[-1], dtype=bool)
    off_slot[row_ptr[:-1]] = False
    col_idx[off_slot] = cols_off  # keys are sorted by (row, col)

    blocks = rng.uniform(-1.0, 1.0, (row_ptr[-1], block, block))
    diag = blocks[row_ptr[:-1]]
    iu = np.triu_indices(block, 1)
    for d in diag:
        d[(iu[1], iu[0])] = d[iu]
    blocks[row_ptr[:-1]] = diag
    v = rng.uniform(-1.0, 1.0, (n, block))
    return BlockSparseSym(n, block, row_ptr, col_idx, blocks), DenseMatrix(v)


def gen_multi_zero_pivot(n: int, plants, rng: Rng) -> DenseMatrix:
    """Random dense matrix with rows ``plants`` zeroed up to their diagonal.

    Only the first plant is guaranteed to surface as a zero pivot; row swaps
    triggered by it may move later plants.
    """
    plants = sorted(set(int(k) for k in plants))
    if not plants:
        return gen_random_dense(n, rng)
    a = gen_zero_pivot(n, plants[0], rng)
    for k in plants[1:]:
        if not 0 <= k <= n - 2:
            raise ValueError(f"plant {k} outside [0, {n - 2}]")
        a.data[k, :k + 1] = 0.0
    return a
