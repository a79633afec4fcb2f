from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class DenseMatrix:
    """Row-major float64 matrix.

    ``data`` is always a C-contiguous 2-D array; disjoint row ranges may be
    written concurrently by the runtime.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(-1, 1)
        if data.ndim != 2:
            raise ValueError(f"DenseMatrix needs a 2-D array, got ndim={data.ndim}")
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DenseMatrix:
        return cls(np.zeros((rows, cols)))

    @classmethod
    def from_rows(cls, rows) -> DenseMatrix:
        return cls(np.array(rows, dtype=np.float64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def finite(self) -> bool:
        return bool(np.isfinite(self.data).all())

    def copy(self) -> DenseMatrix:
        return DenseMatrix(self.data.copy())

    def bitwise_equal(self, other: DenseMatrix) -> bool:
        """Compare bit patterns, so NaNs with equal payloads and signed zeros count."""
        if self.shape != other.shape:
            return False
        return bool(np.array_equal(self.data.view(np.int64), other.data.view(np.int64)))

    def __getitem__(self, key):
        return self.data[key]

    def __setitem__(self, key, value):
        self.data[key] = value

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols})"


@dataclass(eq=False)
class ComplexSplitMatrix:
    """Complex matrix stored as separate real and imaginary parts."""

    re: DenseMatrix
    im: DenseMatrix

    def __post_init__(self):
        if not isinstance(self.re, DenseMatrix):
            self.re = DenseMatrix(self.re)
        if not isinstance(self.im, DenseMatrix):
            self.im = DenseMatrix(self.im)
        if self.re.shape != self.im.shape:
            raise ValueError(f"re/im shape mismatch: {self.re.shape} vs {self.im.shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.re.shape

    def copy(self) -> ComplexSplitMatrix:
        return ComplexSplitMatrix(self.re.copy(), self.im.copy())

    def bitwise_equal(self, other: ComplexSplitMatrix) -> bool:
        return self.re.bitwise_equal(other.re) and self.im.bitwise_equal(other.im)

    def to_complex(self) -> np.ndarray:
        return self.re.data + 1j * self.im.data


@dataclass(eq=False)
class BlockSparseSym:
    """Symmetric block-sparse matrix, upper triangle stored row by row.

    Row ``i`` owns entries ``row_ptr[i]:row_ptr[i+1]``; the first of them is
    the diagonal block, the rest have ``col_idx > i``. ``blocks`` has shape
    ``(nnz, block, block)``.
    """

    n: int
    block: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    blocks: np.ndarray

    def __post_init__(self):
        self.row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(self.col_idx, dtype=np.int64)
        self.blocks = np.ascontiguousarray(self.blocks, dtype=np.float64)
        self.validate()

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1]) if self.n else 0

    def validate(self):
        n, B = self.n, self.block
        rp, ci = self.row_ptr, self.col_idx
        if B < 1:
            raise ValueError(f"block size must be >= 1, got {B}")
        if rp.shape != (n + 1,):
            raise ValueError(f"row_ptr must have length n+1={n + 1}, got {rp.shape}")
        if rp[0] != 0 or np.any(np.diff(rp) < 0) or rp[n] != ci.size:
            raise ValueError("row_ptr must start at 0, be nondecreasing and end at nnz")
        if self.blocks.shape != (ci.size, B, B):
            raise ValueError(f"blocks must have shape {(ci.size, B, B)}, got {self.blocks.shape}")
        for i in range(n):
            lo, hi = rp[i], rp[i + 1]
            if hi == lo or ci[lo] != i:
                raise ValueError(f"row {i}: first entry must be the diagonal block")
            if hi - lo > 1 and np.any(ci[lo + 1:hi] <= i):
                raise ValueError(f"row {i}: off-diagonal columns must exceed the row index")
            if np.any(ci[lo + 1:hi] >= n):
                raise ValueError(f"row {i}: column index out of range")

    def to_dense(self) -> np.ndarray:
        """Expand to the full symmetric ``(n*B, n*B)`` array (testing aid)."""
        n, B = self.n, self.block
        out = np.zeros((n * B, n * B))
        for i in range(n):
            for e in range(self.row_ptr[i], self.row_ptr[i + 1]):
                c = self.col_idx[e]
                blk = self.blocks[e]
                out[i * B:(i + 1) * B, c * B:(c + 1) * B] = blk
                if c != i:
                    out[c * B:(c + 1) * B, i * B:(i + 1) * B] = blk.T
        return out
