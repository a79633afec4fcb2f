"""Matrix containers, integer division helpers, generators and Matrix Market I/O."""

from .containers import BlockSparseSym, ComplexSplitMatrix, DenseMatrix
from .intdiv import ceild, floord
from .matrix_market import MatrixMarketError, emit_matrix_market, parse_matrix_market, read_matrix_market
from .rng import Rng
from .generators import (
    gen_block_sparse,
    gen_complex_random,
    gen_multi_zero_pivot,
    gen_random_dense,
    gen_spd,
    gen_zero_pivot,
)

__all__ = [
    "BlockSparseSym",
    "ComplexSplitMatrix",
    "DenseMatrix",
    "MatrixMarketError",
    "Rng",
    "ceild",
    "emit_matrix_market",
    "floord",
    "gen_block_sparse",
    "gen_complex_random",
    "gen_multi_zero_pivot",
    "gen_random_dense",
    "gen_spd",
    "gen_zero_pivot",
    "parse_matrix_market",
    "read_matrix_market",
]
