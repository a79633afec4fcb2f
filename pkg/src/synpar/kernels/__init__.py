from .argmax import ArgmaxInput, argmax_update_parallel, argmax_update_serial, gen_argmax
from .gaussj import GaussjResult, SingularMatrixError, gaussj_serial, gaussj_speculative
from .givens import givens_serial, givens_tiled
from .smvp import SmvpInput, max_rel_err, row_scale, smvp_parallel, smvp_serial

__all__ = [
    "ArgmaxInput",
    "GaussjResult",
    "SingularMatrixError",
    "SmvpInput",
    "argmax_update_parallel",
    "argmax_update_serial",
    "gaussj_serial",
    "gaussj_speculative",
    "gen_argmax",
    "givens_serial",
    "givens_tiled",
    "max_rel_err",
    "row_scale",
    "smvp_parallel",
    "smvp_serial",
]
