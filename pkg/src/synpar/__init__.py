"""Static skew+tile scheduling combined with dynamic reductions and speculation.

Subpackages: ``numerics`` (containers, generators, Matrix Market),
``schedule`` (dependence legality and wavefront plans), ``runtime``
(worker pool, reduction slots, speculation control), ``kernels``,
``adaptive`` and ``bench`` (CLI harness).
"""

__version__ = "0.1.0"
