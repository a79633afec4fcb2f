"""Floored and ceiled integer division, as used by tiled loop bounds.

Python's ``//`` already rounds toward negative infinity, unlike C's
truncating division, so both helpers reduce to it once ``d`` is checked.
"""

import operator


def floord(n: int, d: int) -> int:
    """Return the unique ``q`` with ``q*d <= n < (q+1)*d``."""
    n = operator.index(n)
    d = operator.index(d)
    if d <= 0:
        raise ValueError(f"floord: divisor must be positive, got {d}")
    return n // d


def ceild(n: int, d: int) -> int:
    """Return the ceiling of ``n/d``, i.e. ``-floord(-n, d)``."""
    n = operator.index(n)
    d = operator.index(d)
    if d <= 0:
        raise ValueError(f"ceild: divisor must be positive, got {d}")
    return -((-n) // d)
