"""Matrix Market reader/writer for real dense ingestion.

Supported headers: ``%%MatrixMarket matrix <coordinate|array>
<real|integer|pattern> <general|symmetric>``. Coordinate entries are 1-based
and scattered into a zero matrix; symmetric entries are mirrored. Duplicate
coordinates are rejected rather than summed.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .containers import DenseMatrix

_FORMATS = ("coordinate", "array")
_FIELDS = ("real", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric")


class MatrixMarketError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _data_lines(lines, start):
    """Yield (lineno, tokens) for non-blank, non-comment lines."""
    for lineno, line in enumerate(lines, start=start):
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        yield lineno, s.split()


def _number(tok, field, lineno):
    try:
        return float(int(tok)) if field == "integer" else float(tok)
    except ValueError:
        raise MatrixMarketError(lineno, f"bad {field} value {tok!r}") from None


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise MatrixMarketError(lineno, f"expected an integer, got {tok!r}") from None


def parse_matrix_market(stream, max_elements: int | None = None) -> DenseMatrix:
    """Parse a Matrix Market text stream into a dense matrix.

    ``max_elements`` guards against densifying huge inputs.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = stream.read().splitlines()
    if not lines:
        raise MatrixMarketError(1, "empty input")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "%%MatrixMarket" or head[1].lower() != "matrix":
        raise MatrixMarketError(1, f"unknown header {lines[0]!r}")
    fmt, field, sym = (h.lower() for h in head[2:])
    if fmt not in _FORMATS or field not in _FIELDS or sym not in _SYMMETRIES:
        raise MatrixMarketError(1, f"unsupported header {lines[0]!r}")
    if fmt == "array" and field == "pattern":
        raise MatrixMarketError(1, "array format cannot be pattern")

    body = _data_lines(lines[1:], start=2)
    try:
        lineno, size = next(body)
    except StopIteration:
        raise MatrixMarketError(len(lines) + 1, "missing size line") from None
    want = 3 if fmt == "coordinate" else 2
    if len(size) != want:
        raise MatrixMarketError(lineno, f"size line needs {want} integers")
    rows, cols = _int(size[0], lineno), _int(size[1], lineno)
    if rows < 0 or cols < 0:
        raise MatrixMarketError(lineno, "negative dimension")
    if sym == "symmetric" and rows != cols:
        raise MatrixMarketError(lineno, "symmetric matrix must be square")
    if max_elements is not None and rows * cols > max_elements:
        raise MatrixMarketError(lineno, f"{rows}x{cols} exceeds the dense size guard")
    out = np.zeros((rows, cols))

    if fmt == "array":
        # Column-major; symmetric arrays list the lower triangle only.
        if sym == "general":
            positions = [(i, j) for j in range(cols) for i in range(rows)]
        else:
            positions = [(i, j) for j in range(cols) for i in range(j, rows)]
        for i, j in positions:
            try:
                lineno, toks = next(body)
            except StopIteration:
                raise MatrixMarketError(len(lines) + 1, "truncated body") from None
            if len(toks) != 1:
                raise MatrixMarketError(lineno, "array entries hold one value per line")
            out[i, j] = _number(toks[0], field, lineno)
            if sym == "symmetric":
                out[j, i] = out[i, j]
        _expect_end(body)
        return DenseMatrix(out)

    nnz = _int(size[2], lineno)
    seen = set()
    nvals = 2 if field == "pattern" else 3
    for _ in range(nnz):
        try:
            lineno, toks = next(body)
        except StopIteration:
            raise MatrixMarketError(len(lines) + 1, "truncated body") from None
        if len(toks) != nvals:
            raise MatrixMarketError(lineno, f"expected {nvals} fields, got {len(toks)}")
        i, j = _int(toks[0], lineno) - 1, _int(toks[1], lineno) - 1
        if not (0 <= i < rows and 0 <= j < cols):
            raise MatrixMarketError(lineno, f"index ({i + 1}, {j + 1}) outside {rows}x{cols}")
        key = (min(i, j), max(i, j)) if sym == "symmetric" else (i, j)
        if key in seen:
            raise MatrixMarketError(lineno, f"duplicate entry ({i + 1}, {j + 1})")
        seen.add(key)
        val = 1.0 if field == "pattern" else _number(toks[2], field, lineno)
        out[i, j] = val
        if sym == "symmetric":
            out[j, i] = val
    _expect_end(body)
    return DenseMatrix(out)


def _expect_end(body):
    for lineno, _ in body:
        raise MatrixMarketError(lineno, "unexpected data after the last entry")


def read_matrix_market(path, max_elements: int | None = None) -> DenseMatrix:
    with open(Path(path)) as fh:
        return parse_matrix_market(fh, max_elements=max_elements)


def emit_matrix_market(m: DenseMatrix, stream=None, fmt: str = "array") -> str:
    """Write ``m`` as general real Matrix Market text.

    Values use ``repr`` so parsing the output back is exact. ``fmt`` picks
    ``array`` (every value) or ``coordinate`` (nonzeros only).
    """
    rows, cols = m.shape
    out = [f"%%MatrixMarket matrix {fmt} real general"]
    if fmt == "array":
        out.append(f"{rows} {cols}")
        out.extend(repr(float(m.data[i, j])) for j in range(cols) for i in range(rows))
    elif fmt == "coordinate":
        nz = np.argwhere(m.data != 0)
        out.append(f"{rows} {cols} {len(nz)}")
        out.extend(f"{i + 1} {j + 1} {float(m.data[i, j])!r}" for i, j in nz)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    text = "\n".join(out) + "\n"
    if stream is not None:
        stream.write(text)
    return text
