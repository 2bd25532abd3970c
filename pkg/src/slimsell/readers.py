"""Text ingestion: whitespace edge lists and MatrixMarket coordinate files."""
from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import scipy.io

from .graph import Graph

SYMMETRIZE = "symmetrize"
REJECT_ASYMMETRIC = "reject-asymmetric"

_MAX_ID = np.iinfo(np.int64).max - 1


class GraphFormatError(ValueError):
    """Malformed input. ``lineno`` is 1-based when known."""

    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


class VertexRangeError(GraphFormatError):
    pass


class UnsupportedFormatError(GraphFormatError):
    pass


def _parse_uint(tok, lineno):
    try:
        val = int(tok)
    except ValueError:
        raise GraphFormatError(f"expected unsigned integer, got {tok!r}", lineno) from None
    if val < 0:
        raise GraphFormatError(f"negative vertex ID {val}", lineno)
    if val > _MAX_ID:
        raise VertexRangeError(f"vertex ID {val} overflows int64", lineno)
    return val


def from_edge_list(text: str, directive: str = SYMMETRIZE) -> Graph:
    """Parse ``u v`` records, one per line.

    Lines starting with ``#`` or ``%`` are comments. An optional first record
    ``H n m`` fixes the vertex count (needed for isolated trailing vertices);
    otherwise ``n = 1 + max ID``. ``m`` in the header is informational only,
    since normalization may merge records.

    With ``directive="reject-asymmetric"`` the records are read as directed
    arcs and every non-loop arc must have its reverse present.
    """
    if directive not in (SYMMETRIZE, REJECT_ASYMMETRIC):
        raise ValueError(f"unknown directive {directive!r}")
    n_header = None
    pairs = []
    seen_record = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        toks = line.split()
        if toks[0] == "H":
            if seen_record or n_header is not None:
                raise GraphFormatError("header must precede all edge records", lineno)
            if len(toks) not in (2, 3):
                raise GraphFormatError("header must be 'H n [m]'", lineno)
            n_header = _parse_uint(toks[1], lineno)
            if len(toks) == 3:
                _parse_uint(toks[2], lineno)
            continue
        if len(toks) != 2:
            raise GraphFormatError(f"expected 2 fields, got {len(toks)}", lineno)
        u, v = _parse_uint(toks[0], lineno), _parse_uint(toks[1], lineno)
        if n_header is not None and max(u, v) >= n_header:
            raise VertexRangeError(f"vertex ID {max(u, v)} >= header n={n_header}", lineno)
        pairs.append((u, v))
        seen_record = True

    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    n = n_header if n_header is not None else (int(arr.max()) + 1 if len(arr) else 0)
    if directive == REJECT_ASYMMETRIC:
        _check_symmetric(arr)
    return Graph.from_pairs(n, arr)


def _check_symmetric(arcs):
    arcs = arcs[arcs[:, 0] != arcs[:, 1]]
    if not len(arcs):
        return
    fwd = {(int(u), int(v)) for u, v in arcs}
    missing = [(u, v) for (u, v) in fwd if (v, u) not in fwd]
    if missing:
        u, v = min(missing)
        raise GraphFormatError(f"asymmetric input: arc ({u}, {v}) has no reverse")


def from_matrix_market(text: str) -> Graph:
    """Read a MatrixMarket coordinate matrix (pattern/real/integer, general/symmetric).

    Indices are converted to 0-based; nonzero values are ignored, and the
    structure is symmetrized and normalized like :func:`from_edge_list`.
    """
    first = text.lstrip().split("\n", 1)[0].split()
    if len(first) < 5 or first[0].lower() != "%%matrixmarket":
        raise GraphFormatError("missing %%MatrixMarket banner", 1)
    if first[1].lower() != "matrix" or first[2].lower() != "coordinate":
        raise UnsupportedFormatError(f"only 'matrix coordinate' is supported, got {' '.join(first[1:3])!r}")
    try:
        mat = scipy.io.mmread(io.StringIO(text))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    rows, cols = mat.shape
    if rows != cols:
        raise GraphFormatError(f"adjacency matrix must be square, got {rows}x{cols}")
    coo = mat.tocoo()
    return Graph.from_pairs(rows, np.column_stack([coo.row, coo.col]))


def load_graph(path) -> Graph:
    """Load from disk, choosing the parser by content (MatrixMarket banner) or suffix."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".mtx" or text.lstrip().lower().startswith("%%matrixmarket"):
        return from_matrix_market(text)
    return from_edge_list(text)
