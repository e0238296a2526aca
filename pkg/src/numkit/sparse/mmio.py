"""Matrix Market coordinate-format reader and writer.

Only the ``matrix coordinate`` layout is supported.  The writer always emits
``real general`` with 17 significant digits, which round-trips float64 values
exactly.  The reader also accepts ``integer`` fields and ``symmetric`` /
``skew-symmetric`` storage (expanded on read).
"""

import io
import os

import numpy as np

from ..common import StructuralError
from ._formats import CooMatrix

HEADER = "%%MatrixMarket matrix coordinate real general"


def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        return open(target, mode, encoding="ascii"), True
    return target, False


def mmwrite(target, m, comment=None):
    """Write a sparse matrix (any format) in coordinate form."""
    coo = m.tocoo()
    fh, owned = _open(target, "w")
    try:
        fh.write(HEADER + "\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        rows, cols = coo.shape
        fh.write(f"{rows} {cols} {coo.nnz}\n")
        for i, j, v in zip(coo.rows.tolist(), coo.cols.tolist(), coo.values.tolist()):
            fh.write(f"{i + 1} {j + 1} {v:.17g}\n")
    finally:
        if owned:
            fh.close()


def mmread(source):
    """Read a coordinate Matrix Market file into a :class:`CooMatrix`."""
    fh, owned = _open(source, "r")
    try:
        text = fh.read()
    finally:
        if owned:
            fh.close()
    lines = io.StringIO(text)
    header = lines.readline().split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise StructuralError("missing %%MatrixMarket header")
    obj, layout, field, symmetry = (h.lower() for h in header[1:])
    if obj != "matrix" or layout != "coordinate":
        raise StructuralError(f"unsupported layout {obj} {layout}")
    if field not in ("real", "integer", "double"):
        raise StructuralError(f"unsupported field {field}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise StructuralError(f"unsupported symmetry {symmetry}")

    size = None
    for line in lines:
        line = line.strip()
        if line and not line.startswith("%"):
            size = line.split()
            break
    if size is None or len(size) != 3:
        raise StructuralError("missing size line")
    nrows, ncols, nnz = (int(s) for s in size)

    body = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("%")]
    if len(body) != nnz:
        raise StructuralError(f"expected {nnz} entries, found {len(body)}")
    r = np.empty(nnz, dtype=np.int64)
    c = np.empty(nnz, dtype=np.int64)
    v = np.empty(nnz)
    for k, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 3:
            raise StructuralError(f"malformed entry line: {ln.strip()!r}")
        r[k], c[k], v[k] = int(parts[0]) - 1, int(parts[1]) - 1, float(parts[2])

    if symmetry != "general":
        off = r != c
        sign = -1.0 if symmetry == "skew-symmetric" else 1.0
        r, c, v = (np.concatenate((r, c[off])), np.concatenate((c, r[off])),
                   np.concatenate((v, sign * v[off])))
    return CooMatrix(r, c, v, (nrows, ncols))
