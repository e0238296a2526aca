"""Point-set files.

CSV: one point per row, comma separated, ``#`` comments allowed.

Binary: a 16-byte little-endian header followed by the ``n * m`` coordinates
as row-major float64::

    bytes 0-3    magic  b"NKPT"
    bytes 4-11   n      uint64
    bytes 12-15  m      uint32
"""

import struct

import numpy as np

from ..common import StructuralError

MAGIC = b"NKPT"
_HEADER = struct.Struct("<4sQI")


def read_points_csv(path):
    pts = np.loadtxt(path, delimiter=",", comments="#", dtype=np.float64, ndmin=2)
    return pts


def write_points_csv(path, points):
    np.savetxt(path, np.asarray(points, dtype=np.float64), delimiter=",", fmt="%.17g")


def write_points_binary(path, points):
    pts = np.ascontiguousarray(points, dtype="<f8")
    if pts.ndim != 2:
        raise StructuralError("points must be a 2-D array")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, pts.shape[0], pts.shape[1]))
        fh.write(pts.tobytes())


def read_points_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise StructuralError("truncated header")
        magic, n, m = _HEADER.unpack(head)
        if magic != MAGIC:
            raise StructuralError(f"bad magic {magic!r}")
        body = fh.read()
    if len(body) != 8 * n * m:
        raise StructuralError(f"expected {8 * n * m} payload bytes, found {len(body)}")
    return np.frombuffer(body, dtype="<f8").reshape(n, m).astype(np.float64)
