import math

import numpy as np

from ..common import DimensionMismatch, Rng
from ._formats import FORMATS, CooMatrix, CsrMatrix, SparseMatrix, _canonical


def convert(m, target):
    """Convert ``m`` to the format named by ``target`` (one of ``FORMATS``)."""
    if not isinstance(m, SparseMatrix):
        raise TypeError("convert expects a sparse matrix")
    return m.asformat(target)


def spmv(m, x):
    """``y = m @ x`` for a CSR matrix and a dense vector."""
    if not isinstance(m, CsrMatrix):
        m = m.tocsr()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != m.shape[1]:
        raise DimensionMismatch(f"vector of length {x.size} does not match {m.shape[1]} columns")
    rows = m._major_ids()
    return np.bincount(rows, weights=m.values * x[m.indices], minlength=m.shape[0])


def spmm(a, b):
    """Sparse product of two CSR matrices, returned as canonical CSR.

    Entries that cancel to zero numerically remain stored; call
    ``eliminate_zeros`` to drop them.
    """
    if not isinstance(a, CsrMatrix):
        a = a.tocsr()
    if not isinstance(b, CsrMatrix):
        b = b.tocsr()
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    # every stored a[i, k] pairs with the whole of row k of b
    b_row_len = np.diff(b.indptr)
    counts = b_row_len[a.indices]
    total = int(counts.sum())
    first = np.cumsum(counts) - counts
    offset = np.arange(total) - np.repeat(first, counts)
    pos = np.repeat(b.indptr[:-1][a.indices], counts) + offset
    rows = np.repeat(a._major_ids(), counts)
    cols = b.indices[pos]
    vals = np.repeat(a.values, counts) * b.values[pos]
    indptr, indices, values = _canonical(rows, cols, vals, a.shape[0])
    return CsrMatrix._trusted(indptr, indices, values, (a.shape[0], b.shape[1]))


def norm(m, kind="fro"):
    """Matrix norm: ``"fro"`` (Frobenius), ``"one"`` (max column abs-sum) or
    ``"inf"`` (max row abs-sum)."""
    if kind not in ("fro", "one", "inf"):
        raise ValueError(f"unknown norm kind {kind!r}")
    csr = m.tocsr()
    if kind == "fro":
        return float(math.sqrt(np.sum(csr.values**2)))
    if csr.nnz == 0:
        return 0.0
    absval = np.abs(csr.values)
    if kind == "inf":
        sums = np.bincount(csr._major_ids(), weights=absval, minlength=csr.shape[0])
    else:
        sums = np.bincount(csr.indices, weights=absval, minlength=csr.shape[1])
    return float(sums.max())


def _uniform_sampler(rng, size):
    return rng.uniform(0.0, 1.0, size)


def random(shape, density=0.01, rng=None, sampler=None):
    """Random COO matrix with exactly ``round(density * rows * cols)`` entries.

    Positions are drawn uniformly without replacement (half-up rounding of the
    target count); values come from ``sampler(rng, size)``, uniform on [0, 1)
    by default.
    """
    rows, cols = (int(s) for s in shape)
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    if rng is None:
        rng = Rng(0)
    sampler = sampler or _uniform_sampler
    total = rows * cols
    k = min(total, int(math.floor(density * total + 0.5)))
    pos = np.sort(rng.choice_without_replacement(total, k)) if k else np.zeros(0, dtype=np.int64)
    values = np.asarray(sampler(rng, k), dtype=np.float64).reshape(-1)
    if values.size != k:
        raise ValueError("sampler returned the wrong number of values")
    return CooMatrix(pos // cols if cols else pos, pos % cols if cols else pos, values, (rows, cols))


def eye(n, fmt="csr"):
    idx = np.arange(n)
    return CooMatrix(idx, idx, np.ones(n), (n, n)).asformat(fmt)


__all__ = ["FORMATS", "convert", "spmv", "spmm", "norm", "random", "eye"]
