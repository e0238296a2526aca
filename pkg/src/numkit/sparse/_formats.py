"""Sparse storage formats.

All formats share ``shape``, ``nnz``, ``format``, ``to_dense()`` and the
``to<fmt>()`` conversion family.  COO is the conversion hub: every format can
produce and consume COO triplets, and other conversions route through it.

CSR/CSC matrices are always canonical: within each major slice the minor
indices are strictly increasing and duplicate coordinates have been summed.
"""

import numpy as np

from ..common import StructuralError

FORMATS = ("coo", "csr", "csc", "dok", "dia")

_INDEX = np.int64


def _check_shape(shape):
    if len(shape) != 2:
        raise StructuralError("shape must be a (rows, cols) pair")
    rows, cols = (int(s) for s in shape)
    if rows < 0 or cols < 0:
        raise StructuralError("shape entries must be nonnegative")
    return rows, cols


def _as_index(a, name):
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros(0, dtype=_INDEX)
    if a.ndim != 1:
        raise StructuralError(f"{name} must be one-dimensional")
    if not np.issubdtype(a.dtype, np.integer):
        if not np.all(a == np.round(a)):
            raise StructuralError(f"{name} must contain integers")
    return a.astype(_INDEX)


def _canonical(major, minor, values, n_major):
    """Sort triplets by (major, minor), sum duplicates, build ``indptr``."""
    order = np.lexsort((minor, major))
    major, minor, values = major[order], minor[order], values[order]
    if major.size:
        change = (major[1:] != major[:-1]) | (minor[1:] != minor[:-1])
        starts = np.flatnonzero(np.concatenate(([True], change)))
        values = np.add.reduceat(values, starts)
        major, minor = major[starts], minor[starts]
    indptr = np.zeros(n_major + 1, dtype=_INDEX)
    np.cumsum(np.bincount(major, minlength=n_major), out=indptr[1:])
    return indptr, minor, values


class SparseMatrix:
    """Common behaviour of all formats."""

    format = None

    @property
    def shape(self):
        return self._shape

    @property
    def nnz(self):
        raise NotImplementedError

    def _coo_triplets(self):
        """``(rows, cols, values)`` of all stored entries."""
        raise NotImplementedError

    def tocoo(self):
        r, c, v = self._coo_triplets()
        return CooMatrix(r, c, v, self.shape)

    def tocsr(self):
        return self.tocoo().tocsr()

    def tocsc(self):
        return self.tocoo().tocsc()

    def todok(self):
        return self.tocoo().todok()

    def todia(self):
        return self.tocoo().todia()

    def asformat(self, fmt):
        if fmt not in FORMATS:
            raise ValueError(f"unknown sparse format {fmt!r}; expected one of {FORMATS}")
        if fmt == self.format:
            return self
        return getattr(self, "to" + fmt)()

    def to_dense(self):
        r, c, v = self._coo_triplets()
        out = np.zeros(self.shape)
        np.add.at(out, (r, c), v)
        return out

    def __matmul__(self, other):
        from ._ops import spmm, spmv

        if isinstance(other, SparseMatrix):
            return spmm(self.tocsr(), other.tocsr())
        other = np.asarray(other, dtype=np.float64)
        if other.ndim == 1:
            return spmv(self.tocsr(), other)
        if other.ndim == 2:
            csr = self.tocsr()
            out = np.zeros((self.shape[0], other.shape[1]))
            for j in range(other.shape[1]):
                out[:, j] = spmv(csr, other[:, j])
            return out
        return NotImplemented

    def __repr__(self):
        return f"<{self.shape[0]}x{self.shape[1]} {self.format.upper()} matrix, nnz={self.nnz}>"


class CooMatrix(SparseMatrix):
    """Coordinate list.  Duplicate coordinates are allowed and mean summation."""

    format = "coo"

    def __init__(self, rows, cols, values, shape):
        self._shape = _check_shape(shape)
        self.rows = _as_index(rows, "rows")
        self.cols = _as_index(cols, "cols")
        self.values = np.array(values, dtype=np.float64).reshape(-1)
        if not (self.rows.size == self.cols.size == self.values.size):
            raise StructuralError("rows, cols and values must have equal length")
        nr, nc = self._shape
        if self.rows.size and (self.rows.min() < 0 or self.rows.max() >= nr):
            raise StructuralError("row index out of range")
        if self.cols.size and (self.cols.min() < 0 or self.cols.max() >= nc):
            raise StructuralError("column index out of range")
        for a in (self.rows, self.cols, self.values):
            a.flags.writeable = False

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=np.float64)
        r, c = np.nonzero(a)
        return cls(r, c, a[r, c], a.shape)

    @property
    def nnz(self):
        return int(self.values.size)

    def _coo_triplets(self):
        return self.rows, self.cols, self.values

    def tocoo(self):
        return self

    def tocsr(self):
        indptr, indices, values = _canonical(self.rows, self.cols, self.values, self.shape[0])
        return CsrMatrix._trusted(indptr, indices, values, self.shape)

    def tocsc(self):
        indptr, indices, values = _canonical(self.cols, self.rows, self.values, self.shape[1])
        return CscMatrix._trusted(indptr, indices, values, self.shape)

    def todok(self):
        dok = DokMatrix(self.shape)
        data = dok._data
        for i, j, v in zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()):
            data[(i, j)] = data.get((i, j), 0.0) + v
        return dok

    def todia(self):
        rows, cols = self.shape
        diag = self.cols - self.rows
        offsets = np.unique(diag)
        data = np.zeros((offsets.size, cols))
        np.add.at(data, (np.searchsorted(offsets, diag), self.cols), self.values)
        return DiaMatrix(offsets, data, self.shape)

    def canonical(self):
        """Sorted, duplicate-summed copy (row-major order)."""
        return self.tocsr().tocoo()

    @property
    def T(self):
        return CooMatrix(self.cols, self.rows, self.values, self.shape[::-1])


class _Compressed(SparseMatrix):
    """Shared machinery for CSR (major axis = rows) and CSC (major = cols)."""

    _major_axis = 0

    def __init__(self, indptr, indices, values, shape):
        self._shape = _check_shape(shape)
        indptr = _as_index(indptr, "indptr")
        indices = _as_index(indices, "indices")
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        n_major = self._shape[self._major_axis]
        n_minor = self._shape[1 - self._major_axis]
        if indptr.size != n_major + 1:
            raise StructuralError("indptr must have length major_dim + 1")
        if indptr[0] != 0 or np.any(np.diff(indptr) < 0):
            raise StructuralError("indptr must start at 0 and be nondecreasing")
        if indptr[-1] != indices.size or indices.size != values.size:
            raise StructuralError("indptr[-1], len(indices) and len(values) must agree")
        if indices.size and (indices.min() < 0 or indices.max() >= n_minor):
            raise StructuralError("minor index out of range")
        major = np.repeat(np.arange(n_major, dtype=_INDEX), np.diff(indptr))
        indptr, indices, values = _canonical(major, indices, values, n_major)
        self._set(indptr, indices, values)

    @classmethod
    def _trusted(cls, indptr, indices, values, shape):
        """Construct from arrays already known to be canonical."""
        obj = cls.__new__(cls)
        obj._shape = shape
        obj._set(indptr, indices, values)
        return obj

    def _set(self, indptr, indices, values):
        self.indptr, self.indices, self.values = indptr, indices, values
        for a in (indptr, indices, values):
            a.flags.writeable = False

    @property
    def nnz(self):
        return int(self.values.size)

    def _major_ids(self):
        n_major = self.indptr.size - 1
        return np.repeat(np.arange(n_major, dtype=_INDEX), np.diff(self.indptr))

    def eliminate_zeros(self):
        """Copy with explicitly stored zeros dropped."""
        keep = self.values != 0
        major = self._major_ids()[keep]
        n_major = self.indptr.size - 1
        indptr = np.zeros(n_major + 1, dtype=_INDEX)
        np.cumsum(np.bincount(major, minlength=n_major), out=indptr[1:])
        return type(self)._trusted(indptr, self.indices[keep].copy(),
                                   self.values[keep].copy(), self.shape)

    def major_slice(self, i):
        """``(minor_indices, values)`` of one row (CSR) or column (CSC)."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def has_canonical_format(self):
        if self.indptr[0] != 0 or np.any(np.diff(self.indptr) < 0):
            return False
        if self.indptr[-1] != self.indices.size:
            return False
        major = self._major_ids()
        same = major[1:] == major[:-1]
        return bool(np.all(self.indices[1:][same] > self.indices[:-1][same]))


class CsrMatrix(_Compressed):
    """Compressed sparse row matrix."""

    format = "csr"
    _major_axis = 0

    def _coo_triplets(self):
        return self._major_ids(), self.indices, self.values

    def tocsr(self):
        return self

    @property
    def T(self):
        return CscMatrix._trusted(self.indptr, self.indices, self.values, self.shape[::-1])


class CscMatrix(_Compressed):
    """Compressed sparse column matrix."""

    format = "csc"
    _major_axis = 1

    def _coo_triplets(self):
        return self.indices, self._major_ids(), self.values

    def tocsc(self):
        return self

    @property
    def T(self):
        return CsrMatrix._trusted(self.indptr, self.indices, self.values, self.shape[::-1])


class DokMatrix(SparseMatrix):
    """Dictionary of keys.

    The one mutable format: assemble with item assignment, then call
    :meth:`freeze` (or convert) before sharing.  Reads of absent keys give 0.
    """

    format = "dok"

    def __init__(self, shape):
        self._shape = _check_shape(shape)
        self._data = {}
        self._frozen = False

    def _key(self, key):
        try:
            i, j = key
        except (TypeError, ValueError):
            raise StructuralError("DOK keys are (row, col) pairs") from None
        i, j = int(i), int(j)
        rows, cols = self.shape
        if not (0 <= i < rows and 0 <= j < cols):
            raise StructuralError(f"index {(i, j)} out of range for shape {self.shape}")
        return i, j

    def __setitem__(self, key, value):
        if self._frozen:
            raise TypeError("frozen DOK matrix is read-only")
        self._data[self._key(key)] = float(value)

    def __getitem__(self, key):
        return self._data.get(self._key(key), 0.0)

    def __contains__(self, key):
        return self._key(key) in self._data

    def __len__(self):
        return len(self._data)

    def keys(self):
        return self._data.keys()

    def items(self):
        return self._data.items()

    def freeze(self):
        self._frozen = True
        return self

    @property
    def nnz(self):
        return len(self._data)

    def _coo_triplets(self):
        if not self._data:
            return np.zeros(0, _INDEX), np.zeros(0, _INDEX), np.zeros(0)
        keys = sorted(self._data)
        r = np.fromiter((k[0] for k in keys), dtype=_INDEX, count=len(keys))
        c = np.fromiter((k[1] for k in keys), dtype=_INDEX, count=len(keys))
        v = np.fromiter((self._data[k] for k in keys), dtype=np.float64, count=len(keys))
        return r, c, v

    def todok(self):
        return self

    def __eq__(self, other):
        if not isinstance(other, DokMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None


class DiaMatrix(SparseMatrix):
    """Diagonal storage.

    ``data[d_idx, k]`` holds the entry at ``(k - offsets[d_idx], k)``; each
    diagonal is a ``cols``-long row and positions falling outside the matrix
    are padding, always stored as zero.  Conversion to other formats drops
    zero entries, since padding and stored zeros are indistinguishable.
    """

    format = "dia"

    def __init__(self, offsets, data, shape):
        self._shape = rows, cols = _check_shape(shape)
        offsets = _as_index(offsets, "offsets")
        data = np.array(data, dtype=np.float64, ndmin=2)
        if offsets.size == 0:
            data = np.zeros((0, cols))
        if data.shape != (offsets.size, cols):
            raise StructuralError("data must have shape (len(offsets), cols)")
        if np.unique(offsets).size != offsets.size:
            raise StructuralError("diagonal offsets must be unique")
        order = np.argsort(offsets)
        offsets, data = offsets[order], data[order]
        k = np.arange(cols)
        inside = (k[None, :] - offsets[:, None] >= 0) & (k[None, :] - offsets[:, None] < rows)
        data[~inside] = 0.0
        self.offsets, self.data = offsets, data
        self.offsets.flags.writeable = False
        self.data.flags.writeable = False

    @property
    def nnz(self):
        return int(np.count_nonzero(self.data))

    def _coo_triplets(self):
        d_idx, k = np.nonzero(self.data)
        return k - self.offsets[d_idx], k, self.data[d_idx, k]

    def todia(self):
        return self


def canonical_equal(a, b):
    """Structural equality after canonicalization (same format required)."""
    if a.format != b.format or a.shape != b.shape:
        return False
    if a.format in ("csr", "csc"):
        return (np.array_equal(a.indptr, b.indptr) and np.array_equal(a.indices, b.indices)
                and np.array_equal(a.values, b.values))
    if a.format == "coo":
        return canonical_equal(a.tocsr(), b.tocsr())
    if a.format == "dok":
        return a == b
    return np.array_equal(a.offsets, b.offsets) and np.array_equal(a.data, b.data)

