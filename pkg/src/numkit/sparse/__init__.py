"""Sparse matrices in five formats: COO, CSR, CSC, DOK and DIA."""

from ._formats import (
    FORMATS,
    CooMatrix,
    CscMatrix,
    CsrMatrix,
    DiaMatrix,
    DokMatrix,
    SparseMatrix,
    canonical_equal,
)
from ._ops import convert, eye, norm, random, spmm, spmv
from .mmio import mmread, mmwrite


def coo_to_csr(m):
    return m.tocsr()


__all__ = [
    "FORMATS",
    "SparseMatrix",
    "CooMatrix",
    "CsrMatrix",
    "CscMatrix",
    "DokMatrix",
    "DiaMatrix",
    "canonical_equal",
    "coo_to_csr",
    "convert",
    "spmv",
    "spmm",
    "norm",
    "random",
    "eye",
    "mmread",
    "mmwrite",
]
