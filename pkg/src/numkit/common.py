"""Shared numeric kernel: RNG contract, tolerances, errors and small helpers.

Dense matrices throughout the package are plain ``numpy.ndarray`` objects of
dtype float64 (row-major, ``shape == (rows, cols)``).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumkitError",
    "StructuralError",
    "DimensionMismatch",
    "EvaluationError",
    "NotPositiveDefinite",
    "Rng",
    "Tolerances",
    "as_dense",
    "finite_diff_gradient",
]


class NumkitError(Exception):
    """Base class for all errors raised by numkit."""


class StructuralError(NumkitError, ValueError):
    """Malformed input structure (bad indices, unsorted arrays, bad shapes)."""


class DimensionMismatch(NumkitError, ValueError):
    """Operands have incompatible dimensions."""


class EvaluationError(NumkitError, ArithmeticError):
    """A user callback produced a non-finite or otherwise unusable value."""


class NotPositiveDefinite(NumkitError, np.linalg.LinAlgError):
    """A matrix expected to be positive definite failed to factor."""


class Rng:
    """Seeded random stream.

    The generator is numpy's PCG64 (PCG XSL RR 128/64, O'Neill 2014) seeded
    through ``numpy.random.SeedSequence(seed)``.  Equal seeds give identical
    streams across runs and platforms; there is no global state.  An ``Rng``
    is owned by one consumer at a time.
    """

    def __init__(self, seed=0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def binomial(self, n, p, size=None):
        return self._gen.binomial(n, p, size)

    def choice_without_replacement(self, population, k):
        """``k`` distinct integers from ``range(population)``, uniformly."""
        return self._gen.choice(population, size=k, replace=False)

    def permutation(self, n):
        return self._gen.permutation(n)

    def spawn(self):
        """Independent child stream derived deterministically from this one."""
        return Rng(int(self._gen.integers(0, 2**63)))

    def __repr__(self):
        return f"Rng(seed={self.seed})"


@dataclass(frozen=True)
class Tolerances:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_iter: int = 100

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.rel_tol >= 0:
            raise ValueError("rel_tol must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")

    def close(self, a, b):
        return abs(a - b) <= self.abs_tol + self.rel_tol * max(abs(a), abs(b))


def as_dense(a, *, allow_nonfinite=False):
    """Validate ``a`` as a 2-D float64 matrix and return it."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise StructuralError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not allow_nonfinite and not np.all(np.isfinite(a)):
        raise StructuralError("matrix has non-finite entries")
    return a


def finite_diff_gradient(f, x, h=1e-6):
    """Central-difference gradient of a scalar function.

    Component ``i`` is ``(f(x + h e_i) - f(x - h e_i)) / (2 h)``.
    Raises :class:`EvaluationError` if any probe value is not finite.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    grad = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        fp = float(f(x + step))
        fm = float(f(x - step))
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise EvaluationError(f"non-finite function value probing component {i}")
        grad[i] = (fp - fm) / (2.0 * h)
    return grad
