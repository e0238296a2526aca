import numpy as np

from ..common import StructuralError
from ._ppoly import PPoly


class BSpline:
    """Spline ``sum_i c[i] B_{i,k}(x)`` over the knot vector ``t``.

    ``len(t) == len(c) + k + 1`` and the base interval is ``[t[k], t[n]]``.
    Evaluation inside the base interval is right-continuous (this matters only
    at knots of full multiplicity); the right end takes the left limit.
    Points outside give NaN unless ``extrapolate`` is set, in which case the
    first or last polynomial piece is continued.
    """

    def __init__(self, t, c, k, extrapolate=False, _max_mult=None):
        self.t = np.array(t, dtype=np.float64)
        self.c = np.array(c, dtype=np.float64)
        self.k = int(k)
        self.extrapolate = bool(extrapolate)
        k, t, n = self.k, self.t, self.c.size
        if k < 0:
            raise StructuralError("degree must be nonnegative")
        if self.t.ndim != 1 or self.c.ndim != 1:
            raise StructuralError("knots and coefficients must be one-dimensional")
        if n < k + 1:
            raise StructuralError(f"need at least k+1 = {k + 1} coefficients")
        if t.size != n + k + 1:
            raise StructuralError(f"need len(t) == len(c) + k + 1 = {n + k + 1}, got {t.size}")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) < 0):
            raise StructuralError("knots must be finite and nondecreasing")
        _, counts = np.unique(t, return_counts=True)
        if np.any(counts > (_max_mult or k + 1)):
            raise StructuralError("knot multiplicity exceeds k + 1")
        if not t[k] < t[n]:
            raise StructuralError("base interval t[k] .. t[n] is empty")
        self.t.flags.writeable = False
        self.c.flags.writeable = False

    @property
    def n(self):
        return self.c.size

    @property
    def domain(self):
        return self.t[self.k], self.t[self.n]

    def _interval(self, xs):
        idx = np.searchsorted(self.t, xs, side="right") - 1
        return np.clip(idx, self.k, self.n - 1)

    def __call__(self, xs, extrapolate=None):
        if extrapolate is None:
            extrapolate = self.extrapolate
        xs = np.asarray(xs, dtype=np.float64)
        scalar = xs.ndim == 0
        flat = xs.reshape(-1)
        out = self._de_boor(flat, self._interval(flat))
        lo, hi = self.domain
        bad = np.isnan(flat) if extrapolate else ((flat < lo) | (flat > hi) | np.isnan(flat))
        out[bad] = np.nan
        return float(out[0]) if scalar else out.reshape(xs.shape)

    def _de_boor(self, xs, ell):
        k, t = self.k, self.t
        d = np.array([self.c[ell - k + j] for j in range(k + 1)])
        for r in range(1, k + 1):
            for j in range(k, r - 1, -1):
                left = t[j + ell - k]
                right = t[j + 1 + ell - r]
                alpha = (xs - left) / (right - left)
                d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j]
        return d[k]

    def basis_matrix(self, xs):
        """``B[p, i] = B_{i,k}(xs[p])`` for every basis element."""
        xs = np.asarray(xs, dtype=np.float64).reshape(-1)
        out = np.empty((xs.size, self.n))
        for i in range(self.n):
            e = np.zeros(self.n)
            e[i] = 1.0
            out[:, i] = BSpline(self.t, e, self.k, self.extrapolate)(xs)
        return out

    def derivative(self):
        """Derivative spline of degree ``k - 1`` on knots ``t[1:-1]``."""
        k, t, c = self.k, self.t, self.c
        if k == 0:
            return BSpline(t, np.zeros_like(c), 0, self.extrapolate)
        span = t[k + 1 : k + self.n] - t[1 : self.n]
        diff = np.diff(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            dc = np.where(span > 0, k * diff / np.where(span > 0, span, 1.0), 0.0)
        # full-multiplicity interior knots stay over-full after differentiation
        return BSpline(t[1:-1], dc, k - 1, self.extrapolate, _max_mult=t.size)

    def to_ppoly(self):
        """Equivalent power-basis PPoly; breakpoints are the distinct knots
        of the base interval."""
        lo, hi = self.domain
        breaks = np.unique(self.t[(self.t >= lo) & (self.t <= hi)])
        left = breaks[:-1]
        k = self.k
        coeffs = np.zeros((k + 1, left.size))
        spline, fact = self, 1.0
        for j in range(k + 1):
            if j > 0:
                spline = spline.derivative()
                fact *= j
            coeffs[k - j] = spline._de_boor(left, spline._interval(left)) / fact
        return PPoly(coeffs, breaks, extrapolate=self.extrapolate)


def clamped_knots(breakpoints, k):
    """Knot vector with ``k + 1``-fold end knots over the given breakpoints."""
    b = np.asarray(breakpoints, dtype=np.float64)
    return np.concatenate((np.repeat(b[0], k), b, np.repeat(b[-1], k)))


def bspline_eval(s, xs, extrapolate=None):
    return s(xs, extrapolate)


def bspline_to_ppoly(s):
    return s.to_ppoly()
