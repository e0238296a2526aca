"""Continuous distributions: specific methods where given, generic numerics otherwise."""

import math

import numpy as np

from ..common import EvaluationError, StructuralError
from ._quadrature import integrate

# generic ppf stops when |cdf(x) - q| is below this
PPF_TOL = 1e-10


def _as_vectorized(fn):
    def wrapped(x):
        x = np.asarray(x, dtype=np.float64)
        try:
            out = np.asarray(fn(x), dtype=np.float64)
            if out.shape == x.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda v: float(fn(v)), otypes=[np.float64])(x)
    return wrapped


class ContinuousDistribution:
    """A distribution defined by its density, with optional fast paths.

    ``cdf``, ``ppf`` and ``sampler(rng, count)`` are used when supplied;
    otherwise :func:`generic_cdf`, :func:`generic_ppf` and
    :func:`generic_rvs` fill in.  The choice is made once, here.  ``loc``
    and ``scale`` are hints for where the mass sits; they steer the
    quadrature on infinite supports and the ppf bracket search.  With a
    finite support the density is checked to integrate to 1 within 1e-6.
    """

    def __init__(self, pdf, support=(-math.inf, math.inf), cdf=None, ppf=None, sampler=None,
                 loc=0.0, scale=1.0, name="custom", validate=True):
        lo, hi = float(support[0]), float(support[1])
        if not lo < hi:
            raise StructuralError("support must satisfy lower < upper")
        if not (np.isfinite(loc) and scale > 0):
            raise StructuralError("loc must be finite and scale positive")
        self.name = name
        self.support = (lo, hi)
        self.loc, self.scale = float(loc), float(scale)
        self._pdf = _as_vectorized(pdf)
        self._cdf = _as_vectorized(cdf) if cdf is not None else None
        self._ppf = ppf
        self._sampler = sampler
        self.has_specific = {"cdf": cdf is not None, "ppf": ppf is not None,
                             "rvs": sampler is not None}
        if validate and np.isfinite(lo) and np.isfinite(hi):
            mass = integrate(self._pdf, lo, hi)
            if abs(mass - 1.0) > 1e-6:
                raise StructuralError(f"pdf integrates to {mass!r}, not 1")

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.support
        with np.errstate(all="ignore"):
            vals = self._pdf(x)
        out = np.where((x >= lo) & (x <= hi), vals, 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        if self._cdf is not None:
            x = np.asarray(x, dtype=np.float64)
            out = np.clip(self._cdf(x), 0.0, 1.0)
            return float(out) if out.ndim == 0 else out
        return generic_cdf(self, x)

    def ppf(self, q):
        if self._ppf is not None:
            out = np.asarray(self._ppf(np.asarray(q, dtype=np.float64)), dtype=np.float64)
            return float(out) if out.ndim == 0 else out
        return generic_ppf(self, q)

    def rvs(self, rng, count):
        if self._sampler is not None:
            return np.asarray(self._sampler(rng, count), dtype=np.float64)
        return generic_rvs(self, rng, count)

    def __repr__(self):
        return f"<{self.name} distribution on {self.support}>"


def _tail_integral(d, x):
    """Mass below ``x`` for an infinite lower support, via ``t = loc + scale tan(theta)``."""
    loc, s = d.loc, d.scale

    def g(theta):
        t = loc + s * np.tan(theta)
        c = np.cos(theta)
        return d._pdf(t) * s / (c * c)

    upper = math.atan((x - loc) / s)
    return integrate(g, -0.5 * math.pi, upper)


def generic_cdf(d, x):
    """CDF by adaptive quadrature of the pdf from the lower support end.

    An infinite lower end is handled by the substitution
    ``t = loc + scale * tan(theta)``.  Results are clamped to ``[0, 1]``.
    """
    x_arr = np.asarray(x, dtype=np.float64)
    out = np.empty(x_arr.shape)
    lo, hi = d.support
    for idx, xv in np.ndenumerate(x_arr):
        if not np.isfinite(xv):
            if np.isnan(xv):
                raise EvaluationError("cdf of NaN")
            out[idx] = 0.0 if xv < 0 else 1.0
        elif xv <= lo:
            out[idx] = 0.0
        elif xv >= hi:
            out[idx] = 1.0
        elif np.isfinite(lo):
            out[idx] = integrate(d._pdf, lo, xv)
        else:
            out[idx] = _tail_integral(d, xv)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _bracket(d, q):
    lo, hi = d.support
    if np.isfinite(lo) and np.isfinite(hi):
        return lo, 0.0, hi, 1.0
    a = lo if np.isfinite(lo) else d.loc - d.scale
    b = hi if np.isfinite(hi) else d.loc + d.scale
    step = d.scale
    fa, fb = d.cdf(a), d.cdf(b)
    for _ in range(2000):
        if fa <= q <= fb:
            return a, fa, b, fb
        step *= 2.0
        if fa > q:
            a, fa = a - step, d.cdf(a - step)
        if fb < q:
            b, fb = b + step, d.cdf(b + step)
    raise EvaluationError(f"could not bracket quantile {q}")


def _ppf_scalar(d, q):
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level {q} outside [0, 1]")
    lo, hi = d.support
    if q == 0.0:
        return lo
    if q == 1.0:
        return hi
    a, fa, b, fb = _bracket(d, q)
    # bisection until the bracket is narrow relative to the scale
    for _ in range(200):
        if b - a <= 1e-3 * d.scale:
            break
        m = 0.5 * (a + b)
        fm = d.cdf(m)
        if abs(fm - q) <= PPF_TOL:
            return m
        if fm < q:
            a, fa = m, fm
        else:
            b, fb = m, fm
    # secant (regula falsi safeguarded by the bracket)
    x = a
    for _ in range(200):
        if fb == fa:
            x = 0.5 * (a + b)
        else:
            x = a + (q - fa) * (b - a) / (fb - fa)
            if not a < x < b:
                x = 0.5 * (a + b)
        fx = d.cdf(x)
        if abs(fx - q) <= PPF_TOL or b - a <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            return x
        if fx < q:
            a, fa = x, fx
        else:
            b, fb = x, fx
    return x


def generic_ppf(d, q):
    """Quantile by bracketing then bisection and secant steps on ``cdf(x) = q``."""
    q_arr = np.asarray(q, dtype=np.float64)
    out = np.empty(q_arr.shape)
    for idx, qv in np.ndenumerate(q_arr):
        out[idx] = _ppf_scalar(d, float(qv))
    return float(out) if out.ndim == 0 else out


def generic_rvs(d, rng, count):
    """Inverse-transform sampling: ``ppf`` of uniform draws from ``rng``."""
    u = rng.uniform(size=int(count))
    return np.asarray(d.ppf(u), dtype=np.float64).reshape(-1)
