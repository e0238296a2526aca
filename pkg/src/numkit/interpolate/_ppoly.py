"""Piecewise polynomials in the power (PPoly) and Bernstein (BPoly) bases."""

from math import comb

import numpy as np

from ..common import StructuralError

# distinct roots closer than this are merged (breakpoint roots appear twice)
ROOT_MERGE_TOL = 1e-12


def _validate(coeffs, breakpoints):
    c = np.array(coeffs, dtype=np.float64)
    x = np.array(breakpoints, dtype=np.float64)
    if c.ndim == 1:
        c = c[:, None]
    if x.ndim != 1 or x.size < 2:
        raise StructuralError("need at least two breakpoints")
    if not np.all(np.isfinite(x)) or np.any(np.diff(x) <= 0):
        raise StructuralError("breakpoints must be finite and strictly increasing")
    if c.ndim != 2 or c.shape[1] != x.size - 1 or c.shape[0] < 1:
        raise StructuralError(f"coefficients must have shape (k+1, {x.size - 1}), got {c.shape}")
    c.flags.writeable = False
    x.flags.writeable = False
    return c, x


class _Piecewise:
    def __init__(self, coeffs, breakpoints, extrapolate=True):
        self.c, self.x = _validate(coeffs, breakpoints)
        self.extrapolate = bool(extrapolate)

    @property
    def degree(self):
        return self.c.shape[0] - 1

    @property
    def n_intervals(self):
        return self.c.shape[1]

    def _locate(self, xs, extrapolate):
        """Interval index per point; also a mask of points outside the domain."""
        if extrapolate is None:
            extrapolate = self.extrapolate
        idx = np.searchsorted(self.x, xs, side="right") - 1
        idx = np.clip(idx, 0, self.n_intervals - 1)
        outside = (xs < self.x[0]) | (xs > self.x[-1]) | np.isnan(xs)
        if extrapolate:
            outside = np.isnan(xs)
        return idx, outside

    def __call__(self, xs, extrapolate=None):
        xs = np.asarray(xs, dtype=np.float64)
        scalar = xs.ndim == 0
        flat = xs.reshape(-1)
        idx, outside = self._locate(flat, extrapolate)
        out = self._evaluate(flat, idx)
        out[outside] = np.nan
        return float(out[0]) if scalar else out.reshape(xs.shape)


class PPoly(_Piecewise):
    """Power basis: ``c[d, i]`` multiplies ``(x - x[i])**(k - d)`` on interval i.

    Outside ``[x[0], x[-1]]`` the nearest interval's polynomial is used unless
    ``extrapolate`` is false, in which case the value is NaN.
    """

    def _evaluate(self, xs, idx):
        s = xs - self.x[idx]
        y = self.c[0, idx].copy()
        for d in range(1, self.c.shape[0]):
            y = y * s + self.c[d, idx]
        return y

    def derivative(self, nu=1):
        p = self
        for _ in range(nu):
            k = p.degree
            if k == 0:
                p = PPoly(np.zeros((1, p.n_intervals)), p.x, p.extrapolate)
                continue
            factors = np.arange(k, 0, -1, dtype=np.float64)[:, None]
            p = PPoly(p.c[:-1] * factors, p.x, p.extrapolate)
        return p

    def antiderivative(self, nu=1):
        """Antiderivative vanishing at ``x[0]``, continuous across breakpoints."""
        p = self
        for _ in range(nu):
            k = p.degree
            divisors = np.arange(k + 1, 0, -1, dtype=np.float64)[:, None]
            c = np.zeros((k + 2, p.n_intervals))
            c[:-1] = p.c / divisors
            h = np.diff(p.x)
            # integral of each piece over its own interval, constant term zero
            pieces = np.zeros(p.n_intervals)
            for d in range(k + 1):
                pieces = pieces * h + c[d]
            pieces *= h
            c[-1] = np.concatenate(([0.0], np.cumsum(pieces[:-1])))
            p = PPoly(c, p.x, p.extrapolate)
        return p

    def integrate(self, a, b, extrapolate=None):
        """Definite integral from ``a`` to ``b`` (antisymmetric in the limits)."""
        if a == b:
            return 0.0
        anti = self.antiderivative()
        fa = anti(np.array([a]), extrapolate)[0]
        fb = anti(np.array([b]), extrapolate)[0]
        return float(fb - fa)

    def roots(self):
        """Real roots inside the domain, ascending.

        A piece that is identically zero contributes its left breakpoint
        followed by a NaN sentinel (every point of that interval is a root).
        """
        found = []
        for i in range(self.n_intervals):
            h = self.x[i + 1] - self.x[i]
            local = _local_roots(self.c[:, i], h)
            if local is None:
                found.append(self.x[i])
                found.append(np.nan)
                continue
            found.extend(self.x[i] + s for s in local)
        return _merge_roots(found)

    def to_bpoly(self):
        return BPoly(_power_to_bernstein(self.c, np.diff(self.x)), self.x, self.extrapolate)


class BPoly(_Piecewise):
    """Bernstein basis: on interval i with ``t = (x - x[i]) / h_i``,
    ``p(x) = sum_a c[a, i] * C(k, a) t**a (1 - t)**(k - a)``."""

    def _evaluate(self, xs, idx):
        h = self.x[idx + 1] - self.x[idx]
        t = (xs - self.x[idx]) / h
        b = self.c[:, idx].copy()
        k = self.degree
        # de Casteljau
        for r in range(1, k + 1):
            b[: k + 1 - r] = (1.0 - t) * b[: k + 1 - r] + t * b[1 : k + 2 - r]
        return b[0]

    def to_ppoly(self):
        return PPoly(_bernstein_to_power(self.c, np.diff(self.x)), self.x, self.extrapolate)


def _power_to_bernstein(c, h):
    k = c.shape[0] - 1
    # a[j] multiplies t**j once the local variable is rescaled to [0, 1]
    a = np.array([c[k - j] * h**j for j in range(k + 1)])
    out = np.zeros_like(c)
    for m in range(k + 1):
        for j in range(m + 1):
            out[m] += comb(m, j) / comb(k, j) * a[j]
    return out


def _bernstein_to_power(b, h):
    k = b.shape[0] - 1
    out = np.zeros_like(b)
    for j in range(k + 1):
        a = np.zeros(b.shape[1])
        for m in range(j + 1):
            a += (-1) ** (j - m) * comb(k, j) * comb(j, m) * b[m]
        out[k - j] = a / h**j
    return out


def convert_basis(p):
    """PPoly -> BPoly or BPoly -> PPoly, preserving the function."""
    if isinstance(p, PPoly):
        return p.to_bpoly()
    if isinstance(p, BPoly):
        return p.to_ppoly()
    raise TypeError("expected a PPoly or BPoly")


def _companion_roots(coeffs):
    """Eigenvalues of the companion matrix of a polynomial (highest first)."""
    lead = coeffs[0]
    n = coeffs.size - 1
    comp = np.zeros((n, n))
    comp[0, :] = -coeffs[1:] / lead
    comp[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(comp)


def _local_roots(coeffs, h):
    """Roots in ``[0, h]`` of the polynomial with power coefficients
    ``coeffs`` (highest degree first); None if identically zero."""
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return None
    c = coeffs[nz[0]:]
    deg = c.size - 1
    if deg == 0:
        return []
    if deg == 1:
        cand = [-c[1] / c[0]]
    elif deg == 2:
        a, b, cc = c
        disc = b * b - 4 * a * cc
        if disc < 0:
            # allow a tangent root lost to rounding
            if disc > -1e-14 * max(b * b, abs(4 * a * cc)):
                cand = [-b / (2 * a)]
            else:
                cand = []
        else:
            q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
            cand = [q / a] + ([cc / q] if q != 0 else [])
    else:
        z = _companion_roots(c)
        cand = [r.real for r in z if abs(r.imag) <= 1e-10 * max(1.0, abs(r))]
        cand = [_polish(c, r) for r in cand]
    tol = 1e-12 * max(1.0, h)
    return sorted(min(max(s, 0.0), h) for s in cand if -tol <= s <= h + tol)


def _polish(c, r, steps=3):
    """A few Newton steps on a companion-matrix root estimate."""
    dc = c[:-1] * np.arange(c.size - 1, 0, -1)
    for _ in range(steps):
        f = np.polyval(c, r)
        df = np.polyval(dc, r)
        if df == 0 or not np.isfinite(f / df):
            break
        step = f / df
        if abs(step) > 1e-6 * max(1.0, abs(r)):
            break
        r = r - step
    return r


def _merge_roots(found):
    out = []
    last = None
    for r in found:
        if np.isnan(r):
            out.append(r)
            continue
        if last is not None and abs(r - last) <= ROOT_MERGE_TOL * max(1.0, abs(r)):
            continue
        out.append(r)
        last = r
    return np.array(out, dtype=np.float64)
