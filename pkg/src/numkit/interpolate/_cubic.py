"""Interpolating piecewise cubics: cubic spline, PCHIP and Akima."""

import numpy as np
from scipy.linalg import solve_banded

from ..common import StructuralError
from ._ppoly import PPoly


def _prepare(xs, ys, min_points):
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.shape != x.shape:
        raise StructuralError("xs and ys must be 1-D arrays of equal length")
    if x.size < min_points:
        raise StructuralError(f"need at least {min_points} points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise StructuralError("data must be finite")
    dx = np.diff(x)
    if np.any(dx <= 0):
        raise StructuralError("xs must be strictly increasing (no duplicate abscissae)")
    return x, y, dx, np.diff(y) / dx


def hermite_ppoly(x, y, slopes):
    """Cubic Hermite PPoly through ``(x, y)`` with prescribed first derivatives."""
    dx = np.diff(x)
    secant = np.diff(y) / dx
    t = (slopes[:-1] + slopes[1:] - 2.0 * secant) / dx
    c = np.empty((4, dx.size))
    c[0] = t / dx
    c[1] = (secant - slopes[:-1]) / dx - t
    c[2] = slopes[:-1]
    c[3] = y[:-1]
    return PPoly(c, x)


def _parse_bc(bc):
    if isinstance(bc, str):
        if bc not in ("not_a_knot", "natural"):
            raise ValueError(f"unknown boundary condition {bc!r}")
        return bc, None
    kind, d0, dn = bc
    if kind != "clamped":
        raise ValueError(f"unknown boundary condition {kind!r}")
    return "clamped", (float(d0), float(dn))


def cubic_spline_system(x, y, bc="not_a_knot"):
    """Banded system ``(ab, rhs)`` for the knot slopes of a cubic spline.

    ``ab`` is in LAPACK (1, 1) band storage: row 0 the superdiagonal, row 1
    the diagonal, row 2 the subdiagonal.  Requires at least 4 points for
    not-a-knot.
    """
    kind, ends = _parse_bc(bc)
    n = x.size
    dx = np.diff(x)
    secant = np.diff(y) / dx
    ab = np.zeros((3, n))
    rhs = np.zeros(n)
    # interior rows: continuity of the second derivative
    ab[1, 1:-1] = 2.0 * (dx[:-1] + dx[1:])
    ab[0, 2:] = dx[:-1]
    ab[2, :-2] = dx[1:]
    rhs[1:-1] = 3.0 * (dx[1:] * secant[:-1] + dx[:-1] * secant[1:])
    if kind == "natural":
        ab[1, 0], ab[0, 1], rhs[0] = 2.0, 1.0, 3.0 * secant[0]
        ab[1, -1], ab[2, -2], rhs[-1] = 2.0, 1.0, 3.0 * secant[-1]
    elif kind == "clamped":
        ab[1, 0], ab[0, 1], rhs[0] = 1.0, 0.0, ends[0]
        ab[1, -1], ab[2, -2], rhs[-1] = 1.0, 0.0, ends[1]
    else:
        # third-derivative continuity at x[1] and x[-2]
        d = x[2] - x[0]
        ab[1, 0], ab[0, 1] = dx[1], d
        rhs[0] = ((dx[0] + 2.0 * d) * dx[1] * secant[0] + dx[0] ** 2 * secant[1]) / d
        d = x[-1] - x[-3]
        ab[1, -1], ab[2, -2] = dx[-2], d
        rhs[-1] = (dx[-1] ** 2 * secant[-2] + (2.0 * d + dx[-1]) * dx[-2] * secant[-1]) / d
    return ab, rhs


def cubic_spline(xs, ys, bc="not_a_knot"):
    """C2 interpolating cubic spline as a PPoly.

    ``bc`` is ``"not_a_knot"``, ``"natural"`` or ``("clamped", d0, dn)``.
    With fewer than 4 points not-a-knot has no room for its conditions: two
    points give the line, three give the parabola through them.
    """
    x, y, dx, secant = _prepare(xs, ys, 2)
    kind, _ = _parse_bc(bc)
    if kind == "not_a_knot" and x.size < 4:
        if x.size == 2:
            slopes = np.array([secant[0], secant[0]])
        else:
            # parabola through three points, written as a degenerate cubic
            curv = (secant[1] - secant[0]) / (x[2] - x[0])
            slopes = np.array([secant[0] - curv * dx[0], secant[0] + curv * dx[0],
                               secant[1] + curv * dx[1]])
        return hermite_ppoly(x, y, slopes)
    ab, rhs = cubic_spline_system(x, y, bc)
    slopes = solve_banded((1, 1), ab, rhs)
    return hermite_ppoly(x, y, slopes)


def _pchip_end_slope(h0, h1, m0, m1):
    d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    if np.sign(d) != np.sign(m0):
        return 0.0
    if np.sign(m0) != np.sign(m1) and abs(d) > abs(3.0 * m0):
        return 3.0 * m0
    return d


def pchip_slopes(x, y):
    dx = np.diff(x)
    m = np.diff(y) / dx
    n = x.size
    if n == 2:
        return np.array([m[0], m[0]])
    d = np.zeros(n)
    # weighted harmonic mean of neighbouring secants; zero at local extrema
    for k in range(1, n - 1):
        if m[k - 1] * m[k] <= 0:
            continue
        w1 = 2.0 * dx[k] + dx[k - 1]
        w2 = dx[k] + 2.0 * dx[k - 1]
        d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k])
    d[0] = _pchip_end_slope(dx[0], dx[1], m[0], m[1])
    d[-1] = _pchip_end_slope(dx[-1], dx[-2], m[-1], m[-2])
    return d


class MonotonePPoly(PPoly):
    """PPoly whose pieces are known to stay between their end values.

    Inside the domain, evaluation is clamped to ``[min, max]`` of the two
    data values of each interval, which removes only rounding overshoot.
    """

    def __init__(self, coeffs, breakpoints, y, extrapolate=True):
        super().__init__(coeffs, breakpoints, extrapolate)
        y = np.asarray(y, dtype=np.float64)
        self._lo = np.minimum(y[:-1], y[1:])
        self._hi = np.maximum(y[:-1], y[1:])

    def _evaluate(self, xs, idx):
        y = super()._evaluate(xs, idx)
        inside = (xs >= self.x[0]) & (xs <= self.x[-1])
        return np.where(inside, np.clip(y, self._lo[idx], self._hi[idx]), y)


def pchip(xs, ys):
    """Monotone, shape-preserving C1 piecewise cubic Hermite interpolant."""
    x, y, _, _ = _prepare(xs, ys, 2)
    p = hermite_ppoly(x, y, pchip_slopes(x, y))
    return MonotonePPoly(p.c, p.x, y)


def akima_slopes(x, y):
    m = np.diff(y) / np.diff(x)
    # two extrapolated secants at each end
    mm = np.empty(m.size + 4)
    mm[2:-2] = m
    mm[1] = 2.0 * m[0] - m[1]
    mm[0] = 2.0 * mm[1] - m[0]
    mm[-2] = 2.0 * m[-1] - m[-2]
    mm[-1] = 2.0 * mm[-2] - m[-1]
    w_right = np.abs(mm[3:] - mm[2:-1])   # |m_{i+1} - m_i|
    w_left = np.abs(mm[1:-2] - mm[:-3])   # |m_{i-1} - m_{i-2}|
    m_prev, m_next = mm[1:-2], mm[2:-1]
    denom = w_right + w_left
    with np.errstate(invalid="ignore", divide="ignore"):
        slopes = np.where(denom > 0,
                          (w_right * m_prev + w_left * m_next) / np.where(denom > 0, denom, 1.0),
                          0.5 * (m_prev + m_next))
    return slopes


def akima(xs, ys):
    """Akima's C1 piecewise cubic interpolant (requires at least 5 points)."""
    x, y, _, _ = _prepare(xs, ys, 5)
    return hermite_ppoly(x, y, akima_slopes(x, y))
