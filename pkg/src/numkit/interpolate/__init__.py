"""Piecewise polynomials (power, Bernstein, B-spline) and cubic interpolants."""

from ._bspline import BSpline, bspline_eval, bspline_to_ppoly, clamped_knots
from ._cubic import akima, cubic_spline, hermite_ppoly, pchip
from ._ppoly import BPoly, PPoly, convert_basis


def ppoly_eval(p, xs, extrapolate=None):
    return p(xs, extrapolate)


def ppoly_derivative(p, nu=1):
    return p.derivative(nu)


def ppoly_antiderivative(p, nu=1):
    return p.antiderivative(nu)


def ppoly_integrate(p, a, b, extrapolate=None):
    return p.integrate(a, b, extrapolate)


def ppoly_roots(p):
    return p.roots()


def bpoly_eval(b, xs, extrapolate=None):
    return b(xs, extrapolate)


__all__ = [
    "PPoly", "BPoly", "BSpline",
    "ppoly_eval", "ppoly_derivative", "ppoly_antiderivative", "ppoly_integrate", "ppoly_roots",
    "bpoly_eval", "convert_basis", "bspline_eval", "bspline_to_ppoly", "clamped_knots",
    "cubic_spline", "pchip", "akima", "hermite_ppoly",
]
