"""Distribution framework with generic numeric fallbacks, plus four exemplars."""

from ._distributions import (
    HistogramDistribution,
    Multinomial,
    histogram_distribution,
    multinomial_pmf,
    multinomial_rvs,
    normal,
    uniform,
)
from ._framework import ContinuousDistribution, generic_cdf, generic_ppf, generic_rvs
from ._quadrature import integrate

__all__ = [
    "ContinuousDistribution", "HistogramDistribution", "Multinomial",
    "generic_cdf", "generic_ppf", "generic_rvs", "integrate",
    "histogram_distribution", "multinomial_pmf", "multinomial_rvs", "normal", "uniform",
]
