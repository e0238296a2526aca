"""Exemplar distributions: uniform, normal, histogram and multinomial."""

import math

import numpy as np
from scipy.special import erfc, gammaln

from ..common import StructuralError
from ._framework import ContinuousDistribution


def uniform(a=0.0, b=1.0):
    """Uniform on ``[a, b]`` with closed-form cdf and ppf; sampling is generic."""
    a, b = float(a), float(b)
    if not a < b:
        raise StructuralError("uniform needs a < b")
    w = b - a
    return ContinuousDistribution(
        pdf=lambda x: np.full(np.shape(x), 1.0 / w),
        support=(a, b),
        cdf=lambda x: (x - a) / w,
        ppf=lambda q: a + q * w,
        loc=0.5 * (a + b), scale=w, name="uniform")


def normal(mu=0.0, sigma=1.0):
    """Normal with a closed-form cdf; ppf and sampling use the generic code."""
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0:
        raise StructuralError("normal needs sigma > 0")
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    return ContinuousDistribution(
        pdf=lambda x: norm * np.exp(-0.5 * ((x - mu) / sigma) ** 2),
        cdf=lambda x: 0.5 * erfc(-(x - mu) / (sigma * math.sqrt(2.0))),
        loc=mu, scale=sigma, name="normal")


class HistogramDistribution(ContinuousDistribution):
    """Piecewise-constant density over ``bin_edges``; cdf and ppf are exact.

    Bins are half-open ``[e_i, e_{i+1})`` except the last, which is closed.
    """

    def __init__(self, counts, bin_edges):
        counts = np.array(counts, dtype=np.float64)
        edges = np.array(bin_edges, dtype=np.float64)
        if edges.ndim != 1 or counts.ndim != 1 or edges.size != counts.size + 1:
            raise StructuralError("need len(bin_edges) == len(counts) + 1")
        if not np.all(np.isfinite(edges)) or np.any(np.diff(edges) <= 0):
            raise StructuralError("bin edges must be finite and strictly increasing")
        if np.any(counts < 0) or not np.all(np.isfinite(counts)):
            raise StructuralError("counts must be finite and nonnegative")
        total = counts.sum()
        if not total > 0:
            raise StructuralError("histogram has no mass (all counts zero)")
        self.bin_edges = edges
        self.widths = np.diff(edges)
        self.densities = counts / (total * self.widths)
        # cdf at each edge: cumulative count fractions
        self.cum = np.concatenate(([0.0], np.cumsum(counts) / total))
        self.cum[-1] = 1.0
        for arr in (self.bin_edges, self.widths, self.densities, self.cum):
            arr.flags.writeable = False
        super().__init__(self._hist_pdf, support=(edges[0], edges[-1]), cdf=self._hist_cdf,
                         ppf=self._hist_ppf, loc=0.5 * (edges[0] + edges[-1]),
                         scale=edges[-1] - edges[0], name="histogram", validate=False)

    def _bin(self, x):
        return np.clip(np.searchsorted(self.bin_edges, x, side="right") - 1, 0,
                       self.densities.size - 1)

    def _hist_pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= self.bin_edges[0]) & (x <= self.bin_edges[-1])
        return np.where(inside, self.densities[self._bin(x)], 0.0)

    def _hist_cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        i = self._bin(x)
        out = self.cum[i] + (x - self.bin_edges[i]) * self.densities[i]
        out = np.where(x <= self.bin_edges[0], 0.0, out)
        return np.where(x >= self.bin_edges[-1], 1.0, out)

    def _hist_ppf(self, q):
        q = np.asarray(q, dtype=np.float64)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        # first bin whose cumulative range reaches q; empty bins are skipped
        i = np.clip(np.searchsorted(self.cum, q, side="left") - 1, 0, self.densities.size - 1)
        while np.any(self.densities[i] == 0):
            zero = self.densities[i] == 0
            i = np.where(zero, np.minimum(i + 1, self.densities.size - 1), i)
        return self.bin_edges[i] + (q - self.cum[i]) / self.densities[i]


def histogram_distribution(counts, bin_edges):
    return HistogramDistribution(counts, bin_edges)


class Multinomial:
    """``n`` trials over ``k`` categories with probabilities ``p``."""

    def __init__(self, n, p):
        p = np.array(p, dtype=np.float64)
        if int(n) != n or n < 0:
            raise StructuralError("n must be a nonnegative integer")
        if p.ndim != 1 or p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
            raise StructuralError("p must be a nonempty vector of nonnegative numbers")
        if abs(p.sum() - 1.0) > 1e-12:
            raise StructuralError(f"probabilities sum to {p.sum()!r}, not 1")
        self.n = int(n)
        self.p = p
        self.p.flags.writeable = False

    @property
    def k(self):
        return self.p.size

    def logpmf(self, x):
        """Log-probability; ``-inf`` when ``x`` is not a valid outcome
        (wrong length, negative or fractional counts, ``sum(x) != n``)."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.k,) or np.any(x < 0) or np.any(x != np.round(x)) or x.sum() != self.n:
            return -math.inf
        if np.any((self.p == 0) & (x > 0)):
            return -math.inf
        used = x > 0
        return float(gammaln(self.n + 1) - gammaln(x + 1).sum()
                     + (x[used] * np.log(self.p[used])).sum())

    def pmf(self, x):
        return math.exp(self.logpmf(x))

    def rvs(self, rng, size=None):
        """Counts by sequential binomial conditioning; rows sum to ``n``."""
        shape = () if size is None else (int(size),)
        out = np.zeros(shape + (self.k,), dtype=np.int64)
        flat = out.reshape(-1, self.k)
        for row in flat:
            remaining, mass = self.n, 1.0
            for i in range(self.k - 1):
                if remaining == 0:
                    break
                prob = min(1.0, self.p[i] / mass) if mass > 0 else 0.0
                row[i] = rng.binomial(remaining, prob)
                remaining -= row[i]
                mass -= self.p[i]
            row[-1] += remaining
        return out


def multinomial_pmf(m, x):
    """Returns 0 when ``sum(x) != n`` (not an error)."""
    return m.pmf(x)


def multinomial_rvs(m, rng, size=None):
    return m.rvs(rng, size)
