"""Built-in benchmark suites.

Each suite has a parameter grid; every combination is one case.
"""

import fnmatch
import itertools

import numpy as np

from ..common import Rng
from ._core import BenchError, BenchmarkCase

_SEED = 20190101


def _spatial_setup(n, m, queries):
    from ..spatial import build
    rng = Rng(_SEED)
    tree = build(rng.uniform(size=(n, m)))
    return tree, rng.uniform(size=(queries, m))


def _spatial_timed(ctx):
    tree, q = ctx
    tree.query(q, k=1)


def _sparse_setup(n, density, target):
    from ..sparse import random
    return random((n, n), density, Rng(_SEED)), target


def _sparse_timed(ctx):
    m, target = ctx
    m.asformat(target)


def _lp_setup(n, m):
    from ..optimize import LpProblem
    rng = Rng(_SEED)
    A = rng.uniform(-1.0, 1.0, size=(m, n))
    x0 = rng.uniform(0.0, 1.0, size=n)
    b = A @ x0 + rng.uniform(0.1, 1.0, size=m)
    # a box keeps every instance bounded
    return LpProblem.create(rng.uniform(-1.0, 1.0, size=n), A_ub=A, b_ub=b,
                            bounds=[(0.0, 10.0)] * n)


def _lp_timed(problem):
    from ..optimize import linprog
    linprog(problem)


def _bspline_setup(ncoef, k, points):
    from ..interpolate import BSpline, clamped_knots
    rng = Rng(_SEED)
    t = clamped_knots(np.linspace(0.0, 1.0, ncoef - k + 1), k)
    return BSpline(t, rng.uniform(size=ncoef), k), rng.uniform(size=points)


def _bspline_timed(ctx):
    s, xs = ctx
    s(xs)


# name -> (grid, setup, timed)
SUITES = {
    "spatial_query": ({"n": [10000], "m": [2, 4, 8, 16], "queries": [1000]},
                      _spatial_setup, _spatial_timed),
    "sparse_convert": ({"n": [2000], "density": [0.01], "target": ["csr", "csc", "dok"]},
                       _sparse_setup, _sparse_timed),
    "lp_solve": ({"n": [8, 32], "m": [16]}, _lp_setup, _lp_timed),
    "bspline_eval": ({"ncoef": [100, 1000], "k": [3], "points": [10000]},
                     _bspline_setup, _bspline_timed),
}


def parse_value(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_params(pairs):
    """``["m=4", "n=1000,10000"]`` -> ``{"m": [4], "n": [1000, 10000]}``."""
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise BenchError(f"bad --param {pair!r}; expected key=value")
        out.setdefault(key.strip(), []).extend(parse_value(v.strip()) for v in value.split(","))
    return out


def select_suites(pattern):
    """Exact names must exist; glob patterns may match nothing."""
    if pattern is None:
        return sorted(SUITES)
    if any(ch in pattern for ch in "*?["):
        return sorted(fnmatch.filter(SUITES, pattern))
    if pattern not in SUITES:
        raise BenchError(f"unknown suite {pattern!r}; available: {', '.join(sorted(SUITES))}")
    return [pattern]


def make_cases(pattern=None, params=None, repeats=10, warmup=3):
    """Cases for the selected suites.

    A param whose key is in a suite's grid replaces that axis; a key the
    suite does not have excludes the suite, so a filter can match nothing.
    """
    params = params or {}
    cases = []
    for name in select_suites(pattern):
        grid, setup, timed = SUITES[name]
        if any(key not in grid for key in params):
            continue
        axes = {k: params.get(k, v) for k, v in grid.items()}
        keys = list(axes)
        for combo in itertools.product(*(axes[k] for k in keys)):
            cases.append(BenchmarkCase(name, dict(zip(keys, combo)), setup, timed,
                                       repeats=repeats, warmup=warmup))
    return cases
