"""Differential evolution, best1bin strategy."""

from dataclasses import dataclass

import numpy as np

from ..common import EvaluationError, Rng
from ._trustregion import MinimizeResult


@dataclass(frozen=True)
class DeConfig:
    """``mutation`` is a float F or a ``(lo, hi)`` pair dithered per generation.

    The run stops when ``std(energies) <= atol + tol * |mean(energies)|``
    or after ``maxiter`` generations.
    """

    popsize: int = 15
    mutation: object = 0.8
    recombination: float = 0.7
    strategy: str = "best1bin"
    maxiter: int = 1000
    seed: int = 0
    tol: float = 0.01
    atol: float = 0.0

    def __post_init__(self):
        if self.strategy != "best1bin":
            raise ValueError("only the best1bin strategy is supported")
        lo, hi = self.mutation_range
        if not 0 <= lo <= hi < 2:
            raise ValueError("mutation must lie in [0, 2)")
        if not 0 <= self.recombination <= 1:
            raise ValueError("recombination must lie in [0, 1]")
        if self.popsize < 1 or self.maxiter < 0:
            raise ValueError("popsize must be positive and maxiter nonnegative")

    @property
    def mutation_range(self):
        m = self.mutation
        if np.ndim(m) == 0:
            return float(m), float(m)
        lo, hi = m
        return float(lo), float(hi)


def _evaluate(f, pop):
    out = np.empty(pop.shape[0])
    for i, member in enumerate(pop):
        v = float(f(member))
        out[i] = v if np.isfinite(v) else np.inf
    return out


def differential_evolution(f, bounds, cfg=None, callback=None):
    """Minimize ``f`` over the box ``bounds`` (a sequence of ``(lo, hi)``).

    Each generation builds every trial vector from the population as it
    stood at the start of the generation, then applies greedy selection in
    index order; a trial replaces its parent only if strictly better.
    ``info`` carries the final population, its energies and the best-so-far
    value per generation.
    """
    cfg = cfg if cfg is not None else DeConfig()
    b = np.asarray(bounds, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] != 2:
        raise ValueError("bounds must be a sequence of (lo, hi) pairs")
    if not np.all(np.isfinite(b)) or np.any(b[:, 0] > b[:, 1]):
        raise ValueError("bounds must be finite with lo <= hi")
    lo, span = b[:, 0], b[:, 1] - b[:, 0]
    n = b.shape[0]
    npop = max(5, cfg.popsize * n)
    rng = Rng(cfg.seed)
    f_lo, f_hi = cfg.mutation_range

    pop = lo + rng.uniform(size=(npop, n)) * span
    energies = _evaluate(f, pop)
    nfev = npop
    if not np.any(np.isfinite(energies)):
        raise EvaluationError("objective is non-finite at every initial member")
    best = int(np.argmin(energies))
    history = [float(energies[best])]
    status, message = "max_iter", "generation limit reached"
    gen = 0
    for gen in range(1, cfg.maxiter + 1):
        F = f_lo if f_lo == f_hi else rng.uniform(f_lo, f_hi)
        trials = np.empty_like(pop)
        for i in range(npop):
            others = [j for j in range(npop) if j != i]
            r1, r2 = rng.choice_without_replacement(len(others), 2)
            mutant = pop[best] + F * (pop[others[r1]] - pop[others[r2]])
            cross = rng.uniform(size=n) < cfg.recombination
            cross[rng.integers(0, n)] = True
            trials[i] = np.clip(np.where(cross, mutant, pop[i]), b[:, 0], b[:, 1])
        trial_energies = _evaluate(f, trials)
        nfev += npop
        improved = trial_energies < energies
        pop[improved] = trials[improved]
        energies[improved] = trial_energies[improved]
        best = int(np.argmin(energies))
        history.append(float(energies[best]))
        if callback is not None:
            callback(gen, pop[best].copy(), float(energies[best]))
        finite = energies[np.isfinite(energies)]
        if finite.size == npop and np.std(finite) <= cfg.atol + cfg.tol * abs(np.mean(finite)):
            status, message = "converged", "population spread below tolerance"
            break
    return MinimizeResult(
        x=pop[best].copy(), fun=float(energies[best]), grad_norm=np.nan, iterations=gen,
        status=status, message=message, nfev=nfev,
        info={"population": pop, "energies": energies, "history": history},
    )
