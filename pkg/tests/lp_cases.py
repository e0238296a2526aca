"""Hand-built small LPs and a vertex-enumeration oracle."""

import itertools

import numpy as np

from numkit.optimize import LpProblem

INF = None


def vertex_enumeration(p, tol=1e-9):
    """Minimum of ``c.x`` over all basic feasible points, or None.

    Only valid for pointed, bounded-below feasible regions.
    """
    n = p.n
    G, h = [p.A_ub], [p.b_ub]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(p.lower[j]):
            G.append(-e[None, :])
            h.append([-p.lower[j]])
        if np.isfinite(p.upper[j]):
            G.append(e[None, :])
            h.append([p.upper[j]])
    G = np.vstack(G) if G else np.zeros((0, n))
    h = np.concatenate([np.asarray(v, dtype=float) for v in h])
    r = np.linalg.matrix_rank(p.A_eq) if p.b_eq.size else 0
    best = None
    for S in itertools.combinations(range(G.shape[0]), n - r):
        M = np.vstack((p.A_eq, G[list(S)]))
        rhs = np.concatenate((p.b_eq, h[list(S)]))
        if np.linalg.matrix_rank(M) < n:
            continue
        x = np.linalg.lstsq(M, rhs, rcond=None)[0]
        if p.b_eq.size and np.abs(p.A_eq @ x - p.b_eq).max() > tol * (1 + np.abs(p.b_eq).max()):
            continue
        if G.shape[0] and np.max(G @ x - h) > tol * (1 + np.abs(h).max()):
            continue
        val = float(p.c @ x)
        if best is None or val < best:
            best = val
    return best


def _transport():
    cost = np.array([[4.0, 6.0, 9.0, 5.0], [5.0, 3.0, 8.0, 7.0]])
    supply = [30.0, 40.0]
    demand = [15.0, 20.0, 10.0, 25.0]
    A_ub = np.zeros((2, 8))
    for i in range(2):
        A_ub[i, 4 * i:4 * i + 4] = 1.0
    A_eq = np.zeros((4, 8))
    for j in range(4):
        A_eq[j, j] = A_eq[j, 4 + j] = 1.0
    return LpProblem.create(cost.ravel(), A_ub, supply, A_eq, demand)


# (name, problem, expected status)
CASES = [
    ("simple_vertex", LpProblem.create([-1, -2], [[1, 1]], [1]), "optimal"),
    ("optimal_face", LpProblem.create([-1, -1], [[1, 1]], [1]), "optimal"),
    ("simplex_equality", LpProblem.create([1, 2, 3], A_eq=[[1, 1, 1]], b_eq=[1]), "optimal"),
    ("free_variable", LpProblem.create([1], [[-1]], [3], bounds=[(INF, INF)]), "optimal"),
    ("textbook_max", LpProblem.create([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18]), "optimal"),
    ("covering", LpProblem.create([2, 3, 4], [[-1, -1, -1]], [-3],
                                  bounds=[(0, 1), (0, 1), (0, INF)]), "optimal"),
    ("degenerate_vertex", LpProblem.create([-1, -1], [[1, 0], [0, 1], [1, 1]], [1, 1, 2]),
     "optimal"),
    ("fixed_variable", LpProblem.create([1, 1], [[-1, -1]], [-4], bounds=[(3, 3), (0, INF)]),
     "optimal"),
    ("dependent_equalities", LpProblem.create([1, -1], A_eq=[[1, 1], [2, 2]], b_eq=[2, 4],
                                              bounds=[(0, 5), (0, 5)]), "optimal"),
    ("transportation", _transport(), "optimal"),
    ("zero_optimum_face", LpProblem.create([0, 0, 1], A_eq=[[1, 1, 1]], b_eq=[1]), "optimal"),
    ("negative_bounds", LpProblem.create([1, -1], [[1, 1]], [0], bounds=[(-2, 2), (-3, 1)]),
     "optimal"),
    ("contradictory_rows", LpProblem.create([1, 1], [[1, 1], [-1, -1]], [1, -2]), "infeasible"),
    ("bound_vs_row", LpProblem.create([1], [[1]], [-1]), "infeasible"),
    ("inconsistent_equalities", LpProblem.create([1, 1], A_eq=[[1, 1], [1, 1]], b_eq=[1, 2]),
     "infeasible"),
    ("box_too_small", LpProblem.create([1, 1], A_eq=[[1, 1]], b_eq=[3],
                                       bounds=[(0, 1), (0, 1)]), "infeasible"),
    ("free_ray", LpProblem.create([-1]), "unbounded"),
    ("strip_ray", LpProblem.create([-1, -1], [[1, -1], [-1, 1]], [1, 1]), "unbounded"),
    ("equality_ray", LpProblem.create([0, 0, -1], A_eq=[[1, 1, -1]], b_eq=[0]), "unbounded"),
]
