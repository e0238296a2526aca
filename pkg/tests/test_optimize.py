import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lp_cases import CASES, vertex_enumeration
from numkit.common import EvaluationError, NotPositiveDefinite, Rng, StructuralError, \
    finite_diff_gradient
from numkit.optimize import (
    DeConfig,
    LpProblem,
    Objective,
    TrustRegionState,
    differential_evolution,
    dump_problem,
    linprog,
    linprog_interior_point,
    load_problem,
    lp_presolve,
    minimize_trust_region,
    solve_subproblem_dogleg,
    solve_subproblem_exact,
    solve_subproblem_steihaug,
)


def model(H, g, p):
    return g @ p + 0.5 * p @ H @ p


def random_spd(rng, n, cond=10.0):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q @ np.diag(np.linspace(1.0, cond, n)) @ Q.T


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n))
    return 0.5 * (a + a.T)


def ball_samples(rng, n, delta, k=100_000):
    d = rng.normal(size=(k, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * (delta * rng.uniform(size=k) ** (1.0 / n))[:, None]


def cauchy_decrease_by_sampling(H, g, delta, k=100_000):
    """Best model value along -g within the ball, by dense 1-D sampling."""
    t = np.linspace(0.0, delta / np.linalg.norm(g), k)
    u = -g
    vals = t * (g @ u) + 0.5 * t * t * (u @ H @ u)
    return vals.min()


def rosen(x):
    return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2


def rosen_grad(x):
    return np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2), 200 * (x[1] - x[0] ** 2)])


def rosen_hess(x):
    return np.array([[2 - 400 * x[1] + 1200 * x[0] ** 2, -400 * x[0]], [-400 * x[0], 200.0]])


def quartic(x):
    return float(x @ x) ** 2


def quartic_grad(x):
    return 4 * float(x @ x) * x


def quartic_hess(x):
    return 4 * float(x @ x) * np.eye(x.size) + 8 * np.outer(x, x)


class TestAnalyticGradients:
    @pytest.mark.parametrize("f,g", [(rosen, rosen_grad), (quartic, quartic_grad)])
    def test_gradient_matches_finite_difference(self, f, g):
        rng = Rng(0)
        for _ in range(5):
            x = rng.uniform(-1.5, 1.5, 2)
            np.testing.assert_allclose(g(x), finite_diff_gradient(f, x), atol=1e-6, rtol=1e-6)

    @pytest.mark.parametrize("g,h", [(rosen_grad, rosen_hess), (quartic_grad, quartic_hess)])
    def test_hessian_matches_finite_difference(self, g, h):
        x = np.array([0.3, -0.7])
        fd = np.array([finite_diff_gradient(lambda v: g(v)[i], x) for i in range(2)])
        np.testing.assert_allclose(h(x), fd, atol=1e-5, rtol=1e-6)


class TestDogleg:
    def test_boundary_step_along_gradient(self):
        np.testing.assert_allclose(solve_subproblem_dogleg(np.eye(2), [1.0, 0.0], 0.5), [-0.5, 0])

    def test_interior_newton(self):
        np.testing.assert_allclose(solve_subproblem_dogleg(np.eye(2), [0.1, 0.0], 1.0), [-0.1, 0])

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            solve_subproblem_dogleg(np.diag([1.0, -1.0]), [1.0, 1.0], 1.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_beats_cauchy_point(self, seed):
        rng = Rng(seed)
        H = random_spd(rng, 4, cond=50)
        g = rng.normal(size=4)
        delta = rng.uniform(0.05, 1.0)
        p = solve_subproblem_dogleg(H, g, delta)
        assert np.linalg.norm(p) <= delta * (1 + 1e-6)
        assert model(H, g, p) <= 0
        assert model(H, g, p) <= cauchy_decrease_by_sampling(H, g, delta) + 1e-12


class TestSteihaug:
    def test_zero_gradient(self):
        p = solve_subproblem_steihaug(lambda v: v, np.zeros(3), 1.0)
        assert not np.any(p)

    def test_identity(self):
        g = np.array([0.3, -0.2, 0.1])
        p = solve_subproblem_steihaug(lambda v: v, g, 100.0, cg_tol=1e-14)
        np.testing.assert_allclose(p, -g, atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_direct_solve(self, seed):
        rng = Rng(seed)
        H = random_spd(rng, 6, cond=20)
        g = rng.normal(size=6)
        p = solve_subproblem_steihaug(lambda v: H @ v, g, 1e6, cg_tol=1e-13)
        np.testing.assert_allclose(p, np.linalg.solve(H, -g), atol=1e-8)

    def test_negative_curvature_goes_to_boundary(self):
        H = np.diag([-1.0, 1.0])
        p = solve_subproblem_steihaug(lambda v: H @ v, np.array([1.0, 0.0]), 2.0)
        assert np.linalg.norm(p) == pytest.approx(2.0)
        assert model(H, np.array([1.0, 0.0]), p) < 0

    @pytest.mark.parametrize("seed", range(5))
    def test_inside_region_and_decreasing(self, seed):
        rng = Rng(seed)
        H = random_symmetric(rng, 5)
        g = rng.normal(size=5)
        delta = rng.uniform(0.1, 2.0)
        p = solve_subproblem_steihaug(lambda v: H @ v, g, delta)
        assert np.linalg.norm(p) <= delta * (1 + 1e-6)
        assert model(H, g, p) <= 0


class TestExact:
    def test_boundary(self):
        np.testing.assert_allclose(solve_subproblem_exact(np.eye(2), np.array([1.0, 0]), 0.5),
                                   [-0.5, 0], atol=1e-12)

    def test_hard_case(self):
        H = np.diag([-1.0, 2.0])
        p = solve_subproblem_exact(H, np.zeros(2), 1.0)
        assert abs(p[0]) == pytest.approx(1.0)
        assert p[1] == pytest.approx(0.0, abs=1e-12)
        assert model(H, np.zeros(2), p) == pytest.approx(-0.5)

    def test_hard_case_with_gradient(self):
        H = np.diag([-2.0, 1.0, 3.0])
        g = np.array([0.0, 0.5, 0.3])
        p, lam = solve_subproblem_exact(H, g, 2.0, full_output=True)
        assert lam == pytest.approx(2.0)
        assert np.linalg.norm(p) == pytest.approx(2.0)
        np.testing.assert_allclose((H + lam * np.eye(3)) @ p, -g, atol=1e-10)

    def test_non_symmetric(self):
        with pytest.raises(StructuralError):
            solve_subproblem_exact(np.array([[1.0, 2.0], [0.0, 1.0]]), np.ones(2), 1.0)

    @pytest.mark.parametrize("seed", range(20))
    def test_optimality_conditions(self, seed):
        rng = Rng(seed)
        n = int(rng.integers(2, 7))
        H = random_symmetric(rng, n)
        g = rng.normal(size=n)
        delta = rng.uniform(0.1, 3.0)
        p, lam = solve_subproblem_exact(H, g, delta, full_output=True)
        assert lam >= 0
        assert np.abs((H + lam * np.eye(n)) @ p + g).max() <= 1e-8
        assert lam * abs(delta - np.linalg.norm(p)) <= 1e-8
        assert np.linalg.eigvalsh(H + lam * np.eye(n)).min() >= -1e-8
        assert np.linalg.norm(p) <= delta * (1 + 1e-6)

    @pytest.mark.parametrize("seed", range(3))
    def test_no_sample_beats_it(self, seed):
        rng = Rng(100 + seed)
        H = random_symmetric(rng, 3)
        g = rng.normal(size=3)
        p = solve_subproblem_exact(H, g, 1.0)
        samples = ball_samples(rng, 3, 1.0)
        vals = samples @ g + 0.5 * np.einsum("ij,jk,ik->i", samples, H, samples)
        assert model(H, g, p) <= vals.min() + 1e-12
        assert model(H, g, p) <= cauchy_decrease_by_sampling(H, g, 1.0) + 1e-12


class TestDriver:
    @pytest.mark.parametrize("method", ["dogleg", "trust_ncg", "trust_exact"])
    def test_rosenbrock(self, method):
        res = minimize_trust_region(Objective(rosen, rosen_grad, rosen_hess), [-1.2, 1.0], method)
        assert res.status == "converged"
        assert res.iterations <= 100
        np.testing.assert_allclose(res.x, [1.0, 1.0], atol=1e-6)
        assert res.grad_norm <= 1e-8
        trace = res.info["trace"]
        assert all(b < a for a, b in zip(trace, trace[1:]))
        assert all(0 < r <= 1000 for r in res.info["radii"])

    def test_quadratic_one_step(self):
        rng = Rng(3)
        H = random_spd(rng, 5, cond=100)
        b = rng.normal(size=5)
        obj = Objective(lambda x: 0.5 * x @ H @ x - b @ x, lambda x: H @ x - b, lambda x: H)
        state = TrustRegionState(delta=1000.0)
        res = minimize_trust_region(obj, np.zeros(5), "trust_exact", state)
        xstar = np.linalg.solve(H, b)
        assert len(res.info["trace"]) >= 2
        # first accepted iterate: trace[1] is f there, and the run stops after it
        assert res.iterations == 1
        np.testing.assert_allclose(res.x, xstar, atol=1e-10)

    @pytest.mark.parametrize("method", ["dogleg", "trust_ncg", "trust_exact"])
    def test_quartic_monotone(self, method):
        obj = Objective(quartic, quartic_grad, quartic_hess)
        res = minimize_trust_region(obj, [1.5, -0.5, 2.0], method)
        trace = res.info["trace"]
        assert all(b < a for a, b in zip(trace, trace[1:]))
        assert res.status == "converged"
        assert res.grad_norm <= 1e-8

    def test_hessvec_only(self):
        obj = Objective(rosen, rosen_grad, hessvec=lambda x, v: rosen_hess(x) @ v)
        res = minimize_trust_region(obj, [-1.2, 1.0], "trust_ncg")
        assert res.status == "converged"
        with pytest.raises(ValueError):
            minimize_trust_region(obj, [-1.2, 1.0], "dogleg")

    def test_callback_error(self):
        def bad(x):
            if x[0] > 0:
                raise RuntimeError("boom")
            return rosen(x)
        res = minimize_trust_region(Objective(bad, rosen_grad, rosen_hess), [-1.2, 1.0])
        assert res.status == "callback_error"
        assert "boom" in res.message

    def test_max_iter(self):
        res = minimize_trust_region(Objective(rosen, rosen_grad, rosen_hess), [-1.2, 1.0],
                                    "dogleg", max_iter=3)
        assert res.status == "max_iter" and res.iterations == 3

    def test_state_validation(self):
        with pytest.raises(ValueError):
            TrustRegionState(eta=0.3)
        with pytest.raises(ValueError):
            TrustRegionState(delta=2000.0)


def sphere(x):
    return float(x @ x)


class TestDifferentialEvolution:
    def test_sphere(self):
        res = differential_evolution(sphere, [(-5, 5)] * 3, DeConfig(seed=42, maxiter=300))
        hist = res.info["history"]
        assert res.fun <= 1e-6
        assert min(i for i, v in enumerate(hist) if v <= 1e-6) <= 300
        assert all(b <= a for a, b in zip(hist, hist[1:]))

    def test_bit_identical(self):
        cfg = DeConfig(seed=7, maxiter=50, mutation=(0.5, 1.0))
        a = differential_evolution(sphere, [(-5, 5)] * 3, cfg)
        b = differential_evolution(sphere, [(-5, 5)] * 3, cfg)
        assert a.x.tobytes() == b.x.tobytes()
        assert a.info["population"].tobytes() == b.info["population"].tobytes()
        assert a.info["history"] == b.info["history"]

    def test_constant_objective(self):
        cfg = DeConfig(seed=1, maxiter=5, tol=0)
        res = differential_evolution(lambda x: 3.0, [(0, 1)] * 2, cfg)
        init = differential_evolution(lambda x: 3.0, [(0, 1)] * 2, DeConfig(seed=1, maxiter=0))
        assert res.fun == 3.0
        np.testing.assert_array_equal(res.info["population"], init.info["population"])

    @given(st.integers(0, 2**32))
    @settings(max_examples=5, deadline=None)
    def test_candidates_inside_bounds(self, seed):
        bounds = np.array([(-1.0, 2.0), (0.0, 0.5), (3.0, 3.0)])
        seen = []

        def f(x):
            seen.append(x.copy())
            return float(np.sum(np.sin(5 * x)))

        differential_evolution(f, bounds, DeConfig(seed=seed, maxiter=100, tol=0, popsize=5))
        pts = np.array(seen)
        assert len(pts) >= 2 * 15
        assert np.all(pts >= bounds[:, 0]) and np.all(pts <= bounds[:, 1])

    def test_all_nonfinite(self):
        with pytest.raises(EvaluationError):
            differential_evolution(lambda x: np.nan, [(0, 1)], DeConfig(maxiter=2))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DeConfig(mutation=2.5)
        with pytest.raises(ValueError):
            DeConfig(strategy="rand1bin")


class TestLinprog:
    @pytest.mark.parametrize("name,problem,expected", CASES, ids=[c[0] for c in CASES])
    @pytest.mark.parametrize("presolve", [True, False])
    def test_cases(self, name, problem, expected, presolve):
        res = linprog(problem, presolve=presolve)
        assert res.status == expected
        if expected == "optimal":
            ref = vertex_enumeration(problem)
            assert res.objective == pytest.approx(ref, rel=1e-6, abs=1e-6)
            assert problem.primal_residual(res.x) <= 1e-8
            assert max(res.residuals.values()) <= 1e-8
        else:
            assert res.certificate is not None
            assert res.certificate.kind == expected
            assert res.certificate.verify(problem)

    def test_simple_vertex_point(self):
        res = linprog_interior_point(LpProblem.create([-1, -2], [[1, 1]], [1]))
        np.testing.assert_allclose(res.x, [0, 1], atol=1e-7)

    def test_unbounded_single(self):
        res = linprog_interior_point(LpProblem.create([-1]))
        assert res.status == "unbounded"
        assert res.certificate.ray[0] > 0

    def test_infeasible_and_unbounded_reports_infeasible(self):
        # x1 - x2 <= -1 and -x1 + x2 <= -1 cannot both hold; cost has a ray
        p = LpProblem.create([-1, -1], [[1, -1], [-1, 1]], [-1, -1])
        assert linprog(p).status == "infeasible"

    def test_iteration_limit(self):
        res = linprog_interior_point(CASES[9][1], max_iter=1)
        assert res.status == "numerical_failure"
        assert "iteration" in res.message


class TestPresolve:
    def test_fixed_variable_folded(self):
        p = LpProblem.create([2, 1], [[1, 1]], [10], bounds=[(3, 3), (0, None)])
        pre = lp_presolve(p)
        assert pre.offset == 6.0
        assert pre.problem is None or pre.problem.n <= 1
        assert ("fix", 0, 3.0) in pre.transforms

    def test_zero_row(self):
        p = LpProblem.create([1, 1], A_eq=[[0, 0]], b_eq=[1])
        assert lp_presolve(p).status == "infeasible"

    def test_dependent_rows_removed(self):
        p = LpProblem.create([1, 1, 1], A_eq=[[1, 1, 0], [0, 1, 1], [1, 2, 1]], b_eq=[1, 1, 2])
        pre = lp_presolve(p)
        assert pre.status is None
        assert pre.problem.b_eq.size == 2

    def test_restore_full_length(self):
        p = LpProblem.create([1, 1, -1], [[1, 0, 1]], [4], bounds=[(0, None), (2, 2), (0, 3)])
        res = linprog(p)
        assert res.x.size == 3 and res.x[1] == 2.0
        assert res.objective == pytest.approx(vertex_enumeration(p), abs=1e-7)

    @pytest.mark.parametrize("seed", range(15))
    def test_random_feasible(self, seed):
        rng = Rng(seed)
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, 5))
        x0 = rng.uniform(0, 5, n)
        A = rng.normal(size=(m, n))
        b = A @ x0 + rng.uniform(0.1, 1, m)
        lo = np.zeros(n)
        hi = np.full(n, 10.0)
        k = int(rng.integers(0, n))
        lo[k] = hi[k] = x0[k]  # one fixed variable
        A = np.vstack((A, np.eye(n)[:1] * 2.0))  # one singleton row
        b = np.append(b, 2.0 * max(x0[0], lo[0]) + 1.0)
        A_eq = rng.normal(size=(1, n))
        A_eq = np.vstack((A_eq, 2 * A_eq))  # dependent pair
        b_eq = A_eq @ x0
        p = LpProblem.create(rng.normal(size=n), A, b, A_eq, b_eq, list(zip(lo, hi)))
        ref = vertex_enumeration(p)
        with_pre = linprog(p)
        without = linprog(p, presolve=False)
        assert with_pre.status == without.status == "optimal"
        assert with_pre.objective == pytest.approx(ref, rel=1e-8, abs=1e-7)
        assert with_pre.objective == pytest.approx(without.objective, rel=1e-8, abs=1e-7)


class TestLpJson:
    def test_round_trip_with_nulls(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"c": [1, -1], "A_ub": [[1, 1]], "b_ub": [3],
                                    "bounds": [[None, 2], [0, None]]}))
        p = load_problem(path)
        assert p.lower[0] == -np.inf and p.upper[1] == np.inf
        dump_problem(p, tmp_path / "q.json")
        q = load_problem(tmp_path / "q.json")
        np.testing.assert_array_equal(p.bounds, q.bounds)
        assert json.loads((tmp_path / "q.json").read_text())["bounds"][0] == [None, 2.0]

    def test_invalid(self):
        with pytest.raises(StructuralError):
            LpProblem.from_dict({"c": [1], "A_ub": [[1, 2]], "b_ub": [1]})
        with pytest.raises(StructuralError):
            LpProblem.from_dict({"c": [1], "bounds": [[2, 1]]})
        with pytest.raises(StructuralError):
            LpProblem.from_dict({"c": [1], "foo": 1})
