"""Tests for the dense QP solver and its grid oracle."""

import numpy as np
import pytest
from scipy.stats import ortho_group

from t2freg.qp import (
    INFEASIBLE,
    LOCAL_STATIONARY,
    OPTIMAL_CONVEX,
    UNBOUNDED,
    QpProblem,
    SolverConfig,
    brute_force_oracle,
    classify,
    solve,
)


def box_problem(hess, grad, const, rows, rhs, bound=5.0):
    """Append box rows so the solver and the grid oracle share one feasible set."""
    hess = np.asarray(hess, dtype=float)
    dim = hess.shape[0]
    rows = np.asarray(rows, dtype=float).reshape(-1, dim)
    full_rows = np.vstack([rows, np.eye(dim), -np.eye(dim)])
    full_rhs = np.concatenate([np.asarray(rhs, dtype=float), np.full(2 * dim, bound)])
    return QpProblem(hess, grad, const, full_rows, full_rhs)


def random_interior_convex(rng, dim):
    """Random strictly convex instance whose optimum is interior by
    construction (constraints carry slack at the unconstrained minimizer)."""
    q = ortho_group.rvs(dim, random_state=rng)
    hess = q @ np.diag(rng.uniform(0.5, 2.0, size=dim)) @ q.T
    x_star = rng.uniform(-2.0, 2.0, size=dim)
    grad = -hess @ x_star
    m = int(rng.integers(1, 6))
    rows = rng.normal(size=(m, dim))
    rhs = rows @ x_star + rng.uniform(0.2, 1.0, size=m)
    return box_problem(hess, grad, 0.0, rows, rhs), x_star


class TestQpProblem:
    def test_hessian_symmetrized(self):
        p = QpProblem([[1.0, 2.0], [0.0, 1.0]], [0.0, 0.0], 0.0, np.zeros((0, 2)), [])
        assert np.array_equal(p.hessian, [[1.0, 1.0], [1.0, 1.0]])

    def test_shape_validation(self):
        with pytest.raises(ValueError, match="square"):
            QpProblem(np.zeros((2, 3)), np.zeros(2), 0.0, np.zeros((0, 2)), [])
        with pytest.raises(ValueError, match="gradient"):
            QpProblem(np.eye(2), np.zeros(3), 0.0, np.zeros((0, 2)), [])
        with pytest.raises(ValueError, match="constraint matrix"):
            QpProblem(np.eye(2), np.zeros(2), 0.0, np.zeros((1, 3)), [0.0])
        with pytest.raises(ValueError, match="rhs"):
            QpProblem(np.eye(2), np.zeros(2), 0.0, np.zeros((1, 2)), [0.0, 1.0])

    def test_immutability(self):
        p = QpProblem(np.eye(2), np.zeros(2), 0.0, np.zeros((0, 2)), [])
        with pytest.raises(ValueError):
            p.hessian[0, 0] = 5.0


class TestClassify:
    def test_identity_is_convex(self):
        assert classify(QpProblem(np.eye(3), np.zeros(3), 0, np.zeros((0, 3)), [])) == "convex"

    def test_negative_identity_is_indefinite(self):
        assert classify(QpProblem(-np.eye(3), np.zeros(3), 0, np.zeros((0, 3)), [])) == "indefinite"

    def test_mixed_signs_is_indefinite(self):
        p = QpProblem(np.diag([1.0, -1.0]), np.zeros(2), 0, np.zeros((0, 2)), [])
        assert classify(p) == "indefinite"

    def test_zero_hessian_is_convex(self):
        assert classify(QpProblem(np.zeros((2, 2)), np.zeros(2), 0, np.zeros((0, 2)), [])) == "convex"


class TestSolve:
    def test_projection_onto_halfline(self):
        p = QpProblem([[2.0]], [0.0], 0.0, [[-1.0]], [-1.0])
        s = solve(p)
        assert s.status == OPTIMAL_CONVEX
        assert s.point[0] == pytest.approx(1.0, abs=1e-9)
        assert s.objective_value == pytest.approx(1.0, abs=1e-9)

    def test_projection_onto_halfplane(self):
        # min (x-2)^2 + (y-3)^2 s.t. x + y <= 4
        p = QpProblem(2 * np.eye(2), [-4.0, -6.0], 13.0, [[1.0, 1.0]], [4.0])
        s = solve(p)
        assert s.status == OPTIMAL_CONVEX
        assert s.point == pytest.approx([1.5, 2.5], abs=1e-9)

    def test_concave_picks_better_vertex(self):
        # min -x^2 over [0, 1]: both endpoints are stationary, multi-start
        # must return the better one.
        p = QpProblem([[-2.0]], [0.0], 0.0, [[-1.0], [1.0]], [0.0, 1.0])
        s = solve(p)
        assert s.status == LOCAL_STATIONARY
        assert s.point[0] == pytest.approx(1.0, abs=1e-9)
        assert s.objective_value == pytest.approx(-1.0, abs=1e-9)

    def test_infeasible(self):
        p = QpProblem([[2.0]], [0.0], 0.0, [[1.0], [-1.0]], [0.0, -1.0])
        s = solve(p)
        assert s.status == INFEASIBLE

    def test_unbounded_ray(self):
        # min -x^2 with x >= 0: escapes to the artificial box.
        p = QpProblem([[-2.0]], [0.0], 0.0, [[-1.0]], [0.0])
        s = solve(p)
        assert s.status == UNBOUNDED

    def test_unconstrained_newton(self):
        p = QpProblem(np.diag([2.0, 4.0]), [-2.0, -8.0], 0.0, np.zeros((0, 2)), [])
        s = solve(p)
        assert s.status == OPTIMAL_CONVEX
        assert s.point == pytest.approx([1.0, 2.0], abs=1e-10)

    def test_zero_objective_returns_feasible_point(self):
        p = box_problem(np.zeros((2, 2)), np.zeros(2), 0.0, np.zeros((0, 2)), [], bound=1.0)
        s = solve(p)
        assert s.status == OPTIMAL_CONVEX
        assert p.violations(s.point).max(initial=0.0) <= 1e-9

    def test_equalities_as_paired_inequalities(self):
        # x + y = 1 encoded as two rows; min x^2 + y^2 -> (0.5, 0.5)
        rows = [[1.0, 1.0], [-1.0, -1.0]]
        p = QpProblem(2 * np.eye(2), np.zeros(2), 0.0, rows, [1.0, -1.0])
        s = solve(p)
        assert s.status == OPTIMAL_CONVEX
        assert s.point == pytest.approx([0.5, 0.5], abs=1e-9)


class TestInvariants:
    def test_determinism_bit_exact(self, rng):
        for _ in range(10):
            dim = int(rng.integers(2, 5))
            hess = rng.normal(size=(dim, dim))
            p = box_problem(hess + hess.T, rng.normal(size=dim), 0.0, np.zeros((0, dim)), [])
            cfg = SolverConfig(seed=42)
            s1, s2 = solve(p, cfg), solve(p, cfg)
            assert s1.point.tobytes() == s2.point.tobytes()
            assert s1.objective_value == s2.objective_value

    def test_kkt_residual_small_on_random_problems(self, rng):
        for _ in range(30):
            dim = int(rng.integers(2, 5))
            hess = rng.normal(size=(dim, dim))
            hess = hess + hess.T
            x_feas = rng.uniform(-1, 1, size=dim)
            m = int(rng.integers(1, 8))
            rows = rng.normal(size=(m, dim))
            rhs = rows @ x_feas + rng.uniform(0.1, 1.0, size=m)
            p = box_problem(hess, rng.normal(size=dim), 0.0, rows, rhs, bound=8.0)
            s = solve(p)
            grad_norm = np.linalg.norm(p.hessian @ s.point + p.gradient_vec)
            assert s.kkt_residual <= 1e-6 * (1.0 + grad_norm)
            assert p.violations(s.point).max(initial=0.0) <= 1e-8

    def test_complementary_slackness(self, rng):
        p, _ = random_interior_convex(rng, 3)
        s = solve(p)
        slack = p.constraint_rhs - p.constraint_matrix @ s.point
        for idx, lam in zip(s.active_set, s.multipliers):
            assert lam >= -1e-12
            assert slack[idx] <= 1e-5 * (1.0 + abs(p.constraint_rhs[idx]))

    def test_scaling_leaves_argmin(self, rng):
        for _ in range(10):
            p, _ = random_interior_convex(rng, 2)
            lam = float(rng.uniform(0.5, 20.0))
            scaled = QpProblem(
                lam * p.hessian, lam * p.gradient_vec, lam * p.constant,
                p.constraint_matrix, p.constraint_rhs,
            )
            assert solve(p).point == pytest.approx(solve(scaled).point, abs=1e-7)

    def test_objective_below_oracle(self, rng):
        # Mixed random instances, constrained optima allowed: the solver must
        # never do worse than the best feasible grid point.
        for _ in range(100):
            dim = int(rng.integers(2, 4))
            m_mat = rng.normal(size=(dim, dim))
            hess = m_mat.T @ m_mat + 0.3 * np.eye(dim)
            x_feas = rng.uniform(-2, 2, size=dim)
            m = int(rng.integers(1, 6))
            rows = rng.normal(size=(m, dim))
            rhs = rows @ x_feas + rng.uniform(0.1, 1.0, size=m)
            p = box_problem(hess, rng.normal(size=dim), 0.0, rows, rhs)
            s = solve(p)
            _, oracle_val = brute_force_oracle(p, [(-5.0, 5.0)] * dim, 41)
            assert s.objective_value <= oracle_val + 1e-9


class TestBruteForceOracle:
    def test_matches_closed_form(self):
        p = QpProblem([[2.0]], [0.0], 0.0, [[-1.0]], [-1.0])
        pt, val = brute_force_oracle(p, [(0.0, 2.0)], 201)
        assert pt[0] == pytest.approx(1.0, abs=2.0 / 200 + 1e-12)
        assert val == pytest.approx(1.0, abs=0.05)

    def test_empty_feasible_grid(self):
        p = QpProblem([[2.0]], [0.0], 0.0, [[1.0], [-1.0]], [0.0, -1.0])
        with pytest.raises(ValueError, match="no feasible grid point"):
            brute_force_oracle(p, [(0.0, 1.0)], 51)

    def test_random_convex_agreement(self, rng):
        for _ in range(20):
            p, _ = random_interior_convex(rng, 2)
            s = solve(p)
            pt, _ = brute_force_oracle(p, [(-5.0, 5.0)] * 2, 101)
            assert np.abs(s.point - pt).max() <= 2 * (10.0 / 100) + 1e-9

    def test_dimension_limit(self):
        p = QpProblem(np.eye(6), np.zeros(6), 0.0, np.zeros((0, 6)), [])
        with pytest.raises(ValueError, match="dim <= 5"):
            brute_force_oracle(p, [(0.0, 1.0)] * 6, 3)

    def test_resolution_validation(self):
        p = QpProblem([[2.0]], [0.0], 0.0, np.zeros((0, 1)), [])
        with pytest.raises(ValueError, match="resolution"):
            brute_force_oracle(p, [(0.0, 1.0)], 1)

    def test_box_mismatch(self):
        p = QpProblem(np.eye(2), np.zeros(2), 0.0, np.zeros((0, 2)), [])
        with pytest.raises(ValueError, match="box"):
            brute_force_oracle(p, [(0.0, 1.0)], 11)
