import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrsd.matrix import DenseMatrix
from lrsd.solver import (
    DegenerateInputError,
    SolverConfig,
    auto_config,
    default_params,
    detect,
    estimate_sigma,
    objective,
    optimality_residual,
    soft_threshold,
    solve,
    svt,
)


class TestObjective:
    def test_zero_components(self):
        D = np.array([[3.0, 4.0]])
        assert objective(D, np.zeros_like(D), np.zeros_like(D), 1.0, 1.0) == pytest.approx(12.5)

    def test_diagonal_nuclear_norm(self):
        X = np.diag([2.0, 3.0])
        assert objective(X, X, np.zeros_like(X), 1.0, 1.0) == pytest.approx(5.0)

    def test_matches_definitions(self):
        rng = np.random.default_rng(0)
        D, X, E = rng.normal(size=(3, 5, 4))
        expected = (
            0.5 * ((D - X - E) ** 2).sum()
            + 2.0 * np.linalg.svd(X, compute_uv=False).sum()
            + 0.5 * np.abs(E).sum()
        )
        assert objective(D, X, E, 2.0, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            objective(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)), 1, 1)


class TestSvt:
    def test_diagonal(self):
        out = svt(np.diag([5.0, 2.0, 1.0]), 1.5)
        assert np.allclose(out, np.diag([3.5, 0.5, 0.0]), atol=1e-12)

    def test_lambda_zero_identity(self):
        rng = np.random.default_rng(1)
        m = rng.normal(size=(4, 6))
        assert np.abs(svt(m, 0.0) - m).max() < 1e-10

    def test_negative_lambda(self):
        with pytest.raises(ValueError):
            svt(np.zeros((2, 2)), -0.1)

    def test_local_optimality_probe(self):
        # prox of the nuclear norm: no norm-1e-3 perturbation improves it
        rng = np.random.default_rng(2)
        M = rng.normal(size=(4, 3))
        lam = 1.0
        X = svt(M, lam)

        def f(Z):
            return 0.5 * ((M - Z) ** 2).sum() + lam * np.linalg.svd(Z, compute_uv=False).sum()

        base = f(X)
        for _ in range(1000):
            P = rng.normal(size=X.shape)
            P *= 1e-3 / np.linalg.norm(P)
            assert f(X + P) >= base - 1e-12


class TestSoftThreshold:
    def test_matrix_example(self):
        M = np.array([[3.0, -2.0], [0.5, 0.0]])
        assert np.array_equal(soft_threshold(M, 1.0), np.array([[2.0, -1.0], [0.0, 0.0]]))

    def test_beta_zero_identity(self):
        m = np.array([[1.0, -2.0]])
        assert np.array_equal(soft_threshold(m, 0.0), m)

    def test_negative_beta(self):
        with pytest.raises(ValueError):
            soft_threshold(np.zeros((1, 1)), -1.0)

    def test_scalar_grid_oracle(self):
        # 1-D grid minimization of 0.5*(1.7-e)^2 + 0.9|e| at step 1e-5
        e = np.arange(-5.0, 5.0 + 1e-5, 1e-5)
        grid_min = e[(0.5 * (1.7 - e) ** 2 + 0.9 * np.abs(e)).argmin()]
        assert soft_threshold(np.array([[1.7]]), 0.9)[0, 0] == pytest.approx(grid_min, abs=1e-4)
        assert soft_threshold(np.array([[1.7]]), 0.9)[0, 0] == pytest.approx(0.8)

    @settings(max_examples=100)
    @given(st.floats(-50, 50), st.floats(0, 20))
    def test_scalar_prox_formula(self, m, beta):
        out = soft_threshold(np.array([[m]]), beta)[0, 0]
        assert out == pytest.approx(np.sign(m) * max(abs(m) - beta, 0.0), abs=1e-12)


class TestSigmaAndParams:
    def test_constant_matrix_zero(self):
        assert estimate_sigma(np.full((3, 3), 4.0)) == 0.0

    def test_direct_formula(self):
        assert estimate_sigma(np.array([[1.0, 2, 3, 4, 100]])) == pytest.approx(1.48)

    def test_gaussian_consistency(self):
        rng = np.random.default_rng(3)
        d = rng.normal(0, 2.0, size=(500, 500))
        assert 1.8 <= estimate_sigma(d) <= 2.2

    def test_default_params_examples(self):
        a, b = default_params(100, 50, 1.0)
        assert a == pytest.approx(17.0711, abs=1e-4)
        assert b == pytest.approx(3.41421, abs=1e-4)
        a, b = default_params(4, 4, 0.5)
        assert (a, b) == (pytest.approx(2.0), pytest.approx(2.0))
        a, b = default_params(32, 466423, 1.0)
        assert a == pytest.approx(688.61, abs=0.01)
        assert b == pytest.approx(2.0166, abs=1e-3)

    def test_sigma_zero_errors(self):
        with pytest.raises(DegenerateInputError):
            default_params(10, 10, 0.0)


class TestSolverConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(alpha=0.0, beta=1.0)
        with pytest.raises(ValueError):
            SolverConfig(alpha=1.0, beta=1.0, max_iterations=0)
        with pytest.raises(ValueError):
            SolverConfig(alpha=1.0, beta=1.0, rel_tolerance=0.0)
        with pytest.raises(ValueError):
            SolverConfig(alpha=1.0, beta=1.0, detection_threshold=-1.0)


class TestSolve:
    def test_zero_input(self):
        res = solve(np.zeros((4, 3)), SolverConfig(alpha=1.0, beta=1.0))
        assert res.iterations_used == 1
        assert res.converged
        assert np.array_equal(res.X_hat.values, np.zeros((4, 3)))
        assert np.array_equal(res.E_hat.values, np.zeros((4, 3)))

    def test_noiseless_rank_one(self):
        rng = np.random.default_rng(4)
        u = rng.normal(size=20)
        u /= np.linalg.norm(u)
        v = rng.normal(size=10)
        v /= np.linalg.norm(v)
        D = 50.0 * np.outer(u, v)
        cfg = SolverConfig(alpha=3.0, beta=1.0)
        res = solve(D, cfg)
        assert res.rank_of_X == 1
        rel = np.linalg.norm(D - res.X_hat.values - res.E_hat.values) / np.linalg.norm(D)
        assert rel < 0.15
        assert optimality_residual(D, res.X_hat, res.E_hat, 3.0, 1.0) < 1e-4 * 4.0

    def test_trace_monotone_and_converged_flag(self):
        rng = np.random.default_rng(5)
        D = rng.normal(size=(15, 12))
        cfg = auto_config(D)
        res = solve(D, cfg)
        tr = np.array(res.objective_trace)
        assert np.all(np.diff(tr) <= 1e-10)
        assert res.converged
        assert (tr[-2] - tr[-1]) / max(tr[-2], 1.0) < cfg.rel_tolerance

    def test_iteration_cap_not_an_error(self):
        rng = np.random.default_rng(6)
        D = rng.normal(size=(10, 8)) * 5
        res = solve(D, SolverConfig(alpha=1.0, beta=0.5, max_iterations=2))
        assert not res.converged
        assert res.iterations_used == 2

    def test_scaling_covariance(self):
        rng = np.random.default_rng(7)
        D = rng.normal(size=(12, 9)) + 4 * np.outer(rng.normal(size=12), rng.normal(size=9))
        c = 3.7
        cfg = auto_config(D)
        r1 = solve(D, cfg)
        r2 = solve(
            c * D,
            SolverConfig(alpha=c * cfg.alpha, beta=c * cfg.beta,
                         rel_tolerance=cfg.rel_tolerance),
        )
        scale = np.linalg.norm(c * r1.X_hat.values) + np.linalg.norm(c * r1.E_hat.values)
        err = (
            np.linalg.norm(r2.X_hat.values - c * r1.X_hat.values)
            + np.linalg.norm(r2.E_hat.values - c * r1.E_hat.values)
        )
        assert err <= 1e-8 * max(scale, 1.0)

    def test_warm_start_agreement(self):
        rng = np.random.default_rng(8)
        D = rng.normal(size=(10, 7))
        cfg = auto_config(D)
        cold = solve(D, cfg)
        warm = solve(D, cfg, x0=D)
        rel = abs(cold.objective_trace[-1] - warm.objective_trace[-1])
        rel /= max(abs(cold.objective_trace[-1]), 1.0)
        assert rel < 1e-6
        for r in (cold, warm):
            assert (
                optimality_residual(D, r.X_hat, r.E_hat, cfg.alpha, cfg.beta)
                < 1e-4 * (cfg.alpha + cfg.beta)
            )

    def test_labels_propagate(self):
        D = DenseMatrix(np.zeros((2, 2)), row_labels=("a", "b"), col_labels=("x", "y"))
        res = solve(D, SolverConfig(alpha=1.0, beta=1.0))
        assert res.X_hat.row_labels == ("a", "b")
        assert res.E_hat.col_labels == ("x", "y")


class TestOptimalityResidual:
    def test_zero_not_optimal_for_large_data(self):
        D = np.diag([10.0, 0.0])
        assert optimality_residual(D, np.zeros((2, 2)), np.zeros((2, 2)), 1.0, 1.0) > 0

    def test_scalar_case(self):
        # D=5, alpha large: optimum is X=0, E=soft(5, beta=1)=4
        D = np.array([[5.0]])
        E = np.array([[4.0]])
        assert optimality_residual(D, np.zeros((1, 1)), E, 100.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            optimality_residual(np.zeros((2, 2)), np.zeros((3, 2)), np.zeros((2, 2)), 1, 1)


class TestDetect:
    def test_threshold_zero_reports_nonzero(self):
        res = solve(np.array([[5.0, 0.0], [0.0, 0.0]]), SolverConfig(alpha=100.0, beta=1.0))
        mask = detect(res, 0.0)
        assert mask[0, 0]
        assert not mask[1, 1]

    def test_huge_threshold_empty(self):
        res = solve(np.array([[5.0, 0.0], [0.0, 0.0]]), SolverConfig(alpha=1.0, beta=0.5))
        assert not detect(res, 1e9).any()

    def test_negative_threshold(self):
        res = solve(np.zeros((2, 2)), SolverConfig(alpha=1.0, beta=1.0))
        with pytest.raises(ValueError):
            detect(res, -1.0)


def test_auto_config_degenerate_input():
    with pytest.raises(DegenerateInputError):
        auto_config(np.full((5, 5), 3.0))
