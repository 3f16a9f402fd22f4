import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdiff import (Infeasible, ShapeMismatch, assemble_constraints, diffuse, diffusion_matrix,
                       empirical_covariance, exact_covariance, generate_admissible, jacobi_eig,
                       oracle_threshold, rebuild, reconstruct, recover_signs, rmse,
                       sample_iid_normal, spectral_estimate, threshold)
from graphdiff.recovery import kept_pair_count, sign_vector, solve_signs, threshold_candidates

from oracles import brute_force_signs, sweep_threshold


def exact_estimate(g, k=2):
    return spectral_estimate(exact_covariance(diffusion_matrix(g), k), k)


@pytest.fixture
def est25():
    g, _ = generate_admissible(25, 0.3, seed=77)
    return g, exact_estimate(g)


class TestAssembly:
    def test_counts_alpha_1_over_n(self, est25):
        _, est = est25
        cs = assemble_constraints(est, 1 / 25, seed=0)
        assert cs.problem.eq_matrix.shape == (26, 25)  # 25 diagonal rows + anchor
        assert cs.problem.ineq_matrix.shape == (12, 25)  # round(300 / 25)
        assert len(cs.kept_pairs) == 12

    def test_all_pairs(self, est25):
        _, est = est25
        cs = assemble_constraints(est, 1.0, seed=0)
        assert len(cs.kept_pairs) == 300
        assert len({tuple(p) for p in cs.kept_pairs}) == 300
        assert np.all(cs.kept_pairs[:, 0] < cs.kept_pairs[:, 1])

    def test_no_pairs(self, est25):
        _, est = est25
        cs = assemble_constraints(est, 0.0, seed=0)
        assert cs.problem.ineq_matrix.shape == (0, 25)

    def test_rows(self, est25):
        _, est = est25
        v = est.eigvecs
        cs = assemble_constraints(est, 0.1, seed=3)
        s = np.random.default_rng(0).standard_normal(25)
        m = v @ np.diag(s) @ v.T
        np.testing.assert_allclose(cs.problem.eq_matrix[:25] @ s, np.diag(m), atol=1e-12)
        np.testing.assert_array_equal(cs.problem.eq_matrix[25], np.eye(25)[0])
        assert cs.problem.eq_rhs.tolist() == [0.0] * 25 + [1.0]
        i, j = cs.kept_pairs.T
        np.testing.assert_allclose(cs.problem.ineq_matrix @ s, m[i, j], atol=1e-12)

    def test_subsample_seeded(self, est25):
        _, est = est25
        a = assemble_constraints(est, 0.2, seed=5)
        b = assemble_constraints(est, 0.2, seed=5)
        c = assemble_constraints(est, 0.2, seed=6)
        np.testing.assert_array_equal(a.kept_pairs, b.kept_pairs)
        assert not np.array_equal(a.kept_pairs, c.kept_pairs)

    @pytest.mark.parametrize("n,alpha,expected", [
        (25, 1 / 25, 12), (25, 1.0, 300), (25, 0.0, 0), (25, 1 / 50, 6),
        (4, 0.25, 2),  # 1.5 rounds away from zero
        (100, 1 / 200, 25),  # 24.75
    ])
    def test_pair_count(self, n, alpha, expected):
        assert kept_pair_count(n, alpha) == expected

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            kept_pair_count(5, 1.5)


class TestSigns:
    def test_sign_vector_zero_is_positive(self):
        assert sign_vector([-2.0, 0.0, 3.0, -0.0]).tolist() == [-1.0, 1.0, 1.0, 1.0]

    def test_triangle_pendant(self, triangle_pendant):
        est = exact_estimate(triangle_pendant)
        cs = assemble_constraints(est, 1.0, seed=0)
        signs = recover_signs(est, cs)
        w, _ = jacobi_eig(diffusion_matrix(triangle_pendant).t)
        truth = np.sign(w[np.argsort(-np.abs(w))])
        np.testing.assert_array_equal(signs, truth)
        assert signs.tolist() == [1.0, -1.0, -1.0, 1.0]
        oracle = brute_force_signs(est.eigvecs, est.abs_eigvals)
        assert len(oracle) == 1
        np.testing.assert_array_equal(oracle[0], signs)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_brute_force(self, seed):
        n = 5 + seed % 4
        g, _ = generate_admissible(n, 0.5, seed=seed)
        est = exact_estimate(g, k=1)
        oracle = brute_force_signs(est.eigvecs, est.abs_eigvals)
        signs = recover_signs(est, assemble_constraints(est, 1.0, seed=seed))
        assert any(np.array_equal(signs, o) for o in oracle)
        if len(oracle) > 1:
            # only signs of (numerically) zero eigenvalues may be ambiguous
            ambiguous = np.any(np.array(oracle) != oracle[0], axis=0)
            assert np.all(est.abs_eigvals[ambiguous] < 1e-7)

    def test_anchor(self, est25):
        _, est = est25
        signs, result = solve_signs(est, assemble_constraints(est, 0.25, seed=1))
        assert result.x[0] >= 1 - 1e-8
        assert signs[est.perron_index] == 1

    def test_infeasible_propagates(self):
        g, _ = generate_admissible(15, 0.3, seed=4)
        y = diffuse(diffusion_matrix(g), sample_iid_normal(15, 200, seed=4), 2)
        est = spectral_estimate(empirical_covariance(y), 2)
        with pytest.raises(Infeasible) as info:
            recover_signs(est, assemble_constraints(est, 1 / 15, seed=4))
        assert info.value.result is not None
        assert info.value.result.phase1_value > 1e-8


class TestRebuild:
    def test_definition(self):
        g, _ = generate_admissible(10, 0.4, seed=1)
        est = exact_estimate(g)
        t_hat = rebuild(est, np.ones(10))
        v = est.eigvecs
        np.testing.assert_allclose(t_hat, v @ np.diag(est.abs_eigvals) @ v.T, atol=1e-12)

    def test_all_positive_signs_reproduce_psd_t(self):
        # if every eigenvalue of T is >= 0, all-plus signs rebuild T exactly
        basis = np.random.default_rng(2).standard_normal((6, 6))
        basis[:, 0] = 1.0  # constant-sign leading eigenvector
        q, _ = np.linalg.qr(basis)
        lam = np.array([1.0, 0.8, 0.5, 0.3, 0.2, 0.1])
        t = q @ np.diag(lam) @ q.T
        t = 0.5 * (t + t.T)
        est = spectral_estimate(t @ t, 1)
        np.testing.assert_allclose(rebuild(est, np.ones(6)), t, atol=1e-8)

    def test_true_signs_give_t(self, triangle_pendant):
        est = exact_estimate(triangle_pendant)
        t_hat = rebuild(est, [1, -1, -1, 1])
        np.testing.assert_allclose(t_hat, diffusion_matrix(triangle_pendant).t, atol=1e-8)

    @given(st.lists(st.booleans(), min_size=12, max_size=12), st.integers(0, 50))
    @settings(max_examples=30, deadline=None)
    def test_column_flip_invariance(self, flips, seed):
        g, _ = generate_admissible(12, 0.35, seed=seed)
        est = exact_estimate(g)
        signs = np.where(np.arange(12) % 2 == 0, 1.0, -1.0)
        flipped = dataclasses.replace(est, eigvecs=est.eigvecs * np.where(flips, -1.0, 1.0))
        np.testing.assert_allclose(rebuild(est, signs), rebuild(flipped, signs), atol=1e-12)
        # the sign program itself only sees squares and pairwise products
        cs_a = assemble_constraints(est, 1.0, seed=0)
        cs_b = assemble_constraints(flipped, 1.0, seed=0)
        a = rebuild(est, recover_signs(est, cs_a))
        b = rebuild(flipped, recover_signs(flipped, cs_b))
        np.testing.assert_allclose(a, b, atol=1e-10)

    def test_symmetric(self, est25):
        _, est = est25
        t_hat = rebuild(est, np.random.default_rng(0).choice([-1.0, 1.0], 25))
        np.testing.assert_array_equal(t_hat, t_hat.T)


class TestThreshold:
    def test_simple(self):
        np.testing.assert_array_equal(threshold([[0, 0.4], [0.4, 0]], 0.1), [[0, 1], [1, 0]])

    def test_above_max(self):
        t = np.array([[0, 0.4, 0.2], [0.4, 0, 0.1], [0.2, 0.1, 0]])
        assert threshold(t, 0.5).sum() == 0

    def test_diagonal_forced_zero(self):
        w = threshold(np.ones((3, 3)), 0.5)
        assert np.all(np.diag(w) == 0) and w.sum() == 6

    def test_uses_upper_triangle(self):
        t = np.array([[0, 0.4], [0.0, 0]])
        np.testing.assert_array_equal(threshold(t, 0.1), [[0, 1], [1, 0]])

    def test_exact_pipeline(self, est25):
        g, est = est25
        recon, _ = reconstruct(est, 1.0, seed=0, epsilon=1e-6)
        np.testing.assert_array_equal(recon.w_hat, g.adjacency)


class TestOracleThreshold:
    def test_exact_t(self, triangle_pendant):
        t = diffusion_matrix(triangle_pendant).t
        eps, w = oracle_threshold(t, triangle_pendant.adjacency)
        assert 0 < eps <= t[t > 0].min()
        np.testing.assert_array_equal(w, triangle_pendant.adjacency)

    def test_scaled_truth(self, triangle_pendant):
        w_true = triangle_pendant.adjacency
        eps, w = oracle_threshold(0.5 * w_true, w_true)
        assert rmse(w, w_true) == 0

    def test_candidates(self):
        t = np.array([[0, 0.4, 0.2], [0.4, 0, 0.2], [0.2, 0.2, 0]])
        np.testing.assert_allclose(threshold_candidates(t), [0.2 - 1e-12, 0.3, 0.4 + 1e-12])

    @given(st.integers(0, 2**32 - 1), st.integers(3, 9))
    @settings(max_examples=60, deadline=None)
    def test_matches_sweep(self, seed, n):
        rng = np.random.default_rng(seed)
        t = np.round(rng.standard_normal((n, n)), 1)  # rounding creates ties
        t = t + t.T
        w_true = np.triu(rng.random((n, n)) < 0.4, 1).astype(int)
        w_true = w_true + w_true.T
        cands = threshold_candidates(t)
        ref_eps, ref_err = sweep_threshold(t, w_true, cands)
        eps, w = oracle_threshold(t, w_true)
        assert eps == ref_eps
        assert rmse(w, w_true) == pytest.approx(ref_err, abs=1e-15)

    def test_noisy_beats_fixed(self):
        g, _ = generate_admissible(15, 0.3, seed=12)
        y = diffuse(diffusion_matrix(g), sample_iid_normal(15, 1000, seed=12), 2)
        est = spectral_estimate(empirical_covariance(y), 2)
        cs = assemble_constraints(est, 1 / 15, seed=12)
        signs, _ = solve_signs(est, cs, feas_tol=0.05)
        t_hat = rebuild(est, signs)
        _, w_oracle = oracle_threshold(t_hat, g.adjacency)
        assert rmse(w_oracle, g.adjacency) <= rmse(threshold(t_hat, 1e-6), g.adjacency)


class TestRmse:
    def test_identical(self):
        assert rmse(np.eye(3), np.eye(3)) == 0

    @pytest.mark.parametrize("n", [1, 2, 7])
    def test_opposite(self, n):
        assert rmse(np.zeros((n, n)), np.ones((n, n))) == 1

    def test_one_cell(self):
        assert rmse([[0, 1], [0, 0]], np.zeros((2, 2))) == 0.5

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            rmse(np.zeros((2, 2)), np.zeros((3, 3)))

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_metric_axioms(self, n, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, 2, (n, n)) for _ in range(3))
        assert rmse(a, b) == rmse(b, a)
        assert (rmse(a, b) == 0) == np.array_equal(a, b)
        assert rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-15
        assert 0 <= rmse(a, b) <= 1


class TestExactRecovery:
    @pytest.mark.parametrize("n", [15, 25, 50])
    @pytest.mark.parametrize("alpha_of_n", [lambda n: 1 / n, lambda n: 0.25, lambda n: 1.0])
    def test_full_pipeline(self, n, alpha_of_n):
        for seed in range(3):
            g, _ = generate_admissible(n, 0.3, seed=1000 + seed)
            est = exact_estimate(g)
            recon, result = reconstruct(est, alpha_of_n(n), seed=seed, epsilon=None,
                                        w_true=g.adjacency)
            assert rmse(recon.w_hat, g.adjacency) == 0
            assert recon.signs[0] == 1
            np.testing.assert_allclose(recon.t_hat, diffusion_matrix(g).t, atol=1e-8)
            v = est.eigvecs
            np.testing.assert_allclose(recon.t_hat, v @ np.diag(recon.eigvals) @ v.T, atol=1e-8)
