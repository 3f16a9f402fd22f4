"""Sign recovery, reconstruction of T and thresholding to an adjacency.

The spectral step yields eigenvectors ``V`` and ``|lambda|`` of T. The lost
signs are found by solving for a real vector ``s`` such that
``V diag(s) V^T`` has a zero diagonal and nonnegative off-diagonal entries
on a (possibly subsampled) set of upper-triangular pairs, with the Perron
entry pinned to 1. Only ``sign(s)`` is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, NumericalFailure, ShapeMismatch
from .lp import FEAS_TOL, MAX_ITER, LinearFeasibilityProblem, Status, solve_feasibility

DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    problem: LinearFeasibilityProblem
    kept_pairs: np.ndarray  # (k, 2) array of (i, j) with i < j
    alpha: float
    seed: object = None


@dataclass(frozen=True, eq=False)
class Reconstruction:
    t_hat: np.ndarray
    signs: np.ndarray
    eigvals: np.ndarray
    w_hat: np.ndarray
    epsilon: float


def kept_pair_count(n, alpha):
    """``round(alpha * n(n-1)/2)`` with halves rounded away from zero."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    total = n * (n - 1) // 2
    return min(total, int(math.floor(alpha * total + 0.5)))


def assemble_constraints(est, alpha, seed=None):
    v = np.asarray(est.eigvecs, dtype=float)
    n = v.shape[0]
    iu, ju = np.triu_indices(n, 1)
    count = kept_pair_count(n, alpha)
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(len(iu), size=count, replace=False))
    pairs = np.column_stack([iu[picked], ju[picked]])

    anchor = np.zeros(n)
    anchor[est.perron_index] = 1.0
    eq_matrix = np.vstack([v * v, anchor])
    eq_rhs = np.zeros(n + 1)
    eq_rhs[-1] = 1.0
    ineq_matrix = v[pairs[:, 0]] * v[pairs[:, 1]]
    problem = LinearFeasibilityProblem(n, eq_matrix, eq_rhs, ineq_matrix, np.zeros(count))
    return ConstraintSystem(problem, pairs, float(alpha), seed)


def sign_vector(s):
    """-1 where ``s < 0`` and +1 otherwise (zero maps to +1)."""
    return np.where(np.asarray(s) < 0, -1.0, 1.0)


def solve_signs(est, cs, feas_tol=FEAS_TOL, max_iter=MAX_ITER):
    """Solve the constraint system; returns ``(signs, FeasibilityResult)``.

    Raises ``Infeasible`` or ``NumericalFailure`` (with the result attached)
    when no point satisfies the constraints within ``feas_tol``.
    """
    result = solve_feasibility(cs.problem, feas_tol=feas_tol, max_iter=max_iter)
    if result.status is Status.INFEASIBLE:
        raise Infeasible(
            f"sign constraints infeasible (largest violation {result.phase1_value:.3g})", result)
    if result.status is Status.NUMERICAL_FAILURE:
        raise NumericalFailure(f"LP did not converge in {max_iter} iterations", result)
    return sign_vector(result.x), result


def recover_signs(est, cs, feas_tol=FEAS_TOL):
    return solve_signs(est, cs, feas_tol)[0]


def rebuild(est, signs):
    v = np.asarray(est.eigvecs, dtype=float)
    lam = np.asarray(signs, dtype=float) * est.abs_eigvals
    t = (v * lam) @ v.T
    return 0.5 * (t + t.T)


def threshold(t_hat, epsilon):
    t_hat = np.asarray(t_hat, dtype=float)
    upper = np.triu(t_hat >= epsilon, 1).astype(np.int8)
    return upper + upper.T


def rmse(w_a, w_b):
    a = np.asarray(w_a, dtype=float)
    b = np.asarray(w_b, dtype=float)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2) / a.size))


def threshold_candidates(t_hat):
    """Midpoints between sorted distinct upper-triangular values, plus one
    point 1e-12 below the smallest and one 1e-12 above the largest."""
    t_hat = np.asarray(t_hat, dtype=float)
    vals = np.unique(t_hat[np.triu_indices(t_hat.shape[0], 1)])
    if vals.size == 0:
        return np.array([0.0])
    mids = 0.5 * (vals[:-1] + vals[1:])
    return np.concatenate([[vals[0] - 1e-12], mids, [vals[-1] + 1e-12]])


def oracle_threshold(t_hat, w_true):
    """Threshold minimising the RMSE against the true adjacency.

    Evaluation only. Ties resolve to the smallest threshold.
    Returns ``(epsilon, w_hat)``.
    """
    t_hat = np.asarray(t_hat, dtype=float)
    w_true = np.asarray(w_true)
    if t_hat.shape != w_true.shape:
        raise ShapeMismatch(f"{t_hat.shape} vs {w_true.shape}")
    iu = np.triu_indices(t_hat.shape[0], 1)
    vals = t_hat[iu]
    is_edge = w_true[iu] != 0
    edge_vals = np.sort(vals[is_edge])
    other_vals = np.sort(vals[~is_edge])
    cands = threshold_candidates(t_hat)
    # an entry becomes an edge iff its value >= eps
    missed = np.searchsorted(edge_vals, cands, side="left")
    spurious = other_vals.size - np.searchsorted(other_vals, cands, side="left")
    best = int(np.argmin(missed + spurious))
    eps = float(cands[best])
    return eps, threshold(t_hat, eps)


def reconstruct(est, alpha, seed=None, epsilon=DEFAULT_EPSILON, w_true=None,
                feas_tol=FEAS_TOL, max_iter=MAX_ITER):
    """Assemble, solve, rebuild and threshold in one call.

    With ``epsilon=None`` the oracle threshold is used, which needs
    ``w_true``. Returns ``(Reconstruction, FeasibilityResult)``; errors from
    :func:`solve_signs` propagate.
    """
    cs = assemble_constraints(est, alpha, seed)
    signs, result = solve_signs(est, cs, feas_tol, max_iter)
    t_hat = rebuild(est, signs)
    if epsilon is None:
        if w_true is None:
            raise ValueError("oracle threshold needs the true adjacency")
        epsilon, w_hat = oracle_threshold(t_hat, w_true)
    else:
        w_hat = threshold(t_hat, epsilon)
    recon = Reconstruction(t_hat, signs, signs * est.abs_eigvals, w_hat, float(epsilon))
    return recon, result
