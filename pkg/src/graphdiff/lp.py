"""Dense linear feasibility by a primal-dual interior-point method.

Given equalities ``A_eq x = b_eq`` and inequalities ``A_in x >= b_in`` the
solver minimises the largest constraint violation (after scaling each row to
unit norm) by a Mehrotra predictor-corrector iteration on

    min  t
    s.t. |a_i . x - b_i| <= t        (equality rows)
         a_j . x - b_j   >= -t       (inequality rows)
         t >= 0,  |x_k| <= BOX

which is always feasible and bounded. A zero optimum means the original
system is feasible; the returned point is re-checked against the unscaled
rows before it is reported as such. When the optimum is positive the point
returned is the least-infeasible one, kept for diagnostics.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

FEAS_TOL = 1e-8
MAX_ITER = 500
BOX = 1e4

_STEP_FRACTION = 0.995
_CONV_TOL = 1e-13


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True, eq=False)
class LinearFeasibilityProblem:
    """Constraint system ``eq_matrix @ x == eq_rhs``, ``ineq_matrix @ x >= ineq_rhs``."""

    dim: int
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ineq_matrix: np.ndarray
    ineq_rhs: np.ndarray

    def __post_init__(self):
        for name in ("eq", "ineq"):
            mat = np.asarray(getattr(self, f"{name}_matrix"), dtype=float).reshape(-1, self.dim)
            rhs = np.asarray(getattr(self, f"{name}_rhs"), dtype=float).reshape(-1)
            if mat.shape[0] != rhs.shape[0]:
                raise ValueError(f"{name}: {mat.shape[0]} rows but {rhs.shape[0]} right-hand sides")
            if not (np.all(np.isfinite(mat)) and np.all(np.isfinite(rhs))):
                raise ValueError(f"{name}: non-finite coefficients")
            mat.setflags(write=False)
            rhs.setflags(write=False)
            object.__setattr__(self, f"{name}_matrix", mat)
            object.__setattr__(self, f"{name}_rhs", rhs)

    @classmethod
    def from_rows(cls, dim, eq=(), ineq=()):
        """Build from lists of ``(row, rhs)`` pairs."""
        def stack(pairs):
            pairs = list(pairs)
            if not pairs:
                return np.zeros((0, dim)), np.zeros(0)
            rows, rhs = zip(*pairs)
            return np.array(rows, dtype=float).reshape(len(rows), dim), np.array(rhs, dtype=float)

        a_eq, b_eq = stack(eq)
        a_in, b_in = stack(ineq)
        return cls(dim, a_eq, b_eq, a_in, b_in)

    def violations(self, x):
        """``(max |A_eq x - b_eq|, min (A_in x - b_in))`` for a candidate point."""
        x = np.asarray(x, dtype=float)
        eq = np.abs(self.eq_matrix @ x - self.eq_rhs)
        slack = self.ineq_matrix @ x - self.ineq_rhs
        return (float(eq.max()) if eq.size else 0.0,
                float(slack.min()) if slack.size else float("inf"))


@dataclass(frozen=True, eq=False)
class FeasibilityResult:
    status: Status
    x: np.ndarray
    max_eq_violation: float
    min_ineq_slack: float
    iterations: int
    # optimum of the scaled phase-1 problem (largest row violation)
    phase1_value: float

    @property
    def feasible(self):
        return self.status is Status.FEASIBLE


def _unit_rows(mat, rhs):
    norms = np.linalg.norm(mat, axis=1)
    norms[norms == 0] = 1.0
    return mat / norms[:, None], rhs / norms


def _phase1_system(problem):
    """Rows ``C`` and right-hand side ``d`` of ``C @ (x, t) >= d``."""
    n = problem.dim
    a_eq, b_eq = _unit_rows(problem.eq_matrix, problem.eq_rhs)
    a_in, b_in = _unit_rows(problem.ineq_matrix, problem.ineq_rhs)
    m_eq, m_in = len(b_eq), len(b_in)
    eye = np.eye(n)
    c_mat = np.zeros((2 * m_eq + m_in + 1 + 2 * n, n + 1))
    d = np.zeros(c_mat.shape[0])
    r = 0
    for block, rhs, t_coef in ((a_eq, b_eq, 1.0), (-a_eq, -b_eq, 1.0), (a_in, b_in, 1.0)):
        c_mat[r:r + len(rhs), :n] = block
        c_mat[r:r + len(rhs), n] = t_coef
        d[r:r + len(rhs)] = rhs
        r += len(rhs)
    c_mat[r, n] = 1.0  # t >= 0
    r += 1
    c_mat[r:r + n, :n] = eye
    c_mat[r + n:r + 2 * n, :n] = -eye
    d[r:r + 2 * n] = -BOX
    return c_mat, d


def _max_step(v, dv):
    neg = dv < 0
    if not np.any(neg):
        return 1.0
    return float(min(1.0, np.min(-v[neg] / dv[neg])))


def _interior_point(c_mat, d, max_iter):
    """Mehrotra predictor-corrector for ``min t s.t. C (x, t) >= d``.

    Returns ``(x, converged, iterations)``.
    """
    m, nv = c_mat.shape
    cost = np.zeros(nv)
    cost[-1] = 1.0

    x = np.zeros(nv)
    x[-1] = max(0.0, float(np.max(d[:-2 * (nv - 1) - 1], initial=0.0))) + 1.0
    w = c_mat @ x - d
    z = np.ones(m)
    scale = 1.0 + np.max(np.abs(d), initial=0.0)

    for it in range(1, max_iter + 1):
        r_d = cost - c_mat.T @ z
        r_p = c_mat @ x - w - d
        mu = float(w @ z) / m
        if (mu < _CONV_TOL and np.max(np.abs(r_d)) < 1e-9
                and np.max(np.abs(r_p)) < 1e-11 * scale):
            return x, True, it - 1

        dscale = z / w
        h = c_mat.T @ (dscale[:, None] * c_mat)
        h[np.diag_indices_from(h)] += 1e-14 * max(1.0, float(np.max(np.diag(h))))
        try:
            factor = scipy.linalg.cho_factor(h, check_finite=False)

            def solve(rhs):
                return scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        except np.linalg.LinAlgError:
            def solve(rhs):
                return np.linalg.lstsq(h, rhs, rcond=None)[0]

        def newton(r_c):
            dx = solve(c_mat.T @ (r_c / w - dscale * r_p) - r_d)
            dw = c_mat @ dx + r_p
            dz = (r_c - z * dw) / w
            return dx, dw, dz

        # predictor
        dx_a, dw_a, dz_a = newton(-w * z)
        ap = _max_step(w, dw_a)
        ad = _max_step(z, dz_a)
        mu_aff = float((w + ap * dw_a) @ (z + ad * dz_a)) / m
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0

        # corrector
        dx, dw, dz = newton(sigma * mu - w * z - dw_a * dz_a)
        ap = min(1.0, _STEP_FRACTION * _max_step(w, dw))
        ad = min(1.0, _STEP_FRACTION * _max_step(z, dz))
        if not np.all(np.isfinite(dx)) or not np.all(np.isfinite(dz)):
            return x, False, it
        x = x + ap * dx
        w = w + ap * dw
        z = z + ad * dz
        # keep strictly interior despite roundoff
        w = np.maximum(w, 1e-300)
        z = np.maximum(z, 1e-300)
    return x, False, max_iter


def solve_feasibility(problem, feas_tol=FEAS_TOL, max_iter=MAX_ITER):
    """Find ``x`` satisfying every constraint of ``problem`` within ``feas_tol``.

    The status is FEASIBLE only if the returned point passes an independent
    re-check against the original (unscaled) rows; INFEASIBLE if the
    iteration converged to a point that does not; NUMERICAL_FAILURE if it
    did not converge within ``max_iter`` iterations.
    """
    n = problem.dim
    if len(problem.eq_rhs) == 0 and len(problem.ineq_rhs) == 0:
        return FeasibilityResult(Status.FEASIBLE, np.zeros(n), 0.0, float("inf"), 0, 0.0)

    c_mat, d = _phase1_system(problem)
    sol, converged, iterations = _interior_point(c_mat, d, max_iter)
    x = sol[:n].copy()
    x.setflags(write=False)
    eq_viol, slack = problem.violations(x)
    if eq_viol <= feas_tol and slack >= -feas_tol:
        status = Status.FEASIBLE
    elif converged:
        status = Status.INFEASIBLE
    else:
        status = Status.NUMERICAL_FAILURE
    return FeasibilityResult(status, x, eq_viol, slack, iterations, float(sol[n]))
