"""Independent reference computations used only by the tests."""
import itertools

import numpy as np


def brute_force_signs(eigvecs, abs_eigvals, perron_index=0, tol=1e-8):
    """Every sign vector (Perron entry +1) whose rebuilt matrix has a zero
    diagonal and nonnegative off-diagonal entries within ``tol``."""
    v = np.asarray(eigvecs, dtype=float)
    n = v.shape[0]
    free = [i for i in range(n) if i != perron_index]
    accepted = []
    for combo in itertools.product((1.0, -1.0), repeat=n - 1):
        s = np.ones(n)
        s[free] = combo
        t = v @ np.diag(s * abs_eigvals) @ v.T
        off = t[~np.eye(n, dtype=bool)]
        if np.max(np.abs(np.diag(t))) <= tol and (off.size == 0 or off.min() >= -tol):
            accepted.append(s)
    return accepted


def sweep_threshold(t_hat, w_true, candidates):
    """Brute-force oracle threshold: try each candidate, keep the first best."""
    best_eps, best_err = None, np.inf
    iu = np.triu_indices(t_hat.shape[0], 1)
    for eps in candidates:
        w = np.zeros_like(t_hat)
        for i, j in zip(*iu):
            if not t_hat[i, j] < eps:
                w[i, j] = w[j, i] = 1
        err = np.sqrt(np.mean((w - w_true) ** 2))
        if err < best_err:
            best_eps, best_err = eps, err
    return best_eps, best_err


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return a + a.T
