"""Dense symmetric eigensolvers.

``symmetric_eig`` is the entry point used by the rest of the package. It
dispatches to LAPACK (``numpy.linalg.eigh``) by default, or to a cyclic
Jacobi method written here, which the test-suite uses as an independent
route.
"""
from __future__ import annotations

import numpy as np

from .errors import NotSymmetric

SYMMETRY_TOL = 1e-10


def _check_symmetric(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.T)) >= SYMMETRY_TOL:
        raise NotSymmetric("matrix is not symmetric within 1e-10")
    return 0.5 * (a + a.T)


def _round_robin(n):
    """Yield the n-1 rounds of a round-robin tournament on n (even) players.

    Each round is a pair of index arrays (p, q) covering every index once.
    """
    players = list(range(n))
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        yield np.minimum(p, q), np.maximum(p, q)
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_eig(a, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Rotations are applied in round-robin order so that each round is a set
    of disjoint plane rotations, done as one orthogonal similarity.

    Returns ``(w, v)`` with eigenvalues ascending and eigenvectors in the
    columns of ``v``. Raises ``RuntimeError`` when ``max_sweeps`` is hit.
    """
    a = _check_symmetric(a).copy()
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    size = n + (n % 2)  # pad odd orders with a decoupled dummy index
    if size != n:
        padded = np.zeros((size, size))
        padded[:n, :n] = a
        a = padded
    v = np.eye(size)
    scale = max(np.linalg.norm(a), 1.0)
    rounds = list(_round_robin(size)) if size > 1 else []

    def off_norm(m):
        return np.linalg.norm(m - np.diag(np.diag(m)))

    for _ in range(max_sweeps):
        if off_norm(a) <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            app = a[p, p]
            aqq = a[q, q]
            active = np.abs(apq) > 1e-300
            tau = np.where(active, (aqq - app) / (2.0 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rot = np.eye(size)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            v = v @ rot
    else:
        if off_norm(a) > tol * scale:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a)[:n].copy()
    v = v[:n, :n]
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def symmetric_eig(a, method="lapack"):
    """Eigendecomposition ``a = v @ diag(w) @ v.T`` of a symmetric matrix.

    Parameters
    ----------
    a : (N, N) array_like
        Must be symmetric to within 1e-10 (max-abs), else ``NotSymmetric``.
    method : {"lapack", "jacobi"}

    Returns
    -------
    w : (N,) ndarray
        Eigenvalues, ascending.
    v : (N, N) ndarray
        Orthonormal eigenvectors as columns.
    """
    if method == "jacobi":
        return jacobi_eig(a)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    a = _check_symmetric(a)
    w, v = np.linalg.eigh(a)
    return w, v
