"""Covariance of diffused signals and recovery of the eigenstructure of T.

For ``Y = T^K X`` with i.i.d. unit-variance sources, ``E[Y Y^T] = T^(2K)``.
Eigenvectors of the covariance are those of ``T``; its eigenvalues give only
``|lambda(T)|`` through a 2K-th root.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PerronNotFirst
from .linalg import symmetric_eig
from .signals import check_depth

PERRON_SIGN_TOL = 1e-6
PERRON_GAP_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetric PSD ``n x n`` matrix. ``m`` is the signal count for an
    empirical estimate and ``None`` for the exact ``T^(2K)``."""

    n: int
    sigma: np.ndarray
    m: int | None = None

    @property
    def source(self):
        return "exact" if self.m is None else "empirical"

    def __post_init__(self):
        s = np.array(self.sigma, dtype=float, copy=True)
        if s.shape != (self.n, self.n):
            raise ValueError(f"covariance shape {s.shape} does not match n={self.n}")
        s = 0.5 * (s + s.T)
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)


@dataclass(frozen=True, eq=False)
class SpectralEstimate:
    """Eigenvectors (columns) and absolute eigenvalues of the estimated ``T``.

    Columns are ordered by decreasing absolute eigenvalue, so column 0 is the
    Perron vector, and each column is signed so its largest-magnitude entry
    is positive.
    """

    n: int
    k: int
    eigvecs: np.ndarray
    abs_eigvals: np.ndarray
    perron_index: int = field(default=0)


def empirical_covariance(y):
    """``(1/M) Y Y^T`` with no mean removal (the sources are zero-mean)."""
    if y.m < 1:
        raise ValueError("need at least one signal")
    data = y.data
    return CovarianceMatrix(y.n, data @ data.T / y.m, m=y.m)


def exact_covariance(t, k):
    k = check_depth(k)
    tm = np.asarray(getattr(t, "t", t), dtype=float)
    return CovarianceMatrix(tm.shape[0], np.linalg.matrix_power(tm, 2 * k))


def canonical_signs(eigvecs):
    """Flip each column so that its largest-magnitude entry is positive."""
    v = np.array(eigvecs, dtype=float, copy=True)
    if v.size == 0:
        return v
    lead = v[np.argmax(np.abs(v), axis=0), np.arange(v.shape[1])]
    v[:, lead < 0] *= -1.0
    return v


def _is_constant_sign(v, tol=PERRON_SIGN_TOL):
    return bool(np.all(v >= -tol) or np.all(v <= tol))


def spectral_estimate(sigma, k, method="lapack"):
    """Eigenvectors and ``|lambda|`` of T from a covariance matrix.

    Negative covariance eigenvalues (sampling noise) are clamped to zero
    before taking the 2K-th root. Raises ``PerronNotFirst`` when the leading
    eigenvector is not of constant sign or the leading eigenvalue is not
    simple.
    """
    k = check_depth(k)
    if k < 1:
        raise ValueError("diffusion depth must be at least 1 to recover |lambda|")
    s = getattr(sigma, "sigma", sigma)
    w, v = symmetric_eig(s, method=method)
    w = np.clip(w, 0.0, None)
    abs_vals = w ** (1.0 / (2 * k))
    order = np.argsort(-abs_vals, kind="stable")
    abs_vals = abs_vals[order]
    v = canonical_signs(v[:, order])

    if len(abs_vals) > 1 and abs_vals[0] - abs_vals[1] <= PERRON_GAP_TOL:
        raise PerronNotFirst("leading eigenvalue is not simple; Perron vector is ambiguous")
    if not _is_constant_sign(v[:, 0]):
        raise PerronNotFirst("leading covariance eigenvector is not of constant sign")

    v.setflags(write=False)
    abs_vals.setflags(write=False)
    return SpectralEstimate(len(abs_vals), k, v, abs_vals, 0)
