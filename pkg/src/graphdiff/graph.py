"""Graphs, their diffusion matrices, and admissibility filtering.

Graphs are simple, undirected and unweighted, stored as dense binary
adjacency matrices. The diffusion matrix is ``T = D^-1/2 W D^-1/2`` and the
normalized Laplacian is ``I - T``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import AttemptsExhausted, IsolatedNode
from .linalg import symmetric_eig

GAP_TOLERANCE = 1e-6
MAX_ATTEMPTS = 1000


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    Connectivity is not enforced here; see :func:`check_admissibility`.
    """

    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.adjacency)
        if w.shape != (self.n, self.n):
            raise ValueError(f"adjacency shape {w.shape} does not match n={self.n}")
        if not np.all((w == 0) | (w == 1)):
            raise ValueError("adjacency must be binary")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(w, w.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", _frozen(w, np.int8))

    @classmethod
    def from_edges(cls, n, edges):
        w = np.zeros((n, n), dtype=np.int8)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            w[u, v] = w[v, u] = 1
        return cls(n, w)

    @property
    def edges(self):
        """Sorted list of ``(u, v)`` pairs with ``u < v`` (0-indexed)."""
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    @property
    def n_edges(self):
        return int(np.triu(self.adjacency, 1).sum())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash((self.n, self.adjacency.tobytes()))


@dataclass(frozen=True, eq=False)
class DiffusionMatrix:
    n: int
    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.shape != (self.n, self.n):
            raise ValueError(f"diffusion matrix shape {t.shape} does not match n={self.n}")
        if np.any(np.diag(t) != 0):
            raise ValueError("diffusion matrix must have a zero diagonal")
        if np.any(t < 0):
            raise ValueError("diffusion matrix must be entrywise nonnegative")
        if np.max(np.abs(t - t.T), initial=0.0) > 1e-12:
            raise ValueError("diffusion matrix must be symmetric")
        object.__setattr__(self, "t", _frozen(t, float))


@dataclass(frozen=True)
class AdmissibilityReport:
    connected: bool
    bipartite: bool
    min_abs_eigengap: float
    admissible: bool
    # Number of samples drawn by generate_admissible; 0 when checked directly.
    attempts: int = 0


# --------------------------------------------------------------------------
# Generators


def erdos_renyi(n, p, seed=None):
    """G(n, p) random graph.

    ``seed`` may be an int, a ``SeedSequence`` or a ``numpy.random.Generator``;
    a Generator is consumed in place so repeated calls advance its stream.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    draws = rng.random(len(iu[0])) < p
    w = np.zeros((n, n), dtype=np.int8)
    w[iu] = draws
    return Graph(n, w + w.T)


def random_geometric(n, radius, seed=None):
    """Random geometric graph: ``n`` uniform points in the unit square,
    joined when their Euclidean distance is below ``radius``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    w = (dist < radius).astype(np.int8)
    np.fill_diagonal(w, 0)
    return Graph(n, w)


def generate_admissible(n, p, seed=None, max_attempts=MAX_ATTEMPTS,
                        gap_tolerance=GAP_TOLERANCE, model="erdos_renyi"):
    """Rejection-sample graphs until one passes :func:`check_admissibility`.

    ``model`` is ``"erdos_renyi"`` (``p`` is the edge probability) or
    ``"geometric"`` (``p`` is the connection radius). All samples come from a
    single stream seeded by ``seed``, so the result is deterministic.
    The returned report carries the number of samples drawn in ``attempts``.
    """
    sampler = {"erdos_renyi": erdos_renyi, "geometric": random_geometric}[model]
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        g = sampler(n, p, rng)
        report = check_admissibility(g, gap_tolerance)
        if report.admissible:
            return g, replace(report, attempts=attempt)
    raise AttemptsExhausted(
        f"no admissible graph in {max_attempts} samples (n={n}, {model} parameter={p})"
    )


# --------------------------------------------------------------------------
# Matrices


def degrees(g):
    return g.adjacency.sum(axis=1).astype(float)


def diffusion_matrix(g):
    d = degrees(g)
    if np.any(d == 0):
        isolated = np.flatnonzero(d == 0).tolist()
        raise IsolatedNode(f"isolated node(s) {isolated}")
    inv_sqrt = 1.0 / np.sqrt(d)
    t = inv_sqrt[:, None] * g.adjacency * inv_sqrt[None, :]
    return DiffusionMatrix(g.n, 0.5 * (t + t.T))


def normalized_laplacian(g):
    return np.eye(g.n) - diffusion_matrix(g).t


# --------------------------------------------------------------------------
# Admissibility


def _two_coloring(g):
    """BFS over every component; returns (n_components, bipartite)."""
    w = g.adjacency
    color = np.full(g.n, -1)
    components = 0
    bipartite = True
    for root in range(g.n):
        if color[root] != -1:
            continue
        components += 1
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(w[u]):
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    bipartite = False
    return components, bipartite


def min_abs_eigengap(values):
    a = np.sort(np.abs(np.asarray(values, dtype=float)))
    if len(a) < 2:
        return float("inf")
    return float(np.min(np.diff(a)))


def check_admissibility(g, gap_tolerance=GAP_TOLERANCE):
    components, bipartite = _two_coloring(g)
    connected = components == 1
    if np.any(degrees(g) == 0):
        gap = float("nan")
    else:
        w, _ = symmetric_eig(diffusion_matrix(g).t)
        gap = min_abs_eigengap(w)
    admissible = bool(connected and not bipartite and gap > gap_tolerance)
    return AdmissibilityReport(connected, bipartite, gap, admissible)


# --------------------------------------------------------------------------
# Edge-list files: first line N, then "u v" per edge, 1-indexed, u < v.


def format_edge_list(g):
    lines = [str(g.n)] + [f"{u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge list")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        u, v = (int(tok) for tok in ln.split())
        if not (1 <= u < v <= n):
            raise ValueError(f"bad edge line {ln!r}: need 1 <= u < v <= {n}")
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges)


def write_edge_list(g, path):
    Path(path).write_text(format_edge_list(g), newline="\n")


def read_edge_list(path):
    return parse_edge_list(Path(path).read_text())
