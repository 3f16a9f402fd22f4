"""Monte-Carlo experiments: RMSE table, timing, noise versus M, single run.

Every trial is a pure function of ``(n, alpha, m, k, seed, p_edge,
epsilon)``. The per-trial seed is derived from the experiment's base seed,
the node count and the trial index, so the same graphs are reused across
the alpha and M values of one experiment. Within a trial, independent
streams are drawn for the graph, the source signals and the constraint
subsampling (see :mod:`graphdiff.rng`).
"""
from __future__ import annotations

import csv
import dataclasses
import json
import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import rng as streams
from .errors import Infeasible, NumericalFailure, PerronNotFirst
from .graph import Graph, diffusion_matrix, generate_admissible, write_edge_list
from .lp import FEAS_TOL
from .recovery import reconstruct, rmse
from .signals import DEFAULT_DEPTH, diffuse, sample_iid_normal
from .spectral import empirical_covariance, exact_covariance, spectral_estimate

EXPERIMENTS = ("rmse_table", "timing", "noise_vs_m", "single_run")

# Feasibility tolerance when the covariance is estimated from samples. The
# sampled eigenvectors cannot satisfy the zero-diagonal equalities exactly;
# 0.05 is the largest row violation (unit-norm rows) still accepted.
EMPIRICAL_FEAS_TOL = 0.05

CSV_HEADER = ["n", "alpha", "m", "k", "seed", "rmse", "wall_time_s", "status",
              "epsilon_used", "attempts"]
SUMMARY_HEADER = ["n", "alpha", "m", "k", "trials", "failures", "mean_rmse",
                  "mean_wall_time_s"]

_DEFAULTS = {
    "rmse_table": dict(n_list=[25, 50, 100],
                       alpha_list=["0", "1/(2N)", "1/N", "1/4", "1/2", "1"],
                       exact_mode=True, trials=20),
    "timing": dict(n_list=[25, 50, 100],
                   alpha_list=["0", "1/(2N)", "1/N", "1/4", "1/2", "1"],
                   exact_mode=True, trials=20),
    "noise_vs_m": dict(n_list=[15], alpha_list=["1/N"],
                       m_list=[100, 1000, 10000, 100000], exact_mode=False, trials=100),
    "single_run": dict(n_list=[25], alpha_list=["1/4"], exact_mode=True, trials=1),
}


@dataclass
class ExperimentConfig:
    experiment: str
    n_list: list = field(default_factory=lambda: [25])
    alpha_list: list = field(default_factory=lambda: ["1/N"])
    m_list: list = field(default_factory=lambda: [100, 1000, 10000, 100000])
    exact_mode: bool = True
    k: int = DEFAULT_DEPTH
    p_edge: float = 0.3
    trials: int = 20
    base_seed: int = 0
    epsilon_mode: object = "oracle"  # "oracle" or a fixed threshold
    output_path: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(int(n) < 3 for n in self.n_list):
            raise ValueError("every n must be at least 3")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not self.exact_mode and any(int(m) < 1 for m in self.m_list):
            raise ValueError("every m must be at least 1")
        for n in self.n_list:
            for a in self.alpha_list:
                resolve_alpha(a, int(n))
        if self.epsilon_mode != "oracle":
            self.epsilon_mode = float(self.epsilon_mode)
        if not self.output_path:
            self.output_path = f"results/{self.experiment}.csv"

    @classmethod
    def for_experiment(cls, experiment, **overrides):
        values = dict(_DEFAULTS.get(experiment, {}))
        values.update(overrides)
        return cls(experiment=experiment, **values)

    @classmethod
    def from_json(cls, path, experiment=None, **overrides):
        data = json.loads(Path(path).read_text())
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if experiment is not None:
            data["experiment"] = experiment
        if "experiment" not in data:
            raise ValueError("config does not name an experiment")
        exp = data.pop("experiment")
        data.update(overrides)
        return cls.for_experiment(exp, **data)

    @property
    def epsilon(self):
        """Fixed threshold, or ``None`` for the oracle."""
        return None if self.epsilon_mode == "oracle" else float(self.epsilon_mode)


@dataclass(frozen=True)
class TrialRecord:
    n: int
    alpha: float
    m: int | None  # None means exact covariance
    k: int
    seed: int
    rmse: float
    wall_time_s: float
    status: str
    epsilon_used: float | None
    attempts: int

    def row(self):
        return [
            str(self.n),
            _fmt(self.alpha),
            "exact" if self.m is None else str(self.m),
            str(self.k),
            str(self.seed),
            _fmt(self.rmse),
            _fmt(self.wall_time_s),
            self.status,
            "" if self.epsilon_used is None else _fmt(self.epsilon_used),
            str(self.attempts),
        ]


def _fmt(x):
    return format(float(x), ".10g")


def resolve_alpha(alpha, n):
    """Numeric constraint ratio from a number or a string such as ``"1/N"``,
    ``"1/(2N)"``, ``"1/4"`` or ``"0.25"``."""
    if isinstance(alpha, (int, float)) and not isinstance(alpha, bool):
        value = float(alpha)
    else:
        text = str(alpha).replace(" ", "").upper()
        if text == "1/N":
            value = 1.0 / n
        elif text in ("1/(2N)", "1/2N"):
            value = 1.0 / (2 * n)
        else:
            value = float(Fraction(text))
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"alpha {alpha!r} resolves to {value}, outside [0, 1]")
    return value


def trial_seed(base_seed, n, trial):
    seq = np.random.SeedSequence(int(base_seed), spawn_key=(int(n), int(trial)))
    return int(seq.generate_state(1, dtype=np.uint32)[0])


def run_trial(n, alpha, m, k, seed, p_edge=0.3, epsilon=None):
    """One end-to-end reconstruction.

    ``m=None`` uses the exact covariance ``T^(2k)``; ``epsilon=None`` uses the
    oracle threshold. Returns ``(TrialRecord, true_graph, w_hat)``. Infeasible
    or spectrally degenerate trials are scored against the empty graph.
    """
    g, report = generate_admissible(n, p_edge, streams.substream(seed, streams.GRAPH))
    t = diffusion_matrix(g)
    if m is None:
        sigma = exact_covariance(t, k)
        feas_tol = FEAS_TOL
    else:
        x = sample_iid_normal(n, m, streams.substream(seed, streams.SIGNALS, m))
        sigma = empirical_covariance(diffuse(t, x, k))
        feas_tol = EMPIRICAL_FEAS_TOL

    empty = np.zeros_like(g.adjacency)
    w_hat, eps_used = empty, None
    start = time.perf_counter()
    try:
        est = spectral_estimate(sigma, k)
        start = time.perf_counter()
        recon, _ = reconstruct(est, alpha, streams.substream(seed, streams.SUBSAMPLE),
                               epsilon=epsilon, w_true=g.adjacency, feas_tol=feas_tol)
        w_hat, eps_used, status = recon.w_hat, recon.epsilon, "feasible"
    except PerronNotFirst:
        status = "perron_not_first"
    except Infeasible:
        status = "infeasible"
    except NumericalFailure:
        status = "numerical_failure"
    elapsed = time.perf_counter() - start

    record = TrialRecord(n, alpha, m, k, seed, rmse(g.adjacency, w_hat), elapsed,
                         status, eps_used, report.attempts)
    return record, g, w_hat


def _grid(cfg):
    ms = [None] if cfg.exact_mode else [int(m) for m in cfg.m_list]
    for n in cfg.n_list:
        for a in cfg.alpha_list:
            for m in ms:
                yield int(n), resolve_alpha(a, int(n)), m


def run_trials(cfg):
    records = []
    for n, alpha, m in _grid(cfg):
        for trial in range(cfg.trials):
            seed = trial_seed(cfg.base_seed, n, trial)
            rec, _, _ = run_trial(n, alpha, m, cfg.k, seed, cfg.p_edge, cfg.epsilon)
            records.append(rec)
    return records


def summarize(records):
    groups = defaultdict(list)
    for r in records:
        groups[(r.n, r.alpha, r.m, r.k)].append(r)
    rows = []
    for (n, alpha, m, k), recs in groups.items():
        rows.append(dict(
            n=n, alpha=alpha, m=m, k=k, trials=len(recs),
            failures=sum(r.status != "feasible" for r in recs),
            mean_rmse=float(np.mean([r.rmse for r in recs])),
            mean_wall_time_s=float(np.mean([r.wall_time_s for r in recs])),
        ))
    return rows


def run_rmse_table(cfg):
    """Mean RMSE per ``(n, alpha)``; returns ``(records, {(n, alpha): mean})``."""
    records = run_trials(cfg)
    table = {(row["n"], row["alpha"]): row["mean_rmse"] for row in summarize(records)}
    return records, table


def run_timing(cfg):
    """Mean reconstruction wall time per ``(n, alpha)``.

    The timed region covers constraint assembly, the LP, the rebuild of T
    and thresholding; graph generation and covariance estimation are
    excluded.
    """
    records = run_trials(cfg)
    table = {(row["n"], row["alpha"]): row["mean_wall_time_s"] for row in summarize(records)}
    return records, table


def rmse_histogram(records, bins=20):
    """Per-M counts of trial RMSE in ``bins`` equal bins over [0, 1]."""
    edges = np.linspace(0.0, 1.0, bins + 1)
    by_m = defaultdict(list)
    for r in records:
        by_m[r.m].append(r.rmse)
    return {m: (edges, np.histogram(v, bins=edges)[0]) for m, v in by_m.items()}


def run_noise_vs_m(cfg):
    """Mean RMSE versus signal count with the empirical covariance.

    Returns ``(records, {m: mean_rmse}, histogram)``.
    """
    if cfg.exact_mode:
        raise ValueError("noise_vs_m needs exact_mode = false")
    records = run_trials(cfg)
    curve = {row["m"]: row["mean_rmse"] for row in summarize(records)}
    return records, curve, rmse_histogram(records)


def run_single(cfg):
    """One trial (trial index 0 of the first grid point).

    Returns ``(record, recovered_graph)``.
    """
    n, alpha, m = next(_grid(cfg))
    seed = trial_seed(cfg.base_seed, n, 0)
    rec, _, w_hat = run_trial(n, alpha, m, cfg.k, seed, cfg.p_edge, cfg.epsilon)
    return rec, Graph(n, w_hat)


# --------------------------------------------------------------------------
# Output


def _sibling(path, suffix):
    path = Path(path)
    return path.with_name(f"{path.stem}{suffix}")


def write_records(path, records):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_HEADER)
        for r in records:
            out.writerow(r.row())


def read_records(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [TrialRecord(
        n=int(r["n"]), alpha=float(r["alpha"]),
        m=None if r["m"] == "exact" else int(r["m"]), k=int(r["k"]), seed=int(r["seed"]),
        rmse=float(r["rmse"]), wall_time_s=float(r["wall_time_s"]), status=r["status"],
        epsilon_used=float(r["epsilon_used"]) if r["epsilon_used"] else None,
        attempts=int(r["attempts"])) for r in rows]


def write_summary(path, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(SUMMARY_HEADER)
        for row in rows:
            out.writerow([row["n"], _fmt(row["alpha"]),
                          "exact" if row["m"] is None else row["m"], row["k"],
                          row["trials"], row["failures"], _fmt(row["mean_rmse"]),
                          _fmt(row["mean_wall_time_s"])])


def write_histogram(path, histogram):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["m", "bin_lo", "bin_hi", "count"])
        for m, (edges, counts) in histogram.items():
            for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                out.writerow(["exact" if m is None else m, _fmt(lo), _fmt(hi), int(c)])


def run_and_write(cfg):
    """Run ``cfg.experiment`` and write its CSV outputs.

    Returns ``(records, written_paths)``.
    """
    out = Path(cfg.output_path)
    written = [out, _sibling(out, "_summary.csv")]
    if cfg.experiment == "single_run":
        rec, recovered = run_single(cfg)
        records = [rec]
        graph_path = _sibling(out, "_graph.txt")
        graph_path.parent.mkdir(parents=True, exist_ok=True)
        write_edge_list(recovered, graph_path)
        written.append(graph_path)
    elif cfg.experiment == "noise_vs_m":
        records, _, hist = run_noise_vs_m(cfg)
        hist_path = _sibling(out, "_histogram.csv")
        written.append(hist_path)
    else:
        records = run_trials(cfg)
    write_records(out, records)
    write_summary(written[1], summarize(records))
    if cfg.experiment == "noise_vs_m":
        write_histogram(written[2], hist)
    return records, written


def has_numerical_failure(records):
    return any(r.status == "numerical_failure" for r in records)
