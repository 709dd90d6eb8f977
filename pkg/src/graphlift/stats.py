"""Variance, autocorrelation and theoretical bounds for lift estimator runs."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .catalog import GraphletType, get_type
from .exceptions import InsufficientDataError
from .graph import Graph
from .lifting import estimate
from .oracle import conditional_moments, transition_matrix
from .runs import EstimateRun
from .start import StartDistribution

__all__ = [
    "EstimateRun",
    "TheoryBounds",
    "variance_under_independence",
    "relative_variance",
    "lag_correlation",
    "lag_covariance",
    "batch_means_stderr",
    "spectral_mu",
    "theory_bounds",
    "exact_lag_covariance",
    "relative_error_experiment",
    "CSV_COLUMNS",
    "CSV_VERSION",
    "summary_row",
    "write_csv",
]

SPECTRAL_LIMIT = 2000


def variance_under_independence(run: EstimateRun) -> float:
    """Unbiased sample variance of one weight ``phi``.

    Divide by ``run.n`` for the variance of the mean under independent
    sampling.
    """
    if run.n < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {run.n}")
    return run.sample_variance


def relative_variance(run: EstimateRun, count: float) -> float:
    """Dimensionless ``Var(phi) / N^2``."""
    return variance_under_independence(run) / (count * count)


def _single_chain_stream(run: EstimateRun) -> np.ndarray:
    if run.chains != 1:
        raise ValueError("lag statistics need a single chain; this run merges "
                         f"{run.chains} chains")
    if run.phi is None:
        raise ValueError("run did not retain its phi stream")
    return run.phi


def lag_correlation(run: EstimateRun, max_lag: int = 1) -> list[float | None]:
    """Pearson correlation of ``(phi_i, phi_{i+l})`` for ``l = 1..max_lag``.

    ``None`` marks lags where either margin is constant or too short.
    """
    phi = _single_chain_stream(run)
    out: list[float | None] = []
    for lag in range(1, max_lag + 1):
        a, b = phi[:-lag], phi[lag:]
        if len(a) < 2:
            out.append(None)
            continue
        sa, sb = a.std(), b.std()
        if sa == 0 or sb == 0:
            out.append(None)
            continue
        out.append(float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb)))
    return out


def lag_covariance(run: EstimateRun, lag: int = 1) -> float:
    phi = _single_chain_stream(run)
    if len(phi) <= lag + 1:
        raise InsufficientDataError(f"stream too short for lag {lag}")
    a, b = phi[:-lag], phi[lag:]
    return float(np.mean((a - a.mean()) * (b - b.mean())))


def batch_means_stderr(run: EstimateRun, batches: int = 50) -> float:
    """Standard error of the mean from ``batches`` contiguous batch means.

    Unlike ``run.stderr`` this stays valid when consecutive weights are
    correlated, provided each batch is much longer than the correlation time.
    """
    phi = _single_chain_stream(run)
    if batches < 2 or len(phi) < 2 * batches:
        raise InsufficientDataError(f"need at least {2 * batches} samples for {batches} batches")
    usable = len(phi) - len(phi) % batches
    means = phi[:usable].reshape(batches, -1).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(batches))


def spectral_mu(g: Graph, lazy: bool = False) -> float:
    """Second largest eigenvalue of the simple random walk transition matrix."""
    A = np.zeros((g.n, g.n))
    for v, nb in enumerate(g.adj):
        A[v, list(nb)] = 1.0
    inv_sqrt = 1.0 / np.sqrt(np.asarray(g.degree, dtype=float))
    S = inv_sqrt[:, None] * A * inv_sqrt[None, :]
    eig = np.linalg.eigvalsh(S)
    mu = float(eig[-2]) if g.n > 1 else 0.0
    return (1.0 + mu) / 2.0 if lazy else mu


@dataclass(frozen=True)
class TheoryBounds:
    """Variance and covariance bounds for one graph and target graphlet."""

    target: GraphletType
    degrees: tuple[int, ...]
    D: float
    count: float
    edges: int
    var_bound_rw: float
    var_bound_uniform: float
    mu: float | None = None

    def mixing_bound(self, h: int) -> float:
        """Upper bound on the walk's mixing coefficient after ``h`` steps."""
        if self.mu is None:
            return 1.0
        return math.exp(-(1.0 - self.mu) * h)

    def cov_bound(self, h: int) -> float:
        """Bound on ``|Cov(phi_i, phi_{i+1})|`` with spacing ``h``."""
        return 8.0 * self.count * self.edges ** 2 * self.mixing_bound(h) * self.D

    def cov_sum_bound(self, h: int) -> float:
        """Bound on ``(2/n) |sum_{i<j} Cov(phi_i, phi_j)|`` (infinite if ``mu`` unknown)."""
        g = self.mixing_bound(h)
        if g >= 1.0:
            return math.inf
        return 8.0 * self.count * self.edges ** 2 * g / (1.0 - g) * self.D

    def var_bound(self, start_kind: str) -> float | None:
        if start_kind == "rw":
            return self.var_bound_rw
        if start_kind == "uniform":
            return self.var_bound_uniform
        return None


def theory_bounds(g: Graph, target, count: float, lazy: bool = False,
                  spectral_limit: int = SPECTRAL_LIMIT) -> TheoryBounds:
    """Bounds from the top-``k`` degrees ``Delta_1 >= ... >= Delta_k``.

    ``D = prod_{r=2}^{k-1} (Delta_1 + ... + Delta_r)``.  ``count`` is the true
    graphlet count when known, otherwise an estimate.  The spectral quantity
    ``mu`` is computed only for graphs up to ``spectral_limit`` vertices.
    """
    t = get_type(target)
    top = g.max_degrees(t.k)
    D = 1
    for r in range(2, t.k):
        D *= sum(top[:r])
    base = count * 2 * g.m * D / t.co_count
    mu = spectral_mu(g, lazy) if g.n <= spectral_limit else None
    return TheoryBounds(t, tuple(top), D, count, g.m, base, base * top[0], mu)


def exact_lag_covariance(g: Graph, target, estimator: str, start: StartDistribution,
                         h: int) -> float:
    """Exact ``Cov(phi_i, phi_{i+1})`` for a stationary walk start with spacing ``h``.

    Conditional on their start vertices two lifts are independent, so the
    covariance is ``sum_{x,y} m(x) pi(x) P^h(x,y) m(y) - N^2`` with
    ``m(x) = E[phi | v_1 = x]`` computed exhaustively.
    """
    if start.kind != "rw":
        raise ValueError("lag covariance is only defined for random-walk starts")
    t = get_type(target)
    first, _ = conditional_moments(g, t.k, start, estimator)[t]
    m = np.array([float(x) for x in first])
    pi = np.array([start.prob(d) for d in g.degree])
    P = np.linalg.matrix_power(transition_matrix(g, start.lazy), h)
    mean = float(pi @ m)
    return float((pi * m) @ P @ m - mean * mean)


def relative_error_experiment(g: Graph, targets: Sequence, budgets: Iterable[int], runs: int,
                              counts: dict, estimator: str = "shotgun",
                              start: StartDistribution | None = None,
                              seed: int = 0) -> dict[GraphletType, list[float]]:
    """Mean ``|N_hat - N| / N`` over ``runs`` repetitions at each query budget."""
    from .lifting import samples_for_budget

    types = [get_type(t) for t in targets]
    ks = {t.k for t in types}
    if len(ks) != 1:
        raise ValueError("targets must share one graphlet size")
    k = ks.pop()
    start = start or StartDistribution.rw(g)
    out: dict[GraphletType, list[float]] = {t: [] for t in types}
    for b, budget in enumerate(budgets):
        n = samples_for_budget(k, estimator, start, budget)
        errors = {t: [] for t in types}
        for r in range(runs):
            res = estimate(g, k, estimator, start, n, seed=[seed, b, r], targets=types,
                           keep_stream=False)
            for t in types:
                truth = counts[t]
                errors[t].append(abs(res[t].estimate - truth) / truth)
        for t in types:
            out[t].append(float(np.mean(errors[t])))
    return out


CSV_VERSION = "graphlift-results v1"
CSV_COLUMNS = (
    "graph", "k", "type", "estimator", "start", "h", "seed", "n", "queries",
    "estimate", "v_ind", "corr_lag1", "bound_var", "bound_cov",
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        return repr(x)
    return str(x)


def summary_row(graph: str, run: EstimateRun, bounds: TheoryBounds | None = None) -> dict:
    cfg = run.config
    h = cfg.get("spacing", 0)
    start = cfg.get("start", "")
    corr = None
    if run.chains == 1 and run.phi is not None and run.n > 2:
        corr = lag_correlation(run, 1)[0]
    kind = "rw" if start == "rw" else start
    bound_var = bounds.var_bound(kind) if bounds is not None else None
    bound_cov = bounds.cov_bound(h) if bounds is not None and kind == "rw" else None
    seed = cfg.get("seed")
    return {
        "graph": graph,
        "k": run.target.k,
        "type": run.target.key,
        "estimator": run.estimator,
        "start": start,
        "h": h,
        "seed": "" if seed is None else seed,
        "n": run.n,
        "queries": run.queries,
        "estimate": run.estimate,
        "v_ind": run.sample_variance if run.n >= 2 else None,
        "corr_lag1": corr,
        "bound_var": bound_var,
        "bound_cov": bound_cov,
    }


def write_csv(rows: Iterable[dict], fh) -> None:
    """Write rows under the versioned header comment."""
    fh.write(f"# {CSV_VERSION}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in CSV_COLUMNS])
