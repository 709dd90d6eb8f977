"""Per-target accumulator of Horvitz-Thompson sample weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import GraphletType


@dataclass
class EstimateRun:
    """Weights ``phi_i`` collected for one target graphlet.

    ``phi`` holds the ordered per-sample stream when it was retained.  A run
    merged from several independent chains keeps ``chains > 1`` and refuses
    lag statistics.
    """

    target: GraphletType
    estimator: str
    n: int = 0
    sum_phi: float = 0.0
    sum_phi_sq: float = 0.0
    queries: int = 0
    phi: np.ndarray | None = None
    chains: int = 1
    config: dict = field(default_factory=dict)

    @classmethod
    def from_stream(cls, target, estimator, phi, queries=0, config=None) -> "EstimateRun":
        phi = np.asarray(phi, dtype=float)
        return cls(target, estimator, len(phi), math.fsum(phi), math.fsum(phi * phi),
                   queries, phi, 1, dict(config or {}))

    @property
    def estimate(self) -> float:
        return self.sum_phi / self.n if self.n else float("nan")

    @property
    def sample_variance(self) -> float:
        """Unbiased variance of a single weight (``n - 1`` normalization)."""
        if self.n < 2:
            return float("nan")
        if self.phi is not None:
            return float(np.var(self.phi, ddof=1))
        mean = self.estimate
        return max(self.sum_phi_sq - self.n * mean * mean, 0.0) / (self.n - 1)

    @property
    def stderr(self) -> float:
        """Standard error of the mean, treating samples as independent."""
        return math.sqrt(self.sample_variance / self.n) if self.n >= 2 else float("nan")

    @classmethod
    def merge(cls, runs) -> "EstimateRun":
        """Combine independent chains for the same target (sums add)."""
        runs = list(runs)
        if not runs:
            raise ValueError("nothing to merge")
        first = runs[0]
        if any(r.target != first.target or r.estimator != first.estimator for r in runs):
            raise ValueError("can only merge runs of the same target and estimator")
        streams = [r.phi for r in runs]
        return cls(
            first.target,
            first.estimator,
            sum(r.n for r in runs),
            math.fsum(r.sum_phi for r in runs),
            math.fsum(r.sum_phi_sq for r in runs),
            sum(r.queries for r in runs),
            np.concatenate(streams) if all(s is not None for s in streams) else None,
            sum(r.chains for r in runs),
            dict(first.config),
        )
