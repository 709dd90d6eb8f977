"""scikit-learn style wrappers: graphlet counts as graph features."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .catalog import graphlet_types, get_type
from .lifting import estimate, samples_for_budget
from .oracle import DEFAULT_CAP, exact_count
from .start import StartDistribution
from .validation import (
    check_estimator_name,
    check_graph,
    check_k,
    check_positive_int,
    check_seed,
    is_graph_collection,
)


class LiftGraphletCounter(TransformerMixin, BaseEstimator):
    """Estimate size-``k`` graphlet counts by lifting.

    Parameters
    ----------
    k : int
        Graphlet size.
    estimator : {"unordered", "ordered", "shotgun"}
    start : str
        ``"rw"``, ``"uniform"`` or ``"degree-poly:<expr in d>"``.
    n_samples : int
        Samples per graph.  Ignored when ``budget`` is set.
    budget : int or None
        Neighborhood-query budget per graph; overrides ``n_samples``.
    spacing, burn_in, lazy :
        Random-walk settings (used only with ``start="rw"``).
    targets : list of str or None
        Graphlet names or ``"k-m"`` keys; ``None`` means all types of size k.
    n_chains, n_jobs : int
        Independent chains per graph and worker processes to run them.
    random_state : int, numpy generator or None

    Attributes
    ----------
    types_ : list of GraphletType
    counts_ : ndarray
        Estimated counts, shape ``(n_types,)`` after fitting one graph or
        ``(n_graphs, n_types)`` after fitting a list.
    stderr_ : ndarray
        Independent-sample standard errors, same shape as ``counts_``.
    runs_ : dict or list of dict
        Per-type :class:`EstimateRun` objects.
    n_queries_ : int or ndarray
    """

    def __init__(self, k=3, estimator="unordered", start="rw", n_samples=10000, budget=None,
                 spacing=3, burn_in=100, lazy=False, targets=None, n_chains=1, n_jobs=1,
                 random_state=None, keep_stream=True):
        self.k = k
        self.estimator = estimator
        self.start = start
        self.n_samples = n_samples
        self.budget = budget
        self.spacing = spacing
        self.burn_in = burn_in
        self.lazy = lazy
        self.targets = targets
        self.n_chains = n_chains
        self.n_jobs = n_jobs
        self.random_state = random_state
        self.keep_stream = keep_stream

    def _validate(self):
        k = check_k(self.k)
        check_estimator_name(self.estimator, k)
        check_positive_int(self.n_chains, "n_chains")
        check_positive_int(self.spacing, "spacing", allow_zero=True)
        check_positive_int(self.burn_in, "burn_in", allow_zero=True)
        if self.targets is None:
            types = list(graphlet_types(k))
        else:
            types = [get_type(t, k) for t in self.targets]
        return k, types

    def _one(self, X, k, types, seed):
        g = check_graph(X)
        start = StartDistribution.from_spec(g, self.start, burn_in=self.burn_in,
                                            spacing=self.spacing, lazy=self.lazy)
        if self.budget is not None:
            n = samples_for_budget(k, self.estimator, start, self.budget) // self.n_chains
            n = max(n, 1) * self.n_chains
        else:
            n = check_positive_int(self.n_samples, "n_samples")
        runs = estimate(g, k, self.estimator, start, n, seed=seed, targets=types,
                        n_chains=self.n_chains, n_jobs=self.n_jobs, keep_stream=self.keep_stream)
        counts = np.array([runs[t].estimate for t in types])
        stderr = np.array([runs[t].stderr for t in types])
        return runs, counts, stderr, runs[types[0]].queries

    def _seeds(self, m):
        seed = check_seed(self.random_state)
        if seed is None:
            return [None] * m
        return [seed] if m == 1 else [[seed, i] for i in range(m)]

    def fit(self, X, y=None):
        """Estimate counts on one graph or on each graph of a list."""
        k, types = self._validate()
        self.types_ = types
        if is_graph_collection(X):
            out = [self._one(x, k, types, s) for x, s in zip(X, self._seeds(len(X)))]
            self.runs_ = [o[0] for o in out]
            self.counts_ = np.vstack([o[1] for o in out]) if out else np.empty((0, len(types)))
            self.stderr_ = np.vstack([o[2] for o in out]) if out else np.empty((0, len(types)))
            self.n_queries_ = np.array([o[3] for o in out])
        else:
            self.runs_, self.counts_, self.stderr_, self.n_queries_ = self._one(
                X, k, types, self._seeds(1)[0]
            )
        return self

    def transform(self, X):
        """Count features, shape ``(n_graphs, n_types)``."""
        check_is_fitted(self, "types_")
        graphs = X if is_graph_collection(X) else [X]
        k, types = self._validate()
        rows = [self._one(x, k, types, s)[1] for x, s in zip(graphs, self._seeds(len(graphs)))]
        return np.vstack(rows) if rows else np.empty((0, len(types)))

    def fit_transform(self, X, y=None, **fit_params):
        self.fit(X, y)
        return np.atleast_2d(self.counts_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "types_")
        return np.array([t.name for t in self.types_], dtype=object)


class ExactGraphletCounter(TransformerMixin, BaseEstimator):
    """Exact size-``k`` graphlet counts by exhaustive enumeration."""

    def __init__(self, k=3, targets=None, cap=DEFAULT_CAP):
        self.k = k
        self.targets = targets
        self.cap = cap

    def _types(self):
        k = check_k(self.k)
        if self.targets is None:
            return k, list(graphlet_types(k))
        return k, [get_type(t, k) for t in self.targets]

    def _one(self, X, k, types):
        exact = exact_count(check_graph(X), k, cap=self.cap)
        return np.array([exact.counts[t] for t in types], dtype=np.int64), exact

    def fit(self, X, y=None):
        k, self.types_ = self._types()
        if is_graph_collection(X):
            self.counts_ = np.vstack([self._one(x, k, self.types_)[0] for x in X])
        else:
            self.counts_, self.exact_ = self._one(X, k, self.types_)
        return self

    def transform(self, X):
        check_is_fitted(self, "types_")
        k, types = self._types()
        graphs = X if is_graph_collection(X) else [X]
        return np.vstack([self._one(x, k, types)[0] for x in graphs])

    def fit_transform(self, X, y=None, **fit_params):
        self.fit(X, y)
        return np.atleast_2d(self.counts_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "types_")
        return np.array([t.name for t in self.types_], dtype=object)
