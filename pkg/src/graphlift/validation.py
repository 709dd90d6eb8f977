"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numbers

import numpy as np

from .catalog import MAX_K
from .graph import Graph, largest_component
from .lifting import ESTIMATORS


def _is_networkx(X) -> bool:
    return hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_directed")


def check_graph(X, connected: bool = True) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a ``Graph``, a networkx-style undirected graph, an ``(m, 2)``
    integer edge array, or a square adjacency matrix (dense or scipy
    sparse).  With ``connected`` the largest component is kept.
    """
    if isinstance(X, Graph):
        g = X
    elif _is_networkx(X):
        if X.is_directed():
            raise ValueError("directed graphs are not supported")
        nodes = list(X.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        adjacency = [set() for _ in nodes]
        for u, v in X.edges():
            if u != v:
                adjacency[index[u]].add(index[v])
                adjacency[index[v]].add(index[u])
        g = Graph(adjacency, labels=nodes)
    elif hasattr(X, "tocoo"):
        coo = X.tocoo()
        if coo.shape[0] != coo.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {coo.shape}")
        g = Graph.from_edges(zip(coo.row.tolist(), coo.col.tolist()), n=coo.shape[0])
    else:
        arr = np.asarray(X)
        if arr.ndim != 2:
            raise ValueError(f"expected an edge array or adjacency matrix, got {arr.ndim}-d input")
        if arr.shape[1] == 2 and not (arr.shape[0] == 2 and _looks_like_adjacency(arr)):
            if not np.issubdtype(arr.dtype, np.integer):
                if not np.all(np.mod(arr, 1) == 0):
                    raise ValueError("edge array must hold integer vertex ids")
            if arr.size and arr.min() < 0:
                raise ValueError("vertex ids must be non-negative")
            g = Graph.from_edges(arr.astype(np.int64).tolist())
        elif arr.shape[0] == arr.shape[1]:
            rows, cols = np.nonzero(arr)
            g = Graph.from_edges(zip(rows.tolist(), cols.tolist()), n=arr.shape[0])
        else:
            raise ValueError(f"cannot interpret array of shape {arr.shape} as a graph")
    if g.m == 0:
        raise ValueError("graph has no edges")
    if connected:
        g = largest_component(g)
    return g


def _looks_like_adjacency(arr) -> bool:
    return bool(np.all((arr == 0) | (arr == 1)) and np.all(arr == arr.T) and np.all(np.diag(arr) == 0))


def check_k(k) -> int:
    if not isinstance(k, numbers.Integral) or not 2 <= k <= MAX_K:
        raise ValueError(f"k must be an integer in 2..{MAX_K}, got {k!r}")
    return int(k)


def check_estimator_name(name: str, k: int) -> str:
    if name not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}, got {name!r}")
    if name == "shotgun" and k < 3:
        raise ValueError("shotgun sampling needs k >= 3")
    return name


def check_positive_int(value, name: str, allow_zero: bool = False) -> int:
    low = 0 if allow_zero else 1
    if not isinstance(value, numbers.Integral) or value < low:
        raise ValueError(f"{name} must be an integer >= {low}, got {value!r}")
    return int(value)


def check_seed(random_state):
    """Turn ``random_state`` into something ``numpy.random.SeedSequence`` accepts."""
    if random_state is None or isinstance(random_state, numbers.Integral):
        return None if random_state is None else int(random_state)
    if isinstance(random_state, np.random.RandomState):
        return int(random_state.randint(0, 2**31 - 1))
    if isinstance(random_state, np.random.Generator):
        return int(random_state.integers(0, 2**63 - 1))
    raise ValueError(f"random_state must be None, an int or a numpy generator, got {random_state!r}")


def is_graph_collection(X) -> bool:
    return isinstance(X, (list, tuple))
