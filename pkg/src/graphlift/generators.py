"""Small deterministic and random test graphs."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import Graph, largest_component


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(combinations(range(n), 2), n=n)


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with the hub at vertex 0."""
    return Graph.from_edges(((0, i) for i in range(1, leaves + 1)), n=leaves + 1)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(((i, i + 1) for i in range(n - 1)), n=n)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(((i, (i + 1) % n) for i in range(n)), n=n)


def diamond_graph() -> Graph:
    """``K_4`` minus one edge."""
    return Graph.from_edges([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], n=4)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(outer + spokes + inner, n=10)


def gnp_random_graph(n: int, p: float, seed=None) -> Graph:
    """Erdos-Renyi ``G(n, p)`` drawn with ``numpy.random.default_rng(seed)``."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), n=n)


def connected_gnp(n: int, p: float, seed=0, max_tries: int = 1000) -> Graph:
    """First connected draw of ``G(n, p)`` over seeds ``[seed, 0], [seed, 1], ...``."""
    for attempt in range(max_tries):
        g = gnp_random_graph(n, p, [seed, attempt])
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected G({n}, {p}) in {max_tries} draws")


def preferential_attachment(n: int, m: int, seed=None) -> Graph:
    """Barabasi-Albert style graph: each new vertex links to ``m`` degree-biased targets."""
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    rng = np.random.default_rng(seed)
    edges = list(combinations(range(m + 1), 2))
    ends = [v for e in edges for v in e]
    for v in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(ends[int(rng.integers(len(ends)))])
        for u in sorted(targets):
            edges.append((u, v))
            ends.extend((u, v))
    return largest_component(Graph.from_edges(edges, n=n))


def validation_suite() -> dict[str, Graph]:
    """Small named graphs used for exhaustive normalization and moment checks."""
    suite = {
        "K3": complete_graph(3),
        "K4": complete_graph(4),
        "K1,3": star_graph(3),
        "C4": cycle_graph(4),
        "diamond": diamond_graph(),
        "petersen": petersen_graph(),
    }
    for i, n in enumerate((8, 10, 12)):
        suite[f"gnp{n}"] = connected_gnp(n, 0.35, seed=i)
    return suite
