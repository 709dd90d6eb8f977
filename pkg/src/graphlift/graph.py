"""Immutable simple undirected graphs and the neighborhood-query cost model."""

from __future__ import annotations

import io
import logging
import os
from collections import deque
from typing import BinaryIO, Iterable, Sequence

from .exceptions import EmptyGraphError, GraphFormatError

logger = logging.getLogger(__name__)


class QueryCounter:
    """Counts neighborhood queries made by one sampling chain."""

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def reset(self) -> None:
        self.count = 0

    def __int__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"QueryCounter({self.count})"


class Graph:
    """Simple undirected graph on dense vertex ids ``0..n-1``.

    Adjacency lists are sorted tuples; ``adjsets`` mirrors them as frozensets
    for constant-time membership tests in the lifting hot loop.  ``labels``
    maps each dense id back to the label it had in the source data.
    """

    __slots__ = ("n", "m", "adj", "adjsets", "degree", "labels")

    def __init__(self, adjacency: Sequence[Iterable[int]], labels: Sequence | None = None):
        adj = tuple(tuple(sorted(set(nb))) for nb in adjacency)
        n = len(adj)
        for v, nb in enumerate(adj):
            for u in nb:
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= u < n:
                    raise ValueError(f"neighbor {u} of vertex {v} out of range")
        adjsets = tuple(frozenset(nb) for nb in adj)
        for v, nb in enumerate(adj):
            for u in nb:
                if v not in adjsets[u]:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
        self.n = n
        self.adj = adj
        self.adjsets = adjsets
        self.degree = tuple(len(nb) for nb in adj)
        self.m = sum(self.degree) // 2
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise ValueError("labels must have one entry per vertex")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> "Graph":
        """Build from integer pairs already in ``0..n-1``; loops and repeats are dropped."""
        edges = [(int(u), int(v)) for u, v in edges]
        if n is None:
            n = 1 + max((max(u, v) for u, v in edges), default=-1)
        adjacency: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(adjacency)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjsets[u]

    def neighbors(self, v: int, counter: QueryCounter | None = None) -> tuple[int, ...]:
        """Return the sorted neighbors of ``v``, charging one query to ``counter``."""
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for graph with {self.n} vertices")
        if counter is not None:
            counter.count += 1
        return self.adj[v]

    def max_degrees(self, k: int) -> list[int]:
        """The ``k`` largest degrees in non-increasing order (zero padded)."""
        top = sorted(self.degree, reverse=True)[:k]
        return top + [0] * (k - len(top))

    def is_connected(self) -> bool:
        return self.n > 0 and len(_component(self, 0)) == self.n

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph with vertices renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adjacency = [[index[u] for u in self.adj[v] if u in index] for v in vertices]
        return Graph(adjacency, labels=[self.labels[v] for v in vertices])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def neighbors(g: Graph, v: int, counter: QueryCounter | None = None) -> tuple[int, ...]:
    return g.neighbors(v, counter)


def _open_text(source) -> io.TextIOBase:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8")
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def load_edge_list(source: BinaryIO | str | os.PathLike | bytes, format: str = "plain") -> Graph:
    """Parse a plain or MatrixMarket edge list into a simple undirected graph.

    Lines starting with ``%`` or ``#`` are comments.  For ``format="mtx"`` the
    first non-comment line holds the matrix dimensions and is skipped.  Tokens
    past the first two (edge weights) are ignored.  Self-loops are dropped,
    repeated and reversed edges merged, and vertex ids compacted to ``0..n-1``
    in order of first appearance.
    """
    if format not in ("plain", "mtx"):
        raise ValueError(f"unknown edge-list format {format!r}")
    stream = _open_text(source)
    labels: dict[int, int] = {}
    adjacency: list[set[int]] = []
    header_pending = format == "mtx"

    def vertex(label: int) -> int:
        idx = labels.get(label)
        if idx is None:
            idx = labels[label] = len(adjacency)
            adjacency.append(set())
        return idx

    try:
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line or line[0] in "%#":
                continue
            if header_pending:
                header_pending = False
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) < 2:
                raise GraphFormatError(f"expected two vertex ids, got {line!r}", lineno)
            try:
                a, b = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphFormatError(f"non-integer vertex id in {line!r}", lineno) from None
            if a == b:
                continue
            u, v = vertex(a), vertex(b)
            adjacency[u].add(v)
            adjacency[v].add(u)
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()

    if not adjacency:
        raise EmptyGraphError("edge list contains no edges")
    return Graph(adjacency, labels=list(labels))


def _component(g: Graph, root: int) -> list[int]:
    seen = {root}
    queue = deque([root])
    order = [root]
    while queue:
        v = queue.popleft()
        for u in g.adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
                order.append(u)
    return order


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    seen = [False] * g.n
    comps = []
    for v in range(g.n):
        if not seen[v]:
            comp = sorted(_component(g, v))
            for u in comp:
                seen[u] = True
            comps.append(comp)
    return comps


def largest_component(g: Graph) -> Graph:
    """Restrict ``g`` to its largest connected component.

    Ties go to the component containing the smallest vertex id.  Relative
    vertex order is preserved and original labels carried through.
    """
    comps = connected_components(g)
    if len(comps) <= 1:
        return g
    best = max(comps, key=lambda c: (len(c), -c[0]))
    logger.warning(
        "graph has %d components; keeping largest (%d of %d vertices)",
        len(comps), len(best), g.n,
    )
    return g.subgraph(best)
