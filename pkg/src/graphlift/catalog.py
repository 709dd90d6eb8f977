"""Small-graphlet taxonomy and unordered lifting probabilities.

Graphlets on ``k <= 7`` vertices are identified by a canonical adjacency
code: the upper-triangle adjacency bits read row by row, first pair most
significant, minimized over all ``k!`` relabelings.  Types within a size are
numbered from 1 by (edge count, degree sequence descending, code), which
puts the 3-star before the 4-path and the clique last.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .graph import Graph
from .start import StartDistribution

MAX_K = 7

NAMES = {
    "edge": (2, 1),
    "wedge": (3, 1),
    "triangle": (3, 2),
    "3-star": (4, 1),
    "4-path": (4, 2),
    "4-tailedtriangle": (4, 3),
    "4-cycle": (4, 4),
    "4-chordalcycle": (4, 5),
    "4-clique": (4, 6),
}
_NAME_OF = {v: k for k, v in NAMES.items()}


@lru_cache(maxsize=None)
def pairs(k: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(k), 2))


@lru_cache(maxsize=None)
def _pair_index(k: int) -> dict[tuple[int, int], int]:
    idx = {}
    for p, (i, j) in enumerate(pairs(k)):
        idx[i, j] = idx[j, i] = p
    return idx


def code_from_edges(k: int, edges) -> int:
    """Adjacency code of a labelled graph on ``0..k-1``."""
    P = len(pairs(k))
    idx = _pair_index(k)
    code = 0
    for i, j in edges:
        code |= 1 << (P - 1 - idx[i, j])
    return code


def edges_from_code(k: int, code: int) -> list[tuple[int, int]]:
    P = len(pairs(k))
    return [pr for p, pr in enumerate(pairs(k)) if code >> (P - 1 - p) & 1]


def code_from_masks(masks: Sequence[int]) -> int:
    """Code from per-vertex masks of earlier adjacent vertices (lifting order)."""
    k = len(masks)
    P = k * (k - 1) // 2
    idx = _pair_index(k)
    code = 0
    for j, mask in enumerate(masks):
        i = 0
        while mask:
            if mask & 1:
                code |= 1 << (P - 1 - idx[i, j])
            mask >>= 1
            i += 1
    return code


@lru_cache(maxsize=None)
def _perm_tables(k: int):
    perms = np.array(list(permutations(range(k))), dtype=np.int64).reshape(-1, k)
    idx = _pair_index(k)
    pr = pairs(k)
    pairmap = np.empty((len(perms), len(pr)), dtype=np.int64)
    for s, sigma in enumerate(perms):
        for p, (i, j) in enumerate(pr):
            pairmap[s, p] = idx[int(sigma[i]), int(sigma[j])]
    P = len(pr)
    weights = np.array([1 << (P - 1 - p) for p in range(P)], dtype=np.int64)
    return perms, pairmap, weights


@lru_cache(maxsize=1 << 16)
def canonicalize(k: int, code: int) -> tuple[int, tuple[int, ...]]:
    """Return ``(canonical_code, order)``.

    ``order[i]`` is the input vertex that plays canonical vertex ``i``.
    """
    if k <= 1:
        return 0, tuple(range(k))
    perms, pairmap, weights = _perm_tables(k)
    P = len(weights)
    bits = np.array([(code >> (P - 1 - p)) & 1 for p in range(P)], dtype=np.int64)
    relabelled = bits[pairmap] @ weights
    best = int(np.argmin(relabelled))
    return int(relabelled[best]), tuple(int(x) for x in perms[best])


def _adjacency_masks(k: int, code: int) -> tuple[int, ...]:
    adj = [0] * k
    for i, j in edges_from_code(k, code):
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return tuple(adj)


def _is_connected_masks(adj: Sequence[int], subset: int) -> bool:
    if subset == 0:
        return False
    low = subset & -subset
    seen = low
    frontier = low
    while frontier:
        v = frontier.bit_length() - 1
        frontier &= ~(1 << v)
        new = adj[v] & subset & ~seen
        seen |= new
        frontier |= new
    return seen == subset


def count_orderings_dp(adj: Sequence[int]) -> int:
    """Orderings of all vertices whose every prefix induces a connected graph."""
    k = len(adj)
    full = (1 << k) - 1
    ways = [0] * (1 << k)
    for v in range(k):
        ways[1 << v] = 1
    for mask in range(1, full + 1):
        w = ways[mask]
        if not w:
            continue
        for u in range(k):
            if not mask >> u & 1 and adj[u] & mask:
                ways[mask | 1 << u] += w
    return ways[full]


@dataclass(frozen=True)
class GraphletType:
    """One isomorphism class of connected graphs on ``k`` vertices."""

    k: int
    index: int
    code: int
    edge_count: int
    co_count: int = field(compare=False)

    @property
    def key(self) -> str:
        return f"{self.k}-{self.index}"

    @property
    def name(self) -> str:
        return _NAME_OF.get((self.k, self.index), self.key)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return edges_from_code(self.k, self.code)

    @property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.k, self.k), dtype=np.uint8)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(bin(m).count("1") for m in _adjacency_masks(self.k, self.code))

    def automorphisms(self) -> list[tuple[int, ...]]:
        """Vertex permutations preserving the canonical adjacency."""
        perms, pairmap, weights = _perm_tables(self.k)
        P = len(weights)
        bits = np.array([(self.code >> (P - 1 - p)) & 1 for p in range(P)], dtype=np.int64)
        same = np.nonzero(bits[pairmap] @ weights == self.code)[0]
        return [tuple(int(x) for x in perms[s]) for s in same]

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"GraphletType({self.key}, {self.name!r})"


def _sort_key(k: int, code: int):
    degs = sorted((bin(m).count("1") for m in _adjacency_masks(k, code)), reverse=True)
    return (bin(code).count("1"), tuple(-d for d in degs), code)


@lru_cache(maxsize=None)
def graphlet_types(k: int) -> tuple[GraphletType, ...]:
    """All connected graphlets on ``k`` vertices in index order."""
    if not 1 <= k <= MAX_K:
        raise ValueError(f"graphlet size must be in 1..{MAX_K}, got {k}")
    if k == 1:
        codes = {0}
    else:
        # every connected graph has a vertex whose removal leaves it connected
        codes = set()
        for h in graphlet_types(k - 1):
            base = h.edges
            for r in range(1, k):
                for attach in combinations(range(k - 1), r):
                    edges = base + [(a, k - 1) for a in attach]
                    codes.add(canonicalize(k, code_from_edges(k, edges))[0])
    ordered = sorted(codes, key=lambda c: _sort_key(k, c))
    return tuple(
        GraphletType(k, i + 1, c, bin(c).count("1"), count_orderings_dp(_adjacency_masks(k, c)))
        for i, c in enumerate(ordered)
    )


@lru_cache(maxsize=None)
def _type_by_code(k: int) -> dict[int, GraphletType]:
    return {t.code: t for t in graphlet_types(k)}


def get_type(spec: str | GraphletType, k: int | None = None) -> GraphletType:
    """Look up a graphlet by ``"k-m"`` key or name (``triangle``, ``5-path``...)."""
    if isinstance(spec, GraphletType):
        return spec
    s = spec.strip().lower()
    if s in NAMES:
        kk, m = NAMES[s]
    else:
        match = re.fullmatch(r"(\d+)-(\d+)", s)
        family = re.fullmatch(r"(\d+)-(path|clique|star)", s)
        if match:
            kk, m = int(match[1]), int(match[2])
        elif family:
            kk = int(family[1])
            if not 2 <= kk <= MAX_K:
                raise ValueError(f"unknown graphlet {spec!r}")
            fam = family[2]
            if fam == "path":
                edges = [(i, i + 1) for i in range(kk - 1)]
            elif fam == "clique":
                edges = list(pairs(kk))
            else:
                # "3-star" is the 4-vertex star; "k-star" has k leaves
                kk += 1
                if kk > MAX_K:
                    raise ValueError(f"unknown graphlet {spec!r}")
                edges = [(0, i) for i in range(1, kk)]
            t = _type_by_code(kk)[canonicalize(kk, code_from_edges(kk, edges))[0]]
            kk, m = t.k, t.index
        else:
            raise ValueError(f"unknown graphlet {spec!r}")
    if k is not None and kk != k:
        raise ValueError(f"graphlet {spec!r} has {kk} vertices, expected {k}")
    if not 1 <= kk <= MAX_K:
        raise ValueError(f"unknown graphlet {spec!r}")
    types = graphlet_types(kk)
    if not 1 <= m <= len(types):
        raise ValueError(f"no graphlet {kk}-{m}; size {kk} has {len(types)} types")
    return types[m - 1]


_MASK_CACHE: dict[tuple[int, ...], tuple[GraphletType, tuple[int, ...]]] = {}


def classify_masks(masks: tuple[int, ...]) -> tuple[GraphletType, tuple[int, ...]]:
    """Classify a connected graph given as per-vertex masks of earlier neighbours."""
    hit = _MASK_CACHE.get(masks)
    if hit is None:
        k = len(masks)
        canon, order = canonicalize(k, code_from_masks(masks))
        t = _type_by_code(k).get(canon)
        if t is None:
            raise ValueError("subgraph is not connected")
        hit = _MASK_CACHE[masks] = (t, order)
    return hit


@dataclass(frozen=True)
class InducedSubgraph:
    """A vertex list with its induced edges (as index pairs) and host degrees."""

    vertices: tuple[int, ...]
    edges: frozenset
    host_degrees: tuple[int, ...]

    @classmethod
    def from_graph(cls, g: Graph, vertices: Sequence[int]) -> "InducedSubgraph":
        vertices = tuple(vertices)
        edges = frozenset(
            (i, j) for i, j in combinations(range(len(vertices)), 2)
            if g.has_edge(vertices[i], vertices[j])
        )
        return cls(vertices, edges, tuple(g.degree[v] for v in vertices))

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def adjacency_masks(self) -> tuple[int, ...]:
        adj = [0] * self.k
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return tuple(adj)

    @property
    def code(self) -> int:
        return code_from_edges(self.k, self.edges)

    def is_connected(self) -> bool:
        return _is_connected_masks(self.adjacency_masks, (1 << self.k) - 1)

    def check_degrees(self) -> None:
        for i, m in enumerate(self.adjacency_masks):
            if self.host_degrees[i] < bin(m).count("1"):
                raise ValueError(
                    f"host degree {self.host_degrees[i]} of vertex {i} is below "
                    f"its degree {bin(m).count('1')} inside the subgraph"
                )


def classify(s: InducedSubgraph) -> tuple[GraphletType, tuple[int, ...]]:
    """Graphlet type of ``s`` and the map ``order[i]`` = index in ``s`` of canonical vertex ``i``."""
    if not 1 <= s.k <= MAX_K:
        raise ValueError(f"subgraph size must be in 1..{MAX_K}")
    if not s.is_connected():
        raise ValueError("subgraph is not connected")
    canon, order = canonicalize(s.k, s.code)
    return _type_by_code(s.k)[canon], order


def count_compatible_orderings(h: GraphletType) -> int:
    return count_orderings_dp(_adjacency_masks(h.k, h.code))


def compatible_orderings(adj: Sequence[int]):
    """Yield every ordering of ``range(len(adj))`` with connected prefixes."""
    k = len(adj)

    def extend(seq, mask):
        if len(seq) == k:
            yield tuple(seq)
            return
        for u in range(k):
            if not mask >> u & 1 and (not seq or adj[u] & mask):
                seq.append(u)
                yield from extend(seq, mask | 1 << u)
                seq.pop()

    yield from extend([], 0)


def _ordering_steps(adj: Sequence[int], order: Sequence[int]):
    """Per lift step ``r``: edges gained by the new vertex and twice the prefix edge count."""
    steps = []
    mask = 1 << order[0]
    edges = 0
    for r in range(1, len(order)):
        gained = bin(adj[order[r]] & mask).count("1")
        steps.append((gained, 2 * edges))
        edges += gained
        mask |= 1 << order[r]
    return tuple(steps)


def _sequence_mass(order, steps, degrees, weight, exact):
    p = weight(degrees[order[0]])
    if not p:
        return 0
    if exact:
        p = Fraction(p)
    total_deg = degrees[order[0]]
    for r, (gained, two_e) in enumerate(steps, start=1):
        p = p * gained / (total_deg - two_e)
        total_deg += degrees[order[r]]
    return p


def pi_u_direct(s: InducedSubgraph, start: StartDistribution, exact: bool = False):
    """Unordered lifting probability as a sum over compatible orderings."""
    s.check_degrees()
    adj = s.adjacency_masks
    d = s.host_degrees
    total = Fraction(0) if exact else 0.0
    for order in compatible_orderings(adj):
        total += _sequence_mass(order, _ordering_steps(adj, order), d, start.weight, exact)
    return total / start.K


def pi_u_recursive(s: InducedSubgraph, start: StartDistribution, exact: bool = False):
    """Unordered lifting probability by recursion over connected one-smaller subsets."""
    s.check_degrees()
    adj = s.adjacency_masks
    d = s.host_degrees
    k = s.k
    memo: dict[int, object] = {}

    def edge_count(mask):
        return sum(bin(adj[v] & mask).count("1") for v in range(k) if mask >> v & 1) // 2

    def prob(mask):
        if mask in memo:
            return memo[mask]
        if mask & (mask - 1) == 0:
            v = mask.bit_length() - 1
            p = start.exact_prob(d[v]) if exact else start.prob(d[v])
        else:
            p = Fraction(0) if exact else 0.0
            e_t = edge_count(mask)
            for u in range(k):
                if not mask >> u & 1:
                    continue
                sub = mask & ~(1 << u)
                if not _is_connected_masks(adj, sub):
                    continue
                e_s = edge_count(sub)
                boundary = sum(d[v] for v in range(k) if sub >> v & 1) - 2 * e_s
                p += prob(sub) * (e_t - e_s) / boundary
        memo[mask] = p
        return p

    return prob((1 << k) - 1)


class DegreeProbabilityFunction:
    """Cached ``F_m``: maps host degrees in canonical vertex order to ``K * pi_U``.

    The compatible orderings of the graphlet are enumerated once; each
    evaluation sums the per-ordering lift products.  Float evaluations are
    memoized per degree vector.
    """

    def __init__(self, graphlet: GraphletType, weight, cache_size: int = 1 << 20):
        self.graphlet = graphlet
        self.weight = weight
        adj = _adjacency_masks(graphlet.k, graphlet.code)
        self._internal = tuple(bin(m).count("1") for m in adj)
        self._orders = tuple((o, _ordering_steps(adj, o)) for o in compatible_orderings(adj))
        self._cached = lru_cache(maxsize=cache_size)(self._evaluate)
        self._cached_exact = lru_cache(maxsize=cache_size)(partial(self._evaluate, exact=True))

    def _evaluate(self, degrees: tuple[int, ...], exact: bool = False):
        total = Fraction(0) if exact else 0.0
        for order, steps in self._orders:
            total += _sequence_mass(order, steps, degrees, self.weight, exact)
        return total

    def _check(self, degrees):
        if len(degrees) != self.graphlet.k or any(d < i for d, i in zip(degrees, self._internal)):
            raise ValueError(f"invalid degree vector {degrees} for graphlet {self.graphlet.key}")

    def __call__(self, degrees: Sequence[int]) -> float:
        degrees = tuple(degrees)
        self._check(degrees)
        return self._cached(degrees)

    def exact(self, degrees: Sequence[int]) -> Fraction:
        degrees = tuple(degrees)
        self._check(degrees)
        return self._cached_exact(degrees)

    def cache_info(self):
        return self._cached.cache_info()


def build_degree_function(h: GraphletType, start: StartDistribution | object) -> DegreeProbabilityFunction:
    """``F_m`` for graphlet ``h`` under a start distribution (or bare degree weight)."""
    weight = start.weight if isinstance(start, StartDistribution) else start
    return DegreeProbabilityFunction(h, weight)
