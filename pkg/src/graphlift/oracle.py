"""Exact ground truth on desk-scale graphs.

``exact_count`` enumerates every connected induced k-subgraph once (ESU
extension from its smallest vertex).  ``enumerate_pi`` computes the exact
lifting distribution over ordered sequences and unordered subgraphs by
walking the lift tree.  ``exact_moments`` drives the real lifting code with a
scripted generator that visits every random branch, giving the exact first
and second moments of each estimator's per-sample weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from .catalog import (
    GraphletType,
    InducedSubgraph,
    build_degree_function,
    classify_masks,
    graphlet_types,
)
from .exceptions import TooLargeError
from .graph import Graph
from .lifting import _lift, ordered_phi, shotgun_phi, unordered_phi
from .start import StartDistribution

DEFAULT_CAP = 10**8
ENUMERATION_LIMIT = 12
EXACT_LIMIT = 8


@dataclass
class ExactCounts:
    k: int
    counts: dict[GraphletType, int]
    total_cis: int

    def __getitem__(self, key) -> int:
        from .catalog import get_type

        return self.counts[get_type(key, self.k)]

    def by_name(self) -> dict[str, int]:
        return {t.name: c for t, c in self.counts.items()}


def exact_count(g: Graph, k: int, cap: int = DEFAULT_CAP) -> ExactCounts:
    """Count every k-CIS of ``g`` by type.

    Raises :class:`TooLargeError` as soon as more than ``cap`` subgraphs have
    been seen; the count is never silently truncated.
    """
    types = graphlet_types(k)
    tally = {t: 0 for t in types}
    if k == 1:
        tally[types[0]] = g.n
        return ExactCounts(k, tally, g.n)
    adjsets = g.adjsets
    total = 0
    by_masks: dict[tuple, int] = {}

    def record(sub):
        masks = []
        for j, w in enumerate(sub):
            aw = adjsets[w]
            m = 0
            for i in range(j):
                if sub[i] in aw:
                    m |= 1 << i
            masks.append(m)
        key = tuple(masks)
        by_masks[key] = by_masks.get(key, 0) + 1

    def extend(sub, ext, closed, root):
        nonlocal total
        if len(sub) == k:
            record(sub)
            total += 1
            if total > cap:
                raise TooLargeError(f"more than {cap} connected {k}-subgraphs")
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            fresh = [u for u in adjsets[w] if u > root and u not in closed]
            sub.append(w)
            extend(sub, ext + fresh, closed | adjsets[w], root)
            sub.pop()

    for v in range(g.n):
        start_ext = [u for u in g.adj[v] if u > v]
        extend([v], start_ext, adjsets[v] | {v}, v)

    for masks, c in by_masks.items():
        tally[classify_masks(masks)[0]] += c
    return ExactCounts(k, tally, total)


def exact_count_subsets(g: Graph, k: int) -> ExactCounts:
    """Reference count: test every k-subset for connectivity, match by brute force."""
    types = graphlet_types(k)
    edge_sets = [set(map(frozenset, t.edges)) for t in types]
    tally = {t: 0 for t in types}
    total = 0
    for subset in combinations(range(g.n), k):
        sub = g.subgraph(subset)
        if not sub.is_connected():
            continue
        total += 1
        edges = [frozenset(e) for e in sub.edges]
        for t, es in zip(types, edge_sets):
            if len(es) != len(edges):
                continue
            if any(all(frozenset((p[a], p[b])) in es for a, b in map(tuple, edges))
                   for p in permutations(range(k))):
                tally[t] += 1
                break
        else:
            raise AssertionError(f"subset {subset} matched no graphlet type")
    return ExactCounts(k, tally, total)


@dataclass
class PiTable:
    """Exact lifting distribution for one graph, size and start distribution."""

    k: int
    sequences: dict[tuple[int, ...], object]
    cis: dict[frozenset, object]

    def type_of(self, g: Graph, vertices) -> GraphletType:
        from .catalog import classify

        return classify(InducedSubgraph.from_graph(g, sorted(vertices)))[0]


def enumerate_sequences(g: Graph, k: int, start: StartDistribution, exact: bool | None = None):
    """Probability of every ordered sequence reachable by lifting ``k`` vertices."""
    if g.n > ENUMERATION_LIMIT:
        raise TooLargeError(f"exhaustive enumeration is limited to {ENUMERATION_LIMIT} vertices")
    if exact is None:
        exact = g.n <= EXACT_LIMIT
    out: dict[tuple[int, ...], object] = {}
    deg = g.degree

    def grow(seq, members, prob, degsum, edges):
        if len(seq) == k:
            out[tuple(seq)] = out.get(tuple(seq), 0) + prob
            return
        boundary = degsum - 2 * edges
        attach: dict[int, int] = {}
        for v in seq:
            for u in g.adj[v]:
                if u not in members:
                    attach[u] = attach.get(u, 0) + 1
        for u, c in attach.items():
            seq.append(u)
            members.add(u)
            grow(seq, members, prob * c / boundary, degsum + deg[u], edges + c)
            members.discard(u)
            seq.pop()

    for v in range(g.n):
        p = start.exact_prob(deg[v]) if exact else start.prob(deg[v])
        if p:
            grow([v], {v}, p, deg[v], 0)
    return out


def enumerate_pi(g: Graph, k: int, start: StartDistribution, exact: bool | None = None,
                 tol: float = 1e-9) -> PiTable:
    """Exact sequence and subgraph distributions, checked to sum to one."""
    sequences = enumerate_sequences(g, k, start, exact)
    cis: dict[frozenset, object] = {}
    for seq, p in sequences.items():
        key = frozenset(seq)
        cis[key] = cis.get(key, 0) + p
    for name, table in (("sequence", sequences), ("subgraph", cis)):
        values = list(table.values())
        if values and isinstance(values[0], Fraction):
            if sum(values) != 1:
                raise AssertionError(f"{name} probabilities sum to {sum(values)}")
        elif abs(math.fsum(values) - 1.0) > tol:
            raise AssertionError(f"{name} probabilities sum to {math.fsum(values)!r}")
    return PiTable(k, sequences, cis)


class ScriptedRNG:
    """Replays a fixed list of ``randrange`` outcomes, recording branch widths."""

    def __init__(self, script):
        self.script = list(script)
        self.widths: list[int] = []

    def randrange(self, n):
        i = len(self.widths)
        self.widths.append(n)
        if i == len(self.script):
            self.script.append(0)
        return self.script[i]

    def random(self):
        raise RuntimeError("scripted generator only supports randrange")


def all_branches(run):
    """Call ``run(rng)`` once per distinct outcome path; yield ``(result, probability)``."""
    script: list[int] = []
    while True:
        rng = ScriptedRNG(script)
        result = run(rng)
        widths = rng.widths
        prob = Fraction(1)
        for w in widths:
            prob /= w
        yield result, prob
        script = rng.script[: len(widths)]
        while script and script[-1] + 1 >= widths[len(script) - 1]:
            script.pop()
        if not script:
            return
        script[-1] += 1


def conditional_moments(g: Graph, k: int, start: StartDistribution, estimator: str):
    """Exact ``E[phi | v_1 = v]`` and ``E[phi^2 | v_1 = v]`` for every type and start vertex.

    Uses the estimator's own lifting and weighting code in exact arithmetic.
    Returns ``{type: (first, second)}`` with per-vertex lists of Fractions.
    """
    if g.n > ENUMERATION_LIMIT:
        raise TooLargeError(f"exhaustive enumeration is limited to {ENUMERATION_LIMIT} vertices")
    types = graphlet_types(k)
    size = k - 1 if estimator == "shotgun" else k
    functions = {t: build_degree_function(t, start) for t in types}
    first = {t: [Fraction(0)] * g.n for t in types}
    second = {t: [Fraction(0)] * g.n for t in types}
    for v in range(g.n):
        if not start.weight(g.degree[v]):
            continue

        def run(rng):
            s = _lift(g, v, size, start, rng, None, exact=True)
            if estimator == "ordered":
                return ordered_phi(s)
            if estimator == "shotgun":
                return shotgun_phi(s)
            return unordered_phi(s, functions, start.K, exact=True)

        for phis, prob in all_branches(run):
            for t, phi in phis.items():
                first[t][v] += prob * phi
                second[t][v] += prob * phi * phi
    return {t: (first[t], second[t]) for t in types}


def exact_moments(g: Graph, k: int, start: StartDistribution, estimator: str):
    """Exact ``(E phi, E phi^2)`` per type under a stationary start."""
    cond = conditional_moments(g, k, start, estimator)
    out = {}
    for t, (first, second) in cond.items():
        m1 = sum((start.exact_prob(g.degree[v]) * first[v] for v in range(g.n)), Fraction(0))
        m2 = sum((start.exact_prob(g.degree[v]) * second[v] for v in range(g.n)), Fraction(0))
        out[t] = (m1, m2)
    return out


def exact_independent_variance(g: Graph, target: GraphletType, start: StartDistribution,
                               counts: ExactCounts | None = None):
    """``sum_T 1(T ~ H) / pi_U(T) - N^2`` for the unordered estimator."""
    table = enumerate_pi(g, target.k, start)
    total = 0
    for vs, p in table.cis.items():
        if table.type_of(g, vs) == target:
            total += 1 / p
    n_m = (counts or exact_count(g, target.k)).counts[target]
    return total - n_m * n_m


def transition_matrix(g: Graph, lazy: bool = False) -> np.ndarray:
    """Row-stochastic simple random walk matrix."""
    P = np.zeros((g.n, g.n))
    for v, nb in enumerate(g.adj):
        P[v, list(nb)] = 1.0 / len(nb)
    if lazy:
        P = 0.5 * (P + np.eye(g.n))
    return P
