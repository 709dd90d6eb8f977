"""The lifting procedure and the ordered, shotgun and unordered lift estimators."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .catalog import (
    GraphletType,
    build_degree_function,
    classify_masks,
    get_type,
    graphlet_types,
)
from .exceptions import CannotExtendError
from .graph import Graph, QueryCounter, connected_components
from .runs import EstimateRun
from .start import StartDistribution, StartSampler, sample_start

ESTIMATORS = ("ordered", "shotgun", "unordered")

__all__ = [
    "ESTIMATORS",
    "LiftState",
    "StartDistribution",
    "StartSampler",
    "sample_start",
    "begin_lift",
    "lift_once",
    "sample_ordered_sequence",
    "ordered_phi",
    "shotgun_phi",
    "unordered_phi",
    "check_start_support",
    "queries_per_sample",
    "samples_for_budget",
    "estimate",
    "ordered_estimate",
    "shotgun_estimate",
    "unordered_estimate",
]


class LiftState:
    """A connected induced subgraph grown by lifting.

    ``masks[r]`` has bit ``i`` set when the ``r``-th vertex is adjacent to
    the ``i``-th.  ``boundary`` is the edge neighbourhood as a flat list of
    ``(inside position, outside vertex)`` pairs, so an outside vertex with
    several edges into the subgraph appears several times.  ``prob`` is the
    probability of the ordered sequence drawn so far.
    """

    __slots__ = ("vertices", "pos", "masks", "degrees", "boundary", "edges", "prob", "queries")

    def __init__(self, vertices, pos, masks, degrees, boundary, edges, prob, queries):
        self.vertices = vertices
        self.pos = pos
        self.masks = masks
        self.degrees = degrees
        self.boundary = boundary
        self.edges = edges
        self.prob = prob
        self.queries = queries

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"LiftState(vertices={self.vertices}, prob={self.prob})"


def begin_lift(g: Graph, v: int, counter: QueryCounter | None = None, prob=1.0) -> LiftState:
    """Seed a lift at ``v`` (one query); ``prob`` is the start probability of ``v``."""
    nb = g.neighbors(v, counter)
    return LiftState([v], {v: 0}, [0], [len(nb)], [(0, w) for w in nb], 0, prob, 1)


def lift_once(g: Graph, s: LiftState, rng, counter: QueryCounter | None = None) -> LiftState:
    """Attach the outside end of a uniformly chosen boundary edge, in place."""
    boundary = s.boundary
    size = len(boundary)
    if not size:
        raise CannotExtendError(f"no boundary edges left after {len(s.vertices)} vertices")
    u = boundary[rng.randrange(size)][1]
    mask = 0
    hits = 0
    kept = []
    for pair in boundary:
        if pair[1] == u:
            mask |= 1 << pair[0]
            hits += 1
        else:
            kept.append(pair)
    s.prob = s.prob * hits / size
    r = len(s.vertices)
    nb = g.neighbors(u, counter)
    pos = s.pos
    for w in nb:
        if w not in pos:
            kept.append((r, w))
    pos[u] = r
    s.vertices.append(u)
    s.masks.append(mask)
    s.degrees.append(len(nb))
    s.boundary = kept
    s.edges += hits
    s.queries += 1
    return s


def _lift(g, v, size, start, rng, counter, exact=False) -> LiftState:
    d = g.degree[v]
    prob = start.exact_prob(d) if exact else start.prob(d)
    s = begin_lift(g, v, counter, prob)
    for _ in range(size - 1):
        lift_once(g, s, rng, counter)
    return s


def sample_ordered_sequence(g: Graph, k: int, start: StartDistribution, rng,
                            counter: QueryCounter | None = None,
                            sampler: StartSampler | None = None):
    """Draw ``[v_1..v_k]`` by lifting; returns the list and its probability."""
    if k > g.n:
        raise CannotExtendError(f"graph has {g.n} vertices, cannot lift to {k}")
    rng = _as_rng(rng)
    v = sample_start(g, start, rng, counter, sampler)
    s = _lift(g, v, k, start, rng, counter)
    return list(s.vertices), s.prob


def ordered_phi(s: LiftState) -> dict[GraphletType, object]:
    """Weight ``1 / (|co(H)| * prob(A))`` credited to the type of the sampled sequence."""
    t, _ = classify_masks(tuple(s.masks))
    return {t: 1 / (t.co_count * s.prob)}


def shotgun_phi(s: LiftState) -> dict[GraphletType, object]:
    """Weights for every one-vertex extension of the sampled ``(k-1)``-sequence."""
    attach: dict[int, int] = {}
    for i, u in s.boundary:
        attach[u] = attach.get(u, 0) | (1 << i)
    base = tuple(s.masks)
    counts: dict[GraphletType, int] = {}
    for mask in attach.values():
        t, _ = classify_masks(base + (mask,))
        counts[t] = counts.get(t, 0) + 1
    return {t: c / (t.co_count * s.prob) for t, c in counts.items()}


def unordered_phi(s: LiftState, functions, K: int, exact: bool = False) -> dict[GraphletType, object]:
    """Weight ``K / F_m(d)`` with degrees taken in canonical vertex order."""
    t, order = classify_masks(tuple(s.masks))
    degrees = tuple(s.degrees[i] for i in order)
    f = functions[t]
    if exact:
        return {t: Fraction(K) / f.exact(degrees)}
    return {t: K / f(degrees)}


def queries_per_sample(k: int, estimator: str, start: StartDistribution) -> int:
    """Neighbourhood queries per sample, excluding the one-time burn-in."""
    _check_estimator(estimator)
    lifted = k - 1 if estimator == "shotgun" else k
    return start.walk_steps + lifted


def samples_for_budget(k: int, estimator: str, start: StartDistribution, budget: int) -> int:
    """Largest sample count whose total query cost fits ``budget``."""
    fixed = start.burn_in if start.kind == "rw" else 0
    per = queries_per_sample(k, estimator, start)
    n = (budget - fixed) // per
    if n < 1:
        raise ValueError(
            f"query budget {budget} is below the cost of one sample ({fixed} + {per})"
        )
    return n


def check_start_support(g: Graph, start: StartDistribution, k: int, estimator: str) -> None:
    """Reject start distributions under which the estimator would be biased.

    Ordered and shotgun weights assume every compatible ordering can occur,
    so every vertex needs positive start weight.  The unordered estimator
    only needs each k-subgraph to contain one positive-weight vertex.
    """
    zero = [v for v in range(g.n) if not start.weight(g.degree[v])]
    if not zero:
        return
    if estimator != "unordered":
        raise ValueError(
            f"{estimator} estimator needs positive start weight on every vertex; "
            f"{len(zero)} vertices have weight 0 under {start.label}"
        )
    if any(len(c) >= k for c in connected_components(g.subgraph(zero))):
        raise ValueError(f"some {k}-subgraphs are unreachable under {start.label}")


def _check_estimator(estimator):
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}; choose from {ESTIMATORS}")


def _as_rng(rng):
    if isinstance(rng, random.Random):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return chain_rng(rng, 0, 1)
    raise TypeError(f"expected a seed or random.Random, got {type(rng).__name__}")


def chain_rng(seed, worker: int, n_workers: int) -> random.Random:
    """Independent generator for chain ``worker`` of ``n_workers`` derived from ``seed``."""
    child = np.random.SeedSequence(seed).spawn(n_workers)[worker]
    return random.Random(int.from_bytes(child.generate_state(4).tobytes(), "little"))


def _run_chain(g, k, estimator, start, n, rng, keep_stream):
    """One chain of ``n`` samples; returns per-type sparse streams and the query count."""
    counter = QueryCounter()
    sampler = StartSampler(g, start, rng, counter)
    types = graphlet_types(k)
    size = k - 1 if estimator == "shotgun" else k
    if size > g.n:
        raise CannotExtendError(f"graph has {g.n} vertices, cannot lift to {size}")
    functions = {t: build_degree_function(t, start) for t in types} if estimator == "unordered" else None
    K = start.K
    prob = start.prob
    degree = g.degree
    idx = {t: [] for t in types}
    val = {t: [] for t in types}
    for i in range(n):
        v = sampler()
        s = begin_lift(g, v, counter, prob(degree[v]))
        for _ in range(size - 1):
            lift_once(g, s, rng, counter)
        if estimator == "ordered":
            phis = ordered_phi(s)
        elif estimator == "shotgun":
            phis = shotgun_phi(s)
        else:
            phis = unordered_phi(s, functions, K)
        for t, phi in phis.items():
            idx[t].append(i)
            val[t].append(phi)
    return idx, val, counter.count


def _chain_job(args):
    g, k, estimator, start, n, seed, worker, n_workers, keep_stream = args
    rng = chain_rng(seed, worker, n_workers)
    return _run_chain(g, k, estimator, start, n, rng, keep_stream)


def estimate(g: Graph, k: int, estimator: str, start: StartDistribution, n: int,
             seed=None, targets=None, n_chains: int = 1, n_jobs: int = 1,
             keep_stream: bool = True, rng: random.Random | None = None) -> dict[GraphletType, EstimateRun]:
    """Run one of the lift estimators and tally every size-``k`` graphlet type.

    Samples are split over ``n_chains`` independent chains, each with its
    own start sampler, generator stream and query counter; ``n_jobs > 1``
    runs the chains in worker processes.  With ``targets`` only those types
    are returned.  Passing ``rng`` runs a single chain on that generator.
    """
    _check_estimator(estimator)
    if n < 1:
        raise ValueError("need at least one sample")
    check_start_support(g, start, k, estimator)
    if rng is not None and n_chains != 1:
        raise ValueError("an explicit rng drives exactly one chain")
    if targets is None:
        wanted = list(graphlet_types(k))
    else:
        wanted = [get_type(t, k) for t in targets]

    shares = [n // n_chains + (w < n % n_chains) for w in range(n_chains)]
    if rng is not None:
        results = [_run_chain(g, k, estimator, start, n, rng, keep_stream)]
    else:
        jobs = [(g, k, estimator, start, shares[w], seed, w, n_chains, keep_stream)
                for w in range(n_chains)]
        if n_jobs > 1 and n_chains > 1:
            with ProcessPoolExecutor(max_workers=n_jobs) as pool:
                results = list(pool.map(_chain_job, jobs))
        else:
            results = [_chain_job(job) for job in jobs]

    config = {
        "k": k,
        "estimator": estimator,
        "start": start.label,
        "spacing": start.walk_steps,
        "burn_in": start.burn_in if start.kind == "rw" else 0,
        "lazy": start.lazy,
        "seed": seed,
        "n": n,
        "chains": len(results),
    }
    out = {}
    for t in wanted:
        runs = []
        for (idx, val, queries), share in zip(results, shares):
            phi = np.zeros(share)
            phi[idx[t]] = val[t]
            run = EstimateRun.from_stream(t, estimator, phi, queries, config)
            if not keep_stream:
                run.phi = None
            runs.append(run)
        merged = EstimateRun.merge(runs) if len(runs) > 1 else runs[0]
        out[t] = merged
    return out


def ordered_estimate(g: Graph, target, n: int, start: StartDistribution, rng=None, **kw) -> EstimateRun:
    t = get_type(target)
    return _single(g, t, "ordered", n, start, rng, kw)


def shotgun_estimate(g: Graph, target, n: int, start: StartDistribution, rng=None, **kw) -> EstimateRun:
    t = get_type(target)
    if t.k < 3:
        raise ValueError("shotgun sampling needs k >= 3")
    return _single(g, t, "shotgun", n, start, rng, kw)


def unordered_estimate(g: Graph, targets, n: int, start: StartDistribution, rng=None,
                       **kw) -> dict[GraphletType, EstimateRun]:
    """All requested types of one size, estimated from a single stream."""
    if isinstance(targets, (str, GraphletType)):
        targets = [targets]
    types = [get_type(t) for t in targets]
    ks = {t.k for t in types}
    if len(ks) != 1:
        raise ValueError("unordered targets must share one graphlet size")
    return _dispatch(g, ks.pop(), "unordered", n, start, rng, types, kw)


def _single(g, t, estimator, n, start, rng, kw):
    return _dispatch(g, t.k, estimator, n, start, rng, [t], kw)[t]


def _dispatch(g, k, estimator, n, start, rng, targets, kw):
    if isinstance(rng, random.Random):
        return estimate(g, k, estimator, start, n, targets=targets, rng=rng, **kw)
    return estimate(g, k, estimator, start, n, seed=rng, targets=targets, **kw)
