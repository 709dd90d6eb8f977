import random
from fractions import Fraction

import numpy as np
import pytest

from graphlift import (
    QueryCounter,
    StartDistribution,
    estimate,
    get_type,
    ordered_estimate,
    samples_for_budget,
    shotgun_estimate,
    unordered_estimate,
)
from graphlift.exceptions import CannotExtendError
from graphlift.generators import complete_graph, cycle_graph, diamond_graph, path_graph, star_graph
from graphlift.lifting import begin_lift, lift_once, queries_per_sample, sample_ordered_sequence
from graphlift.oracle import ScriptedRNG, all_branches, enumerate_sequences


def test_k3_lift_multipliers():
    g = complete_graph(3)
    s = begin_lift(g, 0, prob=Fraction(1))
    lift_once(g, s, ScriptedRNG([0, 0]))
    assert s.prob == Fraction(1, 2)
    lift_once(g, s, ScriptedRNG([0]))
    assert s.prob == Fraction(1, 2)


def test_star_first_lift_from_center():
    g = star_graph(3)
    s = begin_lift(g, 0, prob=Fraction(1))
    lift_once(g, s, ScriptedRNG([1]))
    assert s.prob == Fraction(1, 3)
    assert s.vertices == [0, 2]


def test_diamond_apex_counts_multiple_edges():
    g = diamond_graph()
    s = begin_lift(g, 1, prob=Fraction(1))
    lift_once(g, s, ScriptedRNG([list(g.adj[1]).index(2)]))
    # boundary of {1, 2}: 1-0, 1-3, 2-0, 2-3, so vertex 0 has two of four edges
    branch = [i for i, (_, u) in enumerate(s.boundary) if u == 0][0]
    lift_once(g, s, ScriptedRNG([branch]))
    assert s.prob == Fraction(1, 3) * Fraction(2, 4)


def test_sequence_probabilities_on_k3_rw():
    g = complete_graph(3)
    seqs = enumerate_sequences(g, 3, StartDistribution.rw(g), exact=True)
    assert len(seqs) == 6
    assert set(seqs.values()) == {Fraction(1, 6)}


def test_star_sequence_uniform_start():
    g = star_graph(3)
    seqs = enumerate_sequences(g, 3, StartDistribution.uniform(g), exact=True)
    assert seqs[(0, 1, 2)] == Fraction(1, 24)


def test_scripted_branches_cover_the_lift(small_random):
    """Branch weights from the scripted generator agree with the lift's own probability."""
    g = small_random
    start = StartDistribution.uniform(g)
    total = Fraction(0)
    for v in range(g.n):
        p1 = start.exact_prob(g.degree[v])

        def run(rng):
            s = begin_lift(g, v, prob=p1)
            for _ in range(3):
                lift_once(g, s, rng)
            return s.prob

        for seq_prob, branch_prob in all_branches(run):
            assert seq_prob >= p1 * branch_prob  # equal unless a vertex attaches by several edges
            total += p1 * branch_prob
    assert total == 1


def test_cannot_lift_beyond_graph():
    g = path_graph(2)
    with pytest.raises(CannotExtendError):
        sample_ordered_sequence(g, 3, StartDistribution.uniform(g), 0)


def test_sample_ordered_sequence_queries():
    g = complete_graph(5)
    c = QueryCounter()
    seq, p = sample_ordered_sequence(g, 4, StartDistribution.uniform(g), 1, c)
    assert len(set(seq)) == 4
    assert c.count == 4
    assert p == pytest.approx(1 / 5 * 1 / 4 * 1 / 3 * 1 / 2)


@pytest.mark.parametrize("estimator", ["ordered", "shotgun", "unordered"])
def test_k4_triangles(estimator):
    g = complete_graph(4)
    run = estimate(g, 3, estimator, StartDistribution.rw(g), 2000, seed=0)[get_type("triangle")]
    assert run.estimate == pytest.approx(4.0)


def test_unordered_k3_constant_weight():
    g = complete_graph(3)
    run = unordered_estimate(g, ["triangle"], 100, StartDistribution.uniform(g), rng=2)[get_type("triangle")]
    assert np.all(run.phi == 1.0)
    assert run.estimate == 1.0


def test_absent_type_is_exactly_zero():
    g = cycle_graph(6)
    run = ordered_estimate(g, "5-clique", 500, StartDistribution.uniform(g), rng=0)
    assert run.estimate == 0.0
    assert not run.phi.any()


def test_single_target_wrappers_accept_generator():
    g = complete_graph(4)
    run = shotgun_estimate(g, "triangle", 50, StartDistribution.uniform(g), rng=random.Random(3))
    assert run.n == 50
    with pytest.raises(ValueError):
        shotgun_estimate(g, "edge", 10, StartDistribution.uniform(g))


def test_same_seed_same_stream(small_random):
    g = small_random
    a = estimate(g, 4, "unordered", StartDistribution.rw(g), 300, seed=11)
    b = estimate(g, 4, "unordered", StartDistribution.rw(g), 300, seed=11)
    for t in a:
        assert np.array_equal(a[t].phi, b[t].phi)


def test_chains_split_samples_and_queries(small_random):
    g = small_random
    start = StartDistribution.rw(g, burn_in=10, spacing=2)
    runs = estimate(g, 3, "ordered", start, 101, seed=4, n_chains=3)
    run = next(iter(runs.values()))
    assert run.n == 101 and run.chains == 3
    assert run.queries == 3 * 10 + 101 * (2 + 3)


def test_parallel_chains_match_serial(small_random):
    g = small_random
    start = StartDistribution.uniform(g)
    serial = estimate(g, 3, "unordered", start, 400, seed=9, n_chains=2, n_jobs=1)
    parallel = estimate(g, 3, "unordered", start, 400, seed=9, n_chains=2, n_jobs=2)
    for t in serial:
        assert np.array_equal(serial[t].phi, parallel[t].phi)


@pytest.mark.parametrize("estimator,per", [("ordered", 3 + 4), ("unordered", 3 + 4), ("shotgun", 3 + 3)])
def test_query_formula(estimator, per, small_random):
    g = small_random
    start = StartDistribution.rw(g, burn_in=100, spacing=3)
    assert queries_per_sample(4, estimator, start) == per
    run = next(iter(estimate(g, 4, estimator, start, 250, seed=1).values()))
    assert run.queries == 100 + 250 * per


def test_budget():
    g = complete_graph(5)
    start = StartDistribution.rw(g, burn_in=100, spacing=3)
    assert samples_for_budget(3, "unordered", start, 100 + 6 * 10 + 5) == 10
    with pytest.raises(ValueError):
        samples_for_budget(3, "unordered", start, 105)


def test_zero_weight_start_rejected_for_ordered():
    g = star_graph(3)
    start = StartDistribution.degree_polynomial(g, "d*(d-1)")
    with pytest.raises(ValueError):
        estimate(g, 3, "ordered", start, 10, seed=0)
    run = estimate(g, 3, "unordered", start, 50, seed=0)[get_type("wedge")]
    assert run.estimate == pytest.approx(3.0)


def test_unknown_estimator():
    g = complete_graph(4)
    with pytest.raises(ValueError):
        estimate(g, 3, "waddle", StartDistribution.uniform(g), 10)
