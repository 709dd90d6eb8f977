import random
from collections import Counter
from fractions import Fraction

import pytest

from graphlift import QueryCounter, StartDistribution
from graphlift.generators import complete_graph, path_graph, star_graph
from graphlift.start import DegreePolynomial, StartSampler


@pytest.mark.parametrize("expr,values", [
    ("d*(d-1)", {0: 0, 1: 0, 2: 2, 5: 20}),
    ("d**2 + 3", {0: 3, 2: 7}),
    ("-(d - 4)", {1: 3}),
    ("7", {9: 7}),
])
def test_degree_polynomial(expr, values):
    f = DegreePolynomial(expr)
    for d, v in values.items():
        assert f(d) == v


@pytest.mark.parametrize("bad", ["d/2", "x+1", "d**-1", "import os", "d**d", "1.5*d"])
def test_degree_polynomial_rejects(bad):
    with pytest.raises(ValueError):
        DegreePolynomial(bad)


def test_from_spec_and_normalizers():
    g = path_graph(3)
    assert StartDistribution.from_spec(g, "uniform").K == 3
    rw = StartDistribution.from_spec(g, "rw", spacing=5)
    assert (rw.K, rw.walk_steps) == (4, 5)
    poly = StartDistribution.from_spec(g, "degree-poly:d*(d-1)")
    assert poly.K == 2
    assert poly.exact_prob(2) == 1
    assert poly.label == "degree-poly:d*(d-1)"
    with pytest.raises(ValueError):
        StartDistribution.from_spec(g, "zipf")
    with pytest.raises(ValueError):
        StartDistribution.degree_polynomial(g, "d - 5")


def test_uniform_start_on_k4_is_uniform():
    g = complete_graph(4)
    sampler = StartSampler(g, StartDistribution.uniform(g), random.Random(1))
    freq = Counter(sampler() for _ in range(40000))
    chi2 = sum((c - 10000) ** 2 / 10000 for c in freq.values())
    assert chi2 < 16.27  # 3 dof, p = 0.001


def test_rw_frequency_matches_degree_on_path():
    g = path_graph(3)
    sampler = StartSampler(g, StartDistribution.rw(g, spacing=1), random.Random(3))
    draws = [sampler() for _ in range(40000)]
    assert abs(draws.count(1) / len(draws) - 0.5) < 0.02


def test_degree_polynomial_star_center_only():
    g = star_graph(3)
    start = StartDistribution.degree_polynomial(g, "d*(d-1)")
    sampler = StartSampler(g, start, random.Random(0))
    assert {sampler() for _ in range(200)} == {0}
    assert start.exact_prob(3) == Fraction(1)


def test_rw_queries_burn_in_and_spacing():
    g = complete_graph(5)
    c = QueryCounter()
    sampler = StartSampler(g, StartDistribution.rw(g, burn_in=7, spacing=2), random.Random(0), c)
    assert c.count == 7
    for _ in range(10):
        sampler()
    assert c.count == 27


def test_lazy_walk_charges_every_step():
    g = complete_graph(5)
    c = QueryCounter()
    sampler = StartSampler(g, StartDistribution.rw(g, burn_in=0, spacing=4, lazy=True), random.Random(0), c)
    sampler()
    assert c.count == 4


def test_independent_starts_cost_nothing():
    g = complete_graph(5)
    for start in (StartDistribution.uniform(g), StartDistribution.degree_polynomial(g, "d")):
        c = QueryCounter()
        sampler = StartSampler(g, start, random.Random(0), c)
        for _ in range(5):
            sampler()
        assert c.count == 0
