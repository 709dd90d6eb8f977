import gzip
import io

import pytest

from graphlift import Graph, QueryCounter, largest_component, load_edge_list, neighbors
from graphlift.datasets import load_graph
from graphlift.exceptions import EmptyGraphError, GraphFormatError
from graphlift.graph import connected_components


def test_neighbors_are_sorted_and_counted():
    g = Graph.from_edges([(0, 2), (0, 1), (2, 3)])
    c = QueryCounter()
    assert neighbors(g, 0, c) == (1, 2)
    assert g.neighbors(2, c) == (0, 3)
    assert c.count == 2
    c.reset()
    assert c.count == 0


def test_neighbors_out_of_range():
    g = Graph.from_edges([(0, 1)])
    with pytest.raises(IndexError):
        g.neighbors(5)


def test_graph_rejects_loops_and_asymmetry():
    with pytest.raises(ValueError):
        Graph([[0]])
    with pytest.raises(ValueError):
        Graph([[1], []])


def test_from_edges_drops_loops_and_duplicates():
    g = Graph.from_edges([(0, 1), (1, 0), (1, 1), (1, 2)])
    assert g.m == 2
    assert g.degree == (1, 2, 1)


def test_plain_edge_list_compacts_ids():
    text = b"# comment\n10 20\n20 30\n30 10\n30 30\n"
    g = load_edge_list(io.BytesIO(text))
    assert (g.n, g.m) == (3, 3)
    assert g.labels == (10, 20, 30)


def test_mtx_header_is_skipped():
    text = b"%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n1 2\n2 3\n"
    g = load_edge_list(io.BytesIO(text), "mtx")
    assert (g.n, g.m) == (3, 2)


def test_weighted_edge_lines_are_accepted():
    g = load_edge_list(io.BytesIO(b"1 2 0.5\n2 3 1.0\n"))
    assert g.m == 2


def test_bad_line_reports_line_number():
    with pytest.raises(GraphFormatError) as err:
        load_edge_list(io.BytesIO(b"1 2\nfoo bar\n"))
    assert err.value.lineno == 2


def test_empty_graph():
    with pytest.raises(EmptyGraphError):
        load_edge_list(io.BytesIO(b"% nothing\n"))


def test_largest_component():
    g = Graph.from_edges([(0, 1), (2, 3), (3, 4), (4, 2)])
    comps = connected_components(g)
    assert sorted(map(len, comps)) == [2, 3]
    big = largest_component(g)
    assert (big.n, big.m) == (3, 3)
    assert set(big.labels) == {2, 3, 4}


def test_load_graph_from_gzip(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wb") as fh:
        fh.write(b"0 1\n1 2\n5 6\n")
    g = load_graph(p)
    assert (g.n, g.m) == (3, 2)
    assert load_graph(p, connected=False).n == 5


def test_subgraph_is_induced(k4):
    s = k4.subgraph([0, 2, 3])
    assert s.m == 3
    assert s.is_connected()
