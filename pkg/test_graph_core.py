import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import GraphFormatError
from src.generators import generate
from src.graph_core import (INF, Graph, bfs_layers, dist, distance_to_json, distances_from, emit_edge_list,
                            emit_graph6, girth, induced_path_order, is_induced_cycle, is_induced_path,
                            is_triangle_free, neighborhood, parse_edge_list, parse_graph6, read_graph6_lines)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [pair for pair, keep in zip(pairs, chosen) if keep])


def test_parse_graph6_empty_graph():
    g = parse_graph6("D??")
    assert g.n == 5 and g.m == 0


def test_parse_graph6_single_vertex():
    g = parse_graph6("@")
    assert g.n == 1 and g.m == 0
    assert emit_graph6(g) == "@"


def test_emit_graph6_empty_graph():
    assert emit_graph6(Graph(5)) == "D??"


def test_c5_graph6_bytes():
    c5 = generate("cycle:5")
    assert emit_graph6(c5) == "Dhc"
    assert emit_graph6(c5) == nx.to_graph6_bytes(nx.cycle_graph(5), header=False).decode().strip()
    assert parse_graph6("Dhc") == c5


def test_graph6_header_is_stripped():
    assert parse_graph6(">>graph6<<Dhc") == generate("cycle:5")


@pytest.mark.parametrize("family", ["petersen", "grotzsch", "cycle:12", "kneser:6:2", "shift:7", "empty:0",
                                    "rtf:n=40:seed=3"])
def test_graph6_round_trip(family):
    g = generate(family)
    assert parse_graph6(emit_graph6(g)) == g


@pytest.mark.parametrize("text", ["D?", "D?@", ":Fa@x^", "D\x1f?", ""])
def test_parse_graph6_rejects_malformed(text):
    with pytest.raises(GraphFormatError):
        parse_graph6(text)


def test_read_graph6_lines_reports_line_number():
    graphs_read = list(read_graph6_lines(["Dhc", "", "@"]))
    assert [lineno for lineno, _ in graphs_read] == [1, 3]
    with pytest.raises(GraphFormatError, match="line 2"):
        list(read_graph6_lines(["Dhc", "D?"]))


def test_parse_edge_list():
    k3 = parse_edge_list("0 1\n1 2\n2 0")
    assert k3.n == 3 and k3.m == 3
    assert not is_triangle_free(k3)
    assert parse_edge_list("n 3").n == 3
    assert parse_edge_list("# comment\n0 1\n0 1\n").m == 1
    c9 = parse_edge_list("\n".join(f"{i} {(i + 1) % 9}" for i in range(9)))
    assert c9 == generate("cycle:9")


@pytest.mark.parametrize("text", ["0 0", "-1 2", "n 2\n0 5", "0 x", "0 1 2"])
def test_parse_edge_list_rejects(text):
    with pytest.raises(GraphFormatError):
        parse_edge_list(text)


def test_edge_list_round_trip():
    g = generate("petersen")
    assert parse_edge_list(emit_edge_list(g)) == g


def test_graph_is_immutable():
    g = Graph(2, [(0, 1)])
    with pytest.raises(AttributeError):
        g.foo = 1
    with pytest.raises(GraphFormatError):
        Graph(2, [(0, 2)])
    with pytest.raises(GraphFormatError):
        Graph(2, [(1, 1)])


def test_neighborhood(c9, petersen):
    assert neighborhood(c9, 0, 2) == {2, 7}
    assert neighborhood(c9, 4, 0, closed=True) == {4}
    assert neighborhood(petersen, 3, 2, closed=True) == set(range(10))
    with pytest.raises(GraphFormatError):
        neighborhood(c9, 9, 1)


def test_dist(c9):
    assert dist(c9, 0, 4) == 4
    assert dist(c9, 3, 3) == 0
    two = Graph(2)
    assert dist(two, 0, 1) is INF
    assert distance_to_json(dist(two, 0, 1)) == "inf"
    assert INF > 10 ** 9


def test_bfs_layers(c9):
    assert [len(layer) for layer in bfs_layers(c9, 0)] == [1, 2, 2, 2, 2]
    assert bfs_layers(c9, 0)[-1] == {4, 5}


@pytest.mark.parametrize("family,expected", [("cycle:5", 5), ("petersen", 5), ("complete:3", 3),
                                             ("complete_bipartite:3:3", 4), ("grotzsch", 4), ("cycle:11", 11)])
def test_girth(family, expected):
    assert girth(generate(family)) == expected


def test_girth_of_forest_is_infinite():
    assert girth(generate("path:6")) is INF
    assert girth(Graph(0)) is INF


def test_induced_checks(c5):
    assert is_induced_cycle(c5, (0, 1, 2, 3, 4))
    assert not is_induced_cycle(c5, (0, 1, 2))
    assert not is_induced_cycle(c5, (0, 1, 2, 3, 4, 0))
    assert is_induced_path(c5, (0, 1, 2))
    assert not is_induced_path(c5, (0, 1, 2, 3, 4))
    assert not is_induced_path(c5, (0, 1, 0))


def test_induced_path_order():
    p4 = generate("path:4")
    assert induced_path_order(p4, {0, 1, 2, 3}) == (0, 1, 2, 3)
    assert induced_path_order(p4, {0, 1, 2, 3}, start=3) == (3, 2, 1, 0)
    assert induced_path_order(p4, {0, 1, 2, 3}, start=1) is None
    assert induced_path_order(generate("cycle:4"), {0, 1, 2, 3}) is None


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_distances_match_networkx(g):
    G = g.to_networkx()
    for v in g.vertices():
        reference = nx.single_source_shortest_path_length(G, v)
        ours = distances_from(g, v)
        assert {u: d for u, d in enumerate(ours) if d is not INF} == reference


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_distance_axioms(g):
    for u in g.vertices():
        du = distances_from(g, u)
        assert du[u] == 0
        for v in g.vertices():
            assert du[v] == distances_from(g, v)[u]
            if v != u and du[v] is not INF:
                assert du[v] > 0


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_graph6_round_trip_property(g):
    assert parse_graph6(emit_graph6(g)) == g
