import networkx as nx
import pytest

from src.chroma import chromatic_number
from src.generators import (FamilySpec, canonical_cable, canonical_extended_trellis, canonical_multicover,
                            canonical_shower_fixture, corpus, generate, kneser, random_triangle_free, shift_graph)
from src.graph_core import girth, is_triangle_free


@pytest.mark.parametrize("text,n,m", [
    ("cycle:7", 7, 7),
    ("path:4", 4, 3),
    ("complete:5", 5, 10),
    ("empty:3", 3, 0),
    ("kb:2:3", 5, 6),
    ("petersen", 10, 15),
    ("groetzsch", 11, 20),
    ("mycielski:complete:2", 5, 5),
    ("mycielski:mycielski:mycielski:complete:2", 23, 71),
    ("kneser:5:2", 10, 15),
    ("shift:5", 10, 10),
])
def test_family_sizes(text, n, m):
    g = generate(text)
    assert (g.n, g.m) == (n, m)


def test_kneser_5_2_is_petersen():
    assert nx.is_isomorphic(kneser(5, 2).to_networkx(), nx.petersen_graph())


def test_shift_graph_is_triangle_free():
    g = shift_graph(7)
    assert is_triangle_free(g)
    assert chromatic_number(g) == 3


def test_family_spec_round_trip():
    for text in ["cycle:5", "kneser:6:2", "mycielski:mycielski:cycle:5", "rtf:n=30:seed=7:m=60"]:
        spec = FamilySpec.parse(text)
        assert FamilySpec.parse(str(spec)) == spec
    assert str(FamilySpec.parse("rtf:n=12")) == "rtf:n=12:seed=0"
    assert FamilySpec.parse("Petersen").family == "petersen"


@pytest.mark.parametrize("text", ["", "hypercube:3", "cycle", "cycle:5:6", "cycle:x", "mycielski", "rtf:seed=1",
                                  "rtf:n=5:p=3"])
def test_family_spec_rejects(text):
    with pytest.raises(ValueError):
        FamilySpec.parse(text)


@pytest.mark.parametrize("text", ["cycle:2", "kneser:3:2", "shift:1", "path:0"])
def test_generate_rejects_bad_parameters(text):
    with pytest.raises(ValueError):
        generate(text)


def test_random_triangle_free_is_seeded():
    a = random_triangle_free(25, seed=3)
    b = random_triangle_free(25, seed=3)
    assert a == b
    assert is_triangle_free(a)
    assert random_triangle_free(25, seed=4) != a
    assert random_triangle_free(25, seed=3, max_edges=10).m == 10


def test_random_triangle_free_is_maximal():
    g = random_triangle_free(15, seed=9)
    for u in g.vertices():
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                assert g.masks[u] & g.masks[v]


def test_corpus_contents():
    graphs = corpus(random_count=5, random_max_n=12)
    names = [name for name, _ in graphs]
    assert names[:9] == [f"cycle:{n}" for n in range(4, 13)]
    assert "petersen" in names and "grotzsch" in names
    assert len(names) == len(set(names)) == 21
    for name, g in graphs:
        if name != "complete_bipartite:3:3":
            assert is_triangle_free(g), name
    assert all(5 <= g.n <= 12 for name, g in graphs if name.startswith("rtf"))


def test_corpus_mycielski_chain():
    chain = dict(corpus(random_count=0))
    assert chromatic_number(chain["mycielski:complete:2"]) == 3
    assert girth(chain["grotzsch"]) == 4


def test_canonical_fixture_sizes():
    g, c = canonical_cable(3, cable_type=2, base_size=2)
    assert g.n == 3 + 2 + 6 + 3
    g, M = canonical_multicover(3, 2)
    assert g.n == 3 + 2 + 6
    g, T = canonical_extended_trellis(2, extended=False)
    assert g.n == 2 + 4 + 8
    g, S = canonical_shower_fixture("comb_sprinkler", nu=4)
    assert g.n == 1 + 4 + 6 and S.k == 2


def test_canonical_trellises_are_triangle_free():
    for k in (1, 2):
        g, _ = canonical_extended_trellis(4, k)
        assert is_triangle_free(g)


def test_canonical_fixture_rejects():
    with pytest.raises(ValueError):
        canonical_extended_trellis(1, 1, ell11_adjacent=True)
    with pytest.raises(ValueError):
        canonical_shower_fixture("fountain")
    with pytest.raises(ValueError):
        canonical_multicover(1, 1, stable=False)
