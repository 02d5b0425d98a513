import pytest

from src.errors import CertificateError, PreconditionError
from src.generators import (canonical_bend_fixture, canonical_cable, canonical_extended_trellis,
                            canonical_multicover, canonical_shower_fixture, canonical_wand_fixture)
from src.graph_core import Graph
from src.structures import (Levelling, MulticoverCert, Shower, TrellisEmbedding, Wand, WUBend, classify_cable,
                            contained_in, is_monotone_path, shower_floor, sprinkler_floor, trellis_cross_type,
                            verify_levelling, verify_multicover, verify_recirculator, verify_shower,
                            verify_sprinkler, verify_trellis, verify_wand, verify_wubend)


def rules(violations):
    return {v.rule for v in violations}


# ---------------------------------------------------------------------------
# Levellings and showers
# ---------------------------------------------------------------------------

def test_bfs_layers_form_a_levelling(c9):
    L = Levelling([{0}, {1, 8}, {2, 7}])
    assert verify_levelling(c9, L) == []
    assert L.k == 2 and L.head == 0
    assert L.height(7) == 0 and L.height(0) == 2
    with pytest.raises(PreconditionError):
        L.height(4)


def test_levelling_violations(c9):
    assert rules(verify_levelling(c9, Levelling([{0, 1}, {2}]))) == {"head-not-unique"}
    assert "levels-overlap" in rules(verify_levelling(c9, Levelling([{0}, {1}, {1, 2}])))
    assert rules(verify_levelling(c9, Levelling([{0}, {1}, {3}]))) == {"orphan"}
    assert "skip-edge" in rules(verify_levelling(c9, Levelling([{1}, {2}, {0}])))


def test_shower_checks(c6_shower):
    g, S = c6_shower
    assert verify_shower(g, S) == []
    assert verify_shower(g, S, lam="all") == []
    assert shower_floor(g, S) == {3, 5}
    assert rules(verify_levelling(g, S.levelling)) == {"orphan"}


def test_shower_violations(c6_shower):
    g, S = c6_shower
    assert rules(verify_shower(g, Shower(levels=S.levels, drain=0))) == {"drain-outside-base"}
    assert rules(verify_shower(g, Shower(levels=[{0}, {1, 2}, {3, 5}], drain=3))) == {"base-disconnected"}
    assert rules(verify_shower(g, S, lam=3)) == {"too-short"}
    chorded = g.with_edges(add=[(1, 2)])
    assert verify_shower(chorded, S) == []
    assert rules(verify_shower(chorded, S, lam=1)) == {"unstable-level"}


def test_recirculator(c6_shower):
    g, S = c6_shower
    host = Graph(8, list(g.edges()) + [(4, 6), (6, 7), (7, 0)])
    assert verify_recirculator(host, S, (4, 6, 7, 0))
    assert verify_recirculator(host, S, (0, 7, 6, 4))
    assert not verify_recirculator(host.with_edges(add=[(6, 3)]), S, (4, 6, 7, 0))
    with pytest.raises(PreconditionError):
        verify_recirculator(host, S, (3, 6, 7, 0))


def test_monotone_paths(c6_shower):
    g, S = c6_shower
    assert is_monotone_path(g, S, (0, 1, 3))
    assert is_monotone_path(g, S, (3, 1))
    assert not is_monotone_path(g, S, (3, 4))
    assert not is_monotone_path(g, S, (0, 1, 3, 4))


def test_containment(c6_shower):
    g, S = c6_shower
    assert contained_in(S, S)
    assert contained_in(Shower(levels=[{0}, {1}, {3, 4}], drain=4), S)
    assert not contained_in(Shower(levels=[{0}, {1}, {3}], drain=3), S)
    assert contained_in(WUBend(levels=[{0}, {1}, {3}], U=(5, 4)), S)
    assert not contained_in(WUBend(levels=[{0}, {1}, {3}], U=(2, 4)), S)


# ---------------------------------------------------------------------------
# Trellises
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("t,k,extended", [(1, 1, True), (3, 1, True), (3, 2, True), (4, 2, False), (2, 1, False)])
def test_canonical_trellis_is_valid(t, k, extended):
    g, T = canonical_extended_trellis(t, k, extended=extended)
    assert verify_trellis(g, T) == []
    assert T.t == t


def test_trellis_vertex_count():
    g, T = canonical_extended_trellis(3)
    assert g.n == 36 == len(T.named_vertices())


def test_trellis_violations():
    g, T = canonical_extended_trellis(3, 1)
    assert rules(verify_trellis(g.with_edges(add=[(T.x[1], T.a[1])]), T)) == {"forbidden-edge"}
    assert rules(verify_trellis(g.with_edges(add=[(T.x[1], T.x[2])]), T)) == {"x-not-stable"}
    assert rules(verify_trellis(g.with_edges(remove=[(T.a[2], T.b[2])]), T)) == {"missing-edge"}
    same_column = g.with_edges(add=[(T.a_map[1, 2], T.b_map[3, 2])])
    assert verify_trellis(same_column, T) == []
    other_column = g.with_edges(add=[(T.a_map[1, 2], T.b_map[3, 1])])
    assert rules(verify_trellis(other_column, T)) == {"forbidden-edge"}


def test_trellis_incomplete_maps_raise():
    g, T = canonical_extended_trellis(2, 1)
    a_map = dict(T.a_map)
    del a_map[2, 1]
    broken = TrellisEmbedding(x=T.x, a=T.a, b=T.b, a_map=a_map, b_map=T.b_map, extended=True, c0=T.c0)
    with pytest.raises(CertificateError):
        verify_trellis(g, broken)


def test_trellis_cross_type():
    g1, T1 = canonical_extended_trellis(3, 1)
    g2, T2 = canonical_extended_trellis(3, 2)
    assert trellis_cross_type(g1, T1, [1, 2, 3], [0, 1, 2, 3]) == 1
    assert trellis_cross_type(g2, T2, [1, 2, 3], [1, 2, 3]) == 2
    assert trellis_cross_type(g2, T2, [1, 2, 3], [0, 1]) is None
    assert trellis_cross_type(g2, T2, [2], [1, 2]) == 1


# ---------------------------------------------------------------------------
# Covers and cables
# ---------------------------------------------------------------------------

def test_multicover():
    g, M = canonical_multicover(3, 2)
    assert verify_multicover(g, M) == []
    g2, M2 = canonical_multicover(3, 2, stable=False)
    assert verify_multicover(g2, M2) == []
    stable_claim = MulticoverCert(covers=M2.covers, base=M2.base, stable=True)
    assert rules(verify_multicover(g2, stable_claim)) == {"unstable-covers"}


def test_multicover_violations():
    g, M = canonical_multicover(2, 2)
    apex, base_vertex = M.covers[0][0], sorted(M.base)[0]
    assert "C-touches-apex" in rules(verify_multicover(g.with_edges(add=[(apex, base_vertex)]), M))
    other_private = sorted(M.covers[1][1])[0]
    assert "apex-touches-other-cover" in rules(verify_multicover(g.with_edges(add=[(apex, other_private)]), M))


@pytest.mark.parametrize("cable_type", [1, 2])
@pytest.mark.parametrize("t", [1, 2, 4])
def test_canonical_cables_classify(t, cable_type):
    g, c = canonical_cable(t, cable_type=cable_type, base_size=2)
    result = classify_cable(g, c)
    assert result["valid"], result["violations"]
    assert set(result["pair_types"].values()) <= {cable_type}
    assert len(result["pair_types"]) == t * (t - 1) // 2


def test_mixed_cable_types():
    types = {(0, 1): 2, (0, 2): 1, (1, 2): 2}
    g, c = canonical_cable(3, pair_types=types)
    assert classify_cable(g, c)["pair_types"] == types


def test_cable_violations():
    g, c = canonical_cable(3)
    assert "apexes-adjacent" in rules(classify_cable(g.with_edges(add=[(c.x[0], c.x[1])]), c)["violations"])
    base_vertex = sorted(c.C)[0]
    touched = g.with_edges(add=[(base_vertex, c.x[2])])
    assert "C-touches-apex" in rules(classify_cable(touched, c)["violations"])


def test_subcable():
    g, c = canonical_cable(4, cable_type=2)
    sub = c.subcable([1, 3])
    assert sub.x == (c.x[1], c.x[3])
    result = classify_cable(g, sub)
    assert result["valid"]
    assert result["pair_types"] == {(0, 1): 2}


# ---------------------------------------------------------------------------
# Bends, sprinklers, wands
# ---------------------------------------------------------------------------

def test_bend_fixture_is_a_u_bend():
    g, B = canonical_bend_fixture()
    result = verify_wubend(g, B)
    assert result["violations"] == []
    assert result["size"] == 2
    as_w = WUBend(levels=B.levels, U=B.U, kind="w")
    assert verify_wubend(g, as_w)["violations"] == []


def test_bend_base_must_be_a_path():
    g, B = canonical_bend_fixture()
    broken = WUBend(levels=[{0}, {1, 2, 3}, {4, 6}], U=B.U, kind="w")
    result = verify_wubend(g, broken)
    assert "base-not-path" in rules(result["violations"])
    assert result["size"] is None


def test_bend_u_attachment_rules():
    g, B = canonical_bend_fixture()
    second_parent = g.with_edges(add=[(2, 7)])
    assert "attachment-not-unique" in rules(verify_wubend(second_parent, B)["violations"])
    with pytest.raises(CertificateError):
        WUBend(levels=B.levels, U=B.U, kind="v")


def test_bend_drain_path_bounds():
    g, B = canonical_bend_fixture()
    with pytest.raises(CertificateError):
        WUBend(levels=B.levels, U=(), kind="u")
    with pytest.raises(CertificateError):
        WUBend(levels=[], U=B.U)
    single = WUBend(levels=B.levels, U=(7,), kind="u")
    assert single.drain == 7
    assert verify_wubend(g, single)["violations"] == []


def test_empty_levellings_are_rejected():
    with pytest.raises(CertificateError):
        Levelling([])
    with pytest.raises(CertificateError):
        Shower(levels=[], drain=0)


def test_sprinkler():
    g, S = canonical_shower_fixture("comb_sprinkler:3")
    assert verify_sprinkler(g, S, 3)
    assert sprinkler_floor(g, S, 3) == (6, 7, 8)
    assert not verify_sprinkler(g, S, 2)
    assert not verify_sprinkler(g, S, 4)
    assert not verify_sprinkler(g, S, 1)


def test_wand():
    g, S, W = canonical_wand_fixture()
    assert verify_wand(g, S, W)
    assert W.t == 3
    assert not verify_wand(g, S, Wand([{0}, {1}, {2}, {3}, {4}]))
    assert not verify_wand(g, S, Wand([{0}, {6}, {2}]))
