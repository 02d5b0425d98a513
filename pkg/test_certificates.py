import json

import pytest

from src import certificates, config
from src.errors import CertificateError
from src.generators import (canonical_bend_fixture, canonical_cable, canonical_extended_trellis,
                            canonical_multicover, canonical_shower_fixture, canonical_wand_fixture)
from src.structures import Levelling, shower_floor


def encoded(cert, kind=None, **context):
    """Document after a trip through JSON text"""
    return json.loads(json.dumps(certificates.to_document(cert, kind, **context)))


def test_levelling_document(c9):
    doc = encoded(Levelling([{0}, {8, 1}, {7, 2}]))
    assert doc == {"kind": "levelling", "schema_version": config.CERTIFICATE_SCHEMA_VERSION,
                   "levels": [[0], [1, 8], [2, 7]]}
    report = certificates.verify_document(c9, doc)
    assert report == {"kind": "levelling", "valid": True, "violations": []}


def test_shower_document_reports_jetset(two_jet_shower):
    g, S = two_jet_shower
    doc = encoded(S, lam=1)
    assert doc["drain"] == 4 and doc["lam"] == 1
    report = certificates.verify_document(g, doc)
    assert report["valid"] and report["jetset"] == [3, 4]


def test_trellis_document_round_trip():
    g, T = canonical_extended_trellis(3, 2)
    cert = certificates.from_document(encoded(T))
    assert cert.kind == "trellis" and cert.obj == T
    assert certificates.verify_certificate(g, cert)["valid"]


def test_trellis_document_with_wrong_t():
    g, T = canonical_extended_trellis(2, 1)
    doc = encoded(T)
    doc["t"] = 3
    with pytest.raises(CertificateError):
        certificates.from_document(doc)


def test_trellis_violations_are_listed():
    g, T = canonical_extended_trellis(2, 1)
    report = certificates.verify_document(g.with_edges(add=[(T.x[1], T.x[2])]), encoded(T))
    assert not report["valid"]
    assert report["violations"] == [{"rule": "x-not-stable", "witness": [T.x[1], T.x[2]], "detail": "edge inside X"}]


def test_cable_document_reports_pair_types():
    g, c = canonical_cable(3, pair_types={(0, 1): 2, (0, 2): 1, (1, 2): 2})
    report = certificates.verify_document(g, encoded(c))
    assert report["valid"]
    assert report["pair_types"] == [[0, 1, 2], [0, 2, 1], [1, 2, 2]]


def test_multicover_document():
    g, M = canonical_multicover(2, 2, stable=False)
    doc = encoded(M)
    assert doc["stable"] is False
    assert certificates.verify_document(g, doc)["valid"]
    doc["stable"] = True
    report = certificates.verify_document(g, doc)
    assert [v["rule"] for v in report["violations"]] == ["unstable-covers"]


def test_bend_document_reports_size():
    g, B = canonical_bend_fixture()
    doc = encoded(B)
    assert doc["bend_kind"] == "u"
    report = certificates.verify_document(g, doc)
    assert report["valid"] and report["size"] == 2


def test_sprinkler_and_recirculator_documents():
    g, S = canonical_shower_fixture("comb_sprinkler:3")
    assert certificates.verify_document(g, encoded(S, "sprinkler", nu=3))["valid"]
    report = certificates.verify_document(g, encoded(S, "sprinkler", nu=4))
    assert [v["rule"] for v in report["violations"]] == ["not-a-sprinkler"]
    g6, S6 = canonical_shower_fixture("c6_basic")
    report = certificates.verify_document(g6, encoded(S6, "recirculator", R=[4, 3, 1, 0]))
    assert not report["valid"]


def test_wand_document_reports_shadow():
    g, S, W = canonical_wand_fixture()
    doc = encoded(W, shower=S, mat=shower_floor(g, S))
    assert doc["mat"] == [5, 10]
    report = certificates.verify_document(g, doc)
    assert report["valid"] and report["shadow"] == [10]


@pytest.mark.parametrize("doc", [
    [],
    {"kind": "fountain", "schema_version": config.CERTIFICATE_SCHEMA_VERSION},
    {"kind": "levelling", "schema_version": "0.1", "levels": [[0]]},
    {"kind": "levelling", "schema_version": config.CERTIFICATE_SCHEMA_VERSION},
    {"kind": "levelling", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "levels": []},
    {"kind": "shower", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "levels": [], "drain": 0},
    {"kind": "wubend", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "levels": [[0], [1], [2]], "U": []},
    {"kind": "wubend", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "levels": [], "U": [3]},
    {"kind": "cable", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "x": [0], "N": [[1]], "Y": [[1]]},
    {"kind": "trellis", "schema_version": config.CERTIFICATE_SCHEMA_VERSION, "x": [[1, 0, 9]], "a": [], "b": [],
     "a_map": [], "b_map": []},
])
def test_malformed_documents(doc):
    with pytest.raises(CertificateError):
        certificates.from_document(doc)


def test_save_and_load(tmp_path):
    g, c = canonical_cable(2, cable_type=2)
    path = tmp_path / "cable.json"
    certificates.save(path, c)
    cert = certificates.load(path)
    assert cert.kind == "cable" and cert.obj == c
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CertificateError):
        certificates.load(bad)


def test_unknown_object_cannot_be_encoded():
    with pytest.raises(CertificateError):
        certificates.to_document(object())
