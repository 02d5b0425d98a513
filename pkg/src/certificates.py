"""
JSON form of the certificates.

Every document is an object {"kind": ..., "schema_version": ..., ...} with
vertex sets as sorted arrays and index maps as arrays of triples. The layout of
each kind is documented in docs/certificates.md.
"""
import json
import logging
from dataclasses import dataclass, field

from src import config
from src.errors import CertificateError
from src.jets import jetset, wand_shadow
from src.structures import (Cable, Levelling, MulticoverCert, Shower, TrellisEmbedding, Violation, Wand,
                            WUBend, classify_cable, verify_levelling, verify_multicover, verify_recirculator,
                            verify_shower, verify_sprinkler, verify_trellis, verify_wand, verify_wubend)

logger = logging.getLogger("holescope.certificates")

KINDS = ("levelling", "shower", "trellis", "multicover", "cable", "wubend", "wand", "sprinkler", "recirculator")


@dataclass
class Certificate:
    """A decoded document: the certificate object plus the context its verifier needs"""
    kind: str
    obj: object
    context: dict = field(default_factory=dict)


def _sorted(vertices):
    return sorted(int(v) for v in vertices)


def _levels(levels):
    return [_sorted(level) for level in levels]


def _shower_body(S):
    return {"levels": _levels(S.levels), "drain": S.drain}


def to_document(cert, kind=None, **context):
    """
    Encode a certificate.

    Parameters:
    cert: Levelling, Shower, TrellisEmbedding, MulticoverCert, Cable, WUBend or Wand
    kind (str): Needed only for "sprinkler" and "recirculator" (both wrap a Shower)
    context: shower= (wand), mat= (wand, optional), nu= (sprinkler), R= (recirculator), lam= (shower)

    Returns:
    dict: JSON-ready document
    """
    if kind is None:
        kind = _infer_kind(cert)
    doc = {"kind": kind, "schema_version": config.CERTIFICATE_SCHEMA_VERSION}
    if kind == "levelling":
        doc["levels"] = _levels(cert.levels)
    elif kind == "shower":
        doc.update(_shower_body(cert))
        if context.get("lam") is not None:
            doc["lam"] = context["lam"]
    elif kind == "sprinkler":
        doc["shower"] = _shower_body(cert)
        doc["nu"] = int(context["nu"])
    elif kind == "recirculator":
        doc["shower"] = _shower_body(cert)
        doc["R"] = [int(v) for v in context["R"]]
    elif kind == "trellis":
        doc.update({
            "t": cert.t,
            "extended": cert.extended,
            "x": [[i, v] for i, v in sorted(cert.x.items())],
            "a": [[j, v] for j, v in sorted(cert.a.items())],
            "b": [[j, v] for j, v in sorted(cert.b.items())],
            "a_map": [[i, j, v] for (i, j), v in sorted(cert.a_map.items())],
            "b_map": [[i, j, v] for (i, j), v in sorted(cert.b_map.items())],
            "c0": cert.c0,
        })
    elif kind == "multicover":
        doc["covers"] = [{"x": x, "N": _sorted(N)} for x, N in cert.covers]
        doc["base"] = _sorted(cert.base)
        doc["stable"] = cert.stable
    elif kind == "cable":
        doc.update({
            "x": list(cert.x),
            "N": _levels(cert.N),
            "Y": _levels(cert.Y),
            "C": _sorted(cert.C),
            "Z": [[i, j, _sorted(zs)] for (i, j), zs in sorted(cert.Z.items())],
        })
    elif kind == "wubend":
        doc.update({"levels": _levels(cert.levels), "U": list(cert.U), "bend_kind": cert.kind})
    elif kind == "wand":
        doc["shower"] = _shower_body(context["shower"])
        doc["sets"] = _levels(cert.sets)
        if context.get("mat") is not None:
            doc["mat"] = _sorted(context["mat"])
    else:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    return doc


def _infer_kind(cert):
    for cls, kind in ((Shower, "shower"), (Levelling, "levelling"), (TrellisEmbedding, "trellis"),
                      (MulticoverCert, "multicover"), (Cable, "cable"), (WUBend, "wubend"), (Wand, "wand")):
        if isinstance(cert, cls):
            return kind
    raise CertificateError(f"cannot encode {type(cert).__name__}")


def _field(doc, key, kind):
    if key not in doc:
        raise CertificateError(f"{kind} certificate is missing {key!r}")
    return doc[key]


def _shower_from(body, kind):
    return Shower(levels=_field(body, "levels", kind), drain=_field(body, "drain", kind))


def from_document(doc):
    """
    Decode a document produced by to_document.

    Returns:
    Certificate: kind, object and verifier context
    """
    if not isinstance(doc, dict):
        raise CertificateError("certificate must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    version = doc.get("schema_version")
    if version != config.CERTIFICATE_SCHEMA_VERSION:
        raise CertificateError(f"schema version {version!r} != {config.CERTIFICATE_SCHEMA_VERSION!r}")
    try:
        if kind == "levelling":
            return Certificate(kind, Levelling(_field(doc, "levels", kind)))
        if kind == "shower":
            return Certificate(kind, _shower_from(doc, kind), {"lam": doc.get("lam")})
        if kind == "sprinkler":
            return Certificate(kind, _shower_from(_field(doc, "shower", kind), kind), {"nu": _field(doc, "nu", kind)})
        if kind == "recirculator":
            return Certificate(kind, _shower_from(_field(doc, "shower", kind), kind), {"R": _field(doc, "R", kind)})
        if kind == "trellis":
            T = TrellisEmbedding(
                x={i: v for i, v in _field(doc, "x", kind)},
                a={j: v for j, v in _field(doc, "a", kind)},
                b={j: v for j, v in _field(doc, "b", kind)},
                a_map={(i, j): v for i, j, v in _field(doc, "a_map", kind)},
                b_map={(i, j): v for i, j, v in _field(doc, "b_map", kind)},
                extended=bool(doc.get("extended", False)),
                c0=doc.get("c0"),
            )
            if doc.get("t") is not None and doc["t"] != T.t:
                raise CertificateError(f"trellis declares t={doc['t']} but has {T.t} rows")
            return Certificate(kind, T)
        if kind == "multicover":
            covers = [(_field(c, "x", kind), _field(c, "N", kind)) for c in _field(doc, "covers", kind)]
            return Certificate(kind, MulticoverCert(covers=covers, base=_field(doc, "base", kind),
                                                    stable=bool(doc.get("stable", False))))
        if kind == "cable":
            Z = {(i, j): zs for i, j, zs in doc.get("Z", [])}
            return Certificate(kind, Cable(x=_field(doc, "x", kind), N=_field(doc, "N", kind),
                                           Y=_field(doc, "Y", kind), C=_field(doc, "C", kind), Z=Z))
        if kind == "wubend":
            return Certificate(kind, WUBend(levels=_field(doc, "levels", kind), U=_field(doc, "U", kind),
                                            kind=doc.get("bend_kind", "w")))
        shower = _shower_from(_field(doc, "shower", kind), kind)
        return Certificate(kind, Wand(_field(doc, "sets", kind)), {"shower": shower, "mat": doc.get("mat")})
    except (TypeError, ValueError) as e:
        if isinstance(e, CertificateError):
            raise
        raise CertificateError(f"malformed {kind} certificate: {e}") from e


def load(path):
    with open(path) as f:
        try:
            return from_document(json.load(f))
        except json.JSONDecodeError as e:
            raise CertificateError(f"{path}: not valid JSON ({e})") from e


def save(path, cert, kind=None, **context):
    with open(path, "w") as f:
        json.dump(to_document(cert, kind, **context), f, indent=2, sort_keys=True)
        f.write("\n")


def verify_certificate(g, certificate):
    """
    Run the verifier matching the certificate kind.

    Returns:
    dict: {"kind", "valid", "violations": [...]} plus kind-specific fields
    (pair_types for cables, size for bends, shadow for wands with a mat)
    """
    kind, obj, ctx = certificate.kind, certificate.obj, certificate.context
    report = {"kind": kind}
    if kind == "levelling":
        violations = verify_levelling(g, obj)
    elif kind == "shower":
        violations = verify_shower(g, obj, ctx.get("lam"))
        if not violations:
            report["jetset"] = sorted(jetset(g, obj))
    elif kind == "trellis":
        violations = verify_trellis(g, obj)
    elif kind == "multicover":
        violations = verify_multicover(g, obj)
    elif kind == "cable":
        result = classify_cable(g, obj)
        violations = result["violations"]
        report["pair_types"] = [[i, j, kind_] for (i, j), kind_ in sorted(result["pair_types"].items())]
    elif kind == "wubend":
        result = verify_wubend(g, obj)
        violations = result["violations"]
        report["size"] = result["size"]
    elif kind == "sprinkler":
        violations = [] if verify_sprinkler(g, obj, ctx["nu"]) else [
            Violation("not-a-sprinkler", (), f"not a {ctx['nu']}-sprinkler")]
    elif kind == "recirculator":
        violations = [] if verify_recirculator(g, obj, ctx["R"]) else [
            Violation("not-a-recirculator", tuple(ctx["R"]), "")]
    else:
        shower = ctx["shower"]
        violations = [] if verify_wand(g, shower, obj) else [Violation("not-a-wand", (), "")]
        if not violations and ctx.get("mat") is not None:
            report["shadow"] = sorted(wand_shadow(g, shower, obj, ctx["mat"]))
    report["valid"] = not violations
    report["violations"] = [v.to_dict() for v in violations]
    logger.info(f"{kind} certificate: {len(violations)} violations")
    return report


def verify_document(g, doc):
    return verify_certificate(g, from_document(doc))
