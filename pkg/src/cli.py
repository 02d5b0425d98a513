"""
Command-line front end: analyze, verify, construct, generate and corpus.

Reports are JSON on stdout (one object per input graph, keys sorted); the
corpus summary is CSV. Logs go to stderr and the log file only.
"""
import argparse
import json
import logging
import platform
import sys
import time
from pathlib import Path

import networkx as nx
import numpy as np
import pandas as pd
from tqdm import tqdm

from src import __version__, certificates, config
from src.chroma import ChromaticSolver, PhiTable, check_controlled
from src.constructions import BUDGET_EXHAUSTED, SUCCESS, ConstructionEngine
from src.errors import BudgetExhausted, CertificateError, GraphFormatError, HolescopeError, PreconditionError
from src.generators import (canonical_bend_fixture, canonical_cable, canonical_extended_trellis,
                            canonical_multicover, canonical_shower_fixture, canonical_wand_fixture, corpus, generate)
from src.graph_core import (distance_to_json, emit_graph6, girth, is_induced_cycle, is_triangle_free, neighborhood,
                            parse_edge_list, parse_graph6, read_graph6_lines)
from src.holes import density_of, hole_interval, hole_spectrum
from src.structures import shower_floor, verify_levelling

logger = logging.getLogger("holescope.cli")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

PROCEDURES = ("levelling", "5hole", "6hole", "ellhole", "subtrellis", "trellis-hole", "cable-hole",
              "subcable", "multicover", "grow-cable")


def _dump(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _versions():
    return {"holescope": __version__, "python": platform.python_version(), "networkx": nx.__version__,
            "numpy": np.__version__, "pandas": pd.__version__}


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------

def _read_text(args):
    if getattr(args, "stdin", False):
        return "stdin", sys.stdin.read()
    path = getattr(args, "input", None)
    if not path:
        raise GraphFormatError("no input: pass --in PATH or --stdin")
    try:
        return path, Path(path).read_text()
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e}") from e


def read_graphs(args):
    """
    Graphs named by --in/--stdin: one per graph6 line, or a single edge list with --edges.

    Returns:
    list: (source, line number, Graph) triples
    """
    source, text = _read_text(args)
    if getattr(args, "edges", False):
        return [(source, 1, parse_edge_list(text))]
    graphs = [(source, lineno, g) for lineno, g in read_graph6_lines(text.splitlines())]
    if not graphs:
        raise GraphFormatError(f"{source}: no graphs found")
    return graphs


def _single_graph(args):
    graphs = read_graphs(args)
    if len(graphs) > 1:
        logger.warning(f"{len(graphs)} graphs in input, using the first")
    return graphs[0][2]


def _load_phi(args):
    if getattr(args, "phi", None):
        return PhiTable.load(args.phi, policy=args.phi_policy)
    if getattr(args, "phi_identity", None):
        return PhiTable.identity(args.phi_identity, policy=args.phi_policy)
    return None


# ---------------------------------------------------------------------------
# Result encoding
# ---------------------------------------------------------------------------

def _encode(value):
    if isinstance(value, (tuple, list)):
        return [_encode(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _encode(v) for k, v in value.items()}
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    try:
        return certificates.to_document(value)
    except CertificateError:
        return repr(value)


def result_to_dict(result):
    return {
        "outcome": result.outcome,
        "witness": _encode(result.witness),
        "stage": result.stage,
        "detail": result.detail,
        "extra": _encode(result.extra),
    }


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def analyze_graph(g, rho=config.DEFAULT_RHO, numax=config.DEFAULT_NUMAX, lmax=config.DEFAULT_LMAX,
                  budget=config.DEFAULT_BUDGET, phi=None, seed=config.DEFAULT_SEED):
    """
    Chromatic and hole statistics of one graph.

    Parameters:
    g (Graph): Graph to analyse
    rho (int): Largest radius in the chi^rho table
    numax (int): Largest nu for the hole-interval table
    lmax (int): Spectrum cap
    phi (PhiTable): Optional control function; adds a controlled check at radius rho

    Returns:
    dict: Report body (without input descriptor, versions and timing)
    """
    engine = ConstructionEngine(budget)
    solver = engine.solver
    chi = solver.chromatic_number(g)
    chi_table = {}
    for r in range(1, rho + 1):
        chi_table[str(r)] = max((solver.chi_of_set(g, neighborhood(g, v, r, closed=True)) for v in g.vertices()),
                                default=0)
    spectrum = hole_spectrum(g, lmax, budget)
    intervals = {}
    for nu in range(1, numax + 1):
        found = hole_interval(g, nu, lmax, budget, spectrum=spectrum)
        intervals[str(nu)] = found.to_dict() if found else None
    triangle_free = is_triangle_free(g)
    report = {
        "chi": chi,
        "chi_rho": chi_table,
        "girth": distance_to_json(girth(g)),
        "triangle_free": triangle_free,
        "spectrum": spectrum.to_dict(),
        "density": density_of(spectrum.lengths),
        "intervals": intervals,
        "constructions": _construction_summary(engine, g, chi, triangle_free),
    }
    if phi is not None:
        report["control"] = check_controlled(g, rho, phi, seed=seed, solver=solver).to_dict()
    return report


def _construction_summary(engine, g, chi, triangle_free):
    summary = {}
    if g.n:
        L = engine.build_levelling(g)
        base_chi = engine.chi(g, L.base)
        summary["levelling"] = {"sizes": [len(level) for level in L.levels], "base_chi": base_chi,
                                "guarantee": 2 * base_chi >= chi}
    if triangle_free:
        summary["find_5_hole"] = result_to_dict(engine.find_5_hole(g))
        summary["find_6_hole"] = result_to_dict(engine.find_6_hole(g))
    else:
        summary["skipped"] = "graph has a triangle"
    return summary


def cmd_analyze(args):
    phi = _load_phi(args)
    rows = []
    for source, lineno, g in read_graphs(args):
        started = time.perf_counter()
        report = analyze_graph(g, args.rho, args.numax, args.lmax, args.budget, phi, args.seed)
        report.update({
            "schema_version": config.REPORT_SCHEMA_VERSION,
            "input": {"source": source, "line": lineno, "graph6": emit_graph6(g), "n": g.n, "m": g.m},
            "seed": args.seed,
            "versions": _versions(),
            "wall_time": round(time.perf_counter() - started, 6),
        })
        logger.info(f"{source}:{lineno}: n={g.n} chi={report['chi']} spectrum={report['spectrum']['lengths']}")
        if args.csv:
            rows.append({"source": source, "line": lineno, "n": g.n, "m": g.m, "chi": report["chi"],
                         "girth": report["girth"], "triangle_free": report["triangle_free"],
                         "spectrum": " ".join(map(str, report["spectrum"]["lengths"]))})
        else:
            _dump(report)
    if args.csv:
        pd.DataFrame(rows).to_csv(sys.stdout, index=False)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args):
    g = _single_graph(args)
    cert = certificates.load(args.cert)
    report = certificates.verify_certificate(g, cert)
    report["schema_version"] = config.REPORT_SCHEMA_VERSION
    _dump(report)
    return EXIT_OK if report["valid"] else EXIT_VIOLATIONS


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def _require_arg(args, name):
    value = getattr(args, name)
    if value is None:
        raise PreconditionError(f"--{name.replace('_', '-')} is required for {args.procedure}")
    return value


def _run_procedure(engine, g, args):
    procedure = args.procedure
    if procedure == "levelling":
        L = engine.build_levelling(g)
        return {"outcome": SUCCESS, "witness": certificates.to_document(L),
                "extra": {"base_chi": engine.chi(g, L.base), "chi": engine.solver.chromatic_number(g)}}
    if procedure == "5hole":
        return result_to_dict(engine.find_5_hole(g))
    if procedure == "6hole":
        return result_to_dict(engine.find_6_hole(g))
    if procedure == "ellhole":
        return result_to_dict(engine.find_ell_hole_c4free(g, _require_arg(args, "ell")))
    if procedure == "grow-cable":
        phi = _load_phi(args)
        if phi is None:
            raise PreconditionError("grow-cable needs --phi or --phi-identity")
        return result_to_dict(engine.grow_cable(g, _require_arg(args, "t"), _require_arg(args, "tau"), phi))
    cert = certificates.load(_require_arg(args, "cert"))
    if procedure == "subtrellis":
        return result_to_dict(engine.uniform_sub_trellis(g, cert.obj, _require_arg(args, "ell")))
    if procedure == "trellis-hole":
        return result_to_dict(engine.hole_from_extended_trellis(g, cert.obj, _require_arg(args, "k"),
                                                                _require_arg(args, "ell")))
    if procedure == "cable-hole":
        return result_to_dict(engine.hole_from_type2_cable(g, cert.obj))
    if procedure == "subcable":
        return result_to_dict(engine.monochromatic_subcable(g, cert.obj, _require_arg(args, "m"),
                                                            _require_arg(args, "n")))
    M = engine.cable_type1_to_multicover(g, cert.obj)
    return {"outcome": SUCCESS, "witness": certificates.to_document(M)}


def cmd_construct(args):
    g = _single_graph(args)
    engine = ConstructionEngine(args.budget)
    report = _run_procedure(engine, g, args)
    report.update({"procedure": args.procedure, "schema_version": config.REPORT_SCHEMA_VERSION})
    _dump(report)
    return EXIT_BUDGET if report["outcome"] == BUDGET_EXHAUSTED else EXIT_OK


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _options(parts):
    flags, values = set(), {}
    for part in parts:
        key, sep, value = part.partition("=")
        if sep:
            values[key] = int(value)
        else:
            flags.add(part)
    return flags, values


def canonical_fixture(text):
    """
    Certificate families for `generate`: trellis:t=3:k=1[:adj][:plain],
    cable:t=3:type=2[:base=1], shower:<kind>, sprinkler:<nu>,
    multicover:<size>:<base>[:unstable], bend and wand.

    Returns:
    tuple: (Graph, certificate document) or None when text is a plain graph family
    """
    name, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    if name == "trellis":
        flags, values = _options(parts)
        g, T = canonical_extended_trellis(values.get("t", 3), values.get("k", 1), ell11_adjacent="adj" in flags,
                                          extended="plain" not in flags)
        return g, certificates.to_document(T)
    if name == "cable":
        _, values = _options(parts)
        g, c = canonical_cable(values.get("t", 3), values.get("type", 1), values.get("base", 1))
        return g, certificates.to_document(c)
    if name == "shower":
        g, S = canonical_shower_fixture(rest or "c6_basic")
        return g, certificates.to_document(S)
    if name == "sprinkler":
        nu = int(parts[0]) if parts else 3
        g, S = canonical_shower_fixture("comb_sprinkler", nu=nu)
        return g, certificates.to_document(S, "sprinkler", nu=nu)
    if name == "multicover":
        size = int(parts[0]) if parts else 3
        base = int(parts[1]) if len(parts) > 1 else 2
        g, M = canonical_multicover(size, base, stable="unstable" not in parts)
        return g, certificates.to_document(M)
    if name == "bend":
        g, B = canonical_bend_fixture()
        return g, certificates.to_document(B)
    if name == "wand":
        g, S, W = canonical_wand_fixture()
        return g, certificates.to_document(W, shower=S, mat=shower_floor(g, S))
    return None


def cmd_generate(args):
    fixture = canonical_fixture(args.family)
    if fixture is None:
        if args.cert_out:
            raise PreconditionError(f"{args.family!r} is a graph family; --cert-out needs a certificate family")
        g = generate(args.family)
    else:
        g, doc = fixture
        if args.cert_out:
            with open(args.cert_out, "w") as f:
                json.dump(doc, f, indent=2, sort_keys=True)
                f.write("\n")
            logger.info(f"wrote {doc['kind']} certificate to {args.cert_out}")
    sys.stdout.write(emit_graph6(g) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def check_corpus_graph(name, g, lmax=config.CORPUS_LMAX, budget=config.DEFAULT_BUDGET):
    """
    Run the per-graph corpus checks.

    Returns:
    dict: One summary row; "ok" is False when any check fails
    """
    engine = ConstructionEngine(budget)
    chi = engine.solver.chromatic_number(g)
    triangle_free = is_triangle_free(g)
    row = {"name": name, "n": g.n, "m": g.m, "chi": chi, "girth": distance_to_json(girth(g)),
           "triangle_free": triangle_free}
    row["roundtrip_ok"] = parse_graph6(emit_graph6(g)) == g
    L = engine.build_levelling(g)
    base_chi = engine.chi(g, L.base)
    row["base_chi"] = base_chi
    row["levelling_ok"] = not verify_levelling(g, L) and 2 * base_chi >= chi
    row["five_hole"] = row["six_hole"] = "skipped"
    five_ok = six_ok = True
    if triangle_free:
        five = engine.find_5_hole(g)
        row["five_hole"] = five.outcome
        if five.ok:
            five_ok = len(five.witness) == 5 and is_induced_cycle(g, five.witness)
        elif five.outcome != BUDGET_EXHAUSTED:
            five_ok = all(not any(g.has_edge(x, y) for x in sphere for y in sphere)
                          for sphere in (neighborhood(g, v, 2) for v in g.vertices()))
        if chi <= 2:
            five_ok = five_ok and not five.ok
        six = engine.find_6_hole(g)
        row["six_hole"] = six.outcome
        if six.ok:
            six_ok = len(six.witness) == 6 and is_induced_cycle(g, six.witness)
        elif six.outcome != BUDGET_EXHAUSTED:
            six_ok = all(engine.chi(g, neighborhood(g, v, 2)) <= 2 for v in g.vertices())
    try:
        spectrum = hole_spectrum(g, lmax, budget)
        row["spectrum"] = " ".join(map(str, spectrum.lengths))
        spectrum_ok = all(len(spectrum.witness(length)) == length and is_induced_cycle(g, spectrum.witness(length))
                          for length in spectrum.lengths)
    except BudgetExhausted:
        row["spectrum"] = "budget"
        spectrum_ok = True
    row["ok"] = bool(row["roundtrip_ok"] and row["levelling_ok"] and five_ok and six_ok and spectrum_ok)
    return row


def cmd_corpus(args):
    graphs = corpus(args.random_count, args.random_max_n)
    rows = [check_corpus_graph(name, g, args.lmax, args.budget)
            for name, g in tqdm(graphs, desc="corpus", file=sys.stderr, disable=args.quiet)]
    df = pd.DataFrame(rows)
    out = Path(args.out) if args.out else config.RESULTS_DIR / "corpus_summary.csv"
    df.to_csv(out, index=False)
    df.to_csv(sys.stdout, index=False)
    failed = df.loc[~df["ok"], "name"].tolist()
    logger.info(f"corpus: {len(df)} graphs, {len(failed)} failed; summary written to {out}")
    if failed:
        logger.error(f"failed checks on: {', '.join(failed)}")
    return EXIT_VIOLATIONS if failed else EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def _add_common(parser, graph_input=True):
    parser.add_argument("--budget", type=int, default=config.DEFAULT_BUDGET,
                        help="Node-expansion cap per search (env HOLESCOPE_BUDGET)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings only")
    if graph_input:
        source = parser.add_mutually_exclusive_group()
        source.add_argument("--in", "--graph", dest="input", help="graph6 file (one graph per line) or edge list")
        source.add_argument("--stdin", action="store_true", help="Read graphs from standard input")
        parser.add_argument("--edges", action="store_true", help="Input is an edge list, not graph6")


def _add_phi(parser):
    parser.add_argument("--phi", help="JSON array with the control function phi(0), phi(1), ...")
    parser.add_argument("--phi-identity", type=int, help="Use phi(k) = k on 0..N-1")
    parser.add_argument("--phi-policy", choices=("fail", "clamp"), default="fail",
                        help="Lookups past the table fail or clamp to the last value")


def build_parser():
    parser = argparse.ArgumentParser(prog="holescope",
                                     description="Holes in triangle-free graphs of large chromatic number")
    parser.add_argument("--version", action="version", version=f"holescope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Spectrum, chi, chi^rho, girth and hole intervals")
    _add_common(analyze)
    _add_phi(analyze)
    analyze.add_argument("--rho", type=int, default=config.DEFAULT_RHO)
    analyze.add_argument("--numax", type=int, default=config.DEFAULT_NUMAX)
    analyze.add_argument("--lmax", type=int, default=config.DEFAULT_LMAX)
    analyze.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    fmt = analyze.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON lines (default)")
    fmt.add_argument("--csv", action="store_true", help="One CSV row per graph")
    analyze.set_defaults(func=cmd_analyze)

    verify = sub.add_parser("verify", help="Check a certificate JSON against a graph")
    _add_common(verify)
    verify.add_argument("--cert", required=True, help="Certificate JSON file")
    verify.set_defaults(func=cmd_verify)

    construct = sub.add_parser("construct", help="Run a construction procedure")
    _add_common(construct)
    _add_phi(construct)
    construct.add_argument("procedure", choices=PROCEDURES)
    construct.add_argument("--cert", help="Certificate JSON (trellis or cable procedures)")
    construct.add_argument("--ell", type=int)
    construct.add_argument("--k", type=int, help="Uniform trellis type")
    construct.add_argument("--m", type=int)
    construct.add_argument("--n", type=int)
    construct.add_argument("--t", type=int)
    construct.add_argument("--tau", type=int)
    construct.set_defaults(func=cmd_construct)

    gen = sub.add_parser("generate", help="Write a graph family (or a canonical certificate graph) as graph6")
    _add_common(gen, graph_input=False)
    gen.add_argument("family", help='e.g. "mycielski:cycle:5", "kneser:5:2", "rtf:n=30:seed=7", "trellis:t=3:k=1"')
    gen.add_argument("--cert-out", help="Write the certificate of a canonical family to this file")
    gen.set_defaults(func=cmd_generate)

    corp = sub.add_parser("corpus", help="Run the corpus checks and write a CSV summary")
    _add_common(corp, graph_input=False)
    corp.add_argument("--lmax", type=int, default=config.CORPUS_LMAX)
    corp.add_argument("--random-count", type=int, default=config.CORPUS_RANDOM_COUNT)
    corp.add_argument("--random-max-n", type=int, default=config.CORPUS_RANDOM_MAX_N)
    corp.add_argument("--out", help="CSV path (default results/corpus_summary.csv)")
    corp.add_argument("--csv", action="store_true", help="Accepted for symmetry; corpus output is always CSV")
    corp.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, setup_logging=None):
    """
    Parse argv, run the subcommand and map failures to exit codes.

    Parameters:
    argv (list): Arguments without the program name
    setup_logging (callable): Called with the chosen level; defaults to
    setting the level of the "holescope" logger only

    Returns:
    int: 0 ok, 1 violations, 2 usage or input error, 3 budget exhausted
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    if setup_logging is not None:
        setup_logging(level)
    else:
        logging.getLogger("holescope").setLevel(level)
    try:
        return args.func(args)
    except BudgetExhausted as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except (HolescopeError, ValueError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
