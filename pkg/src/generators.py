import logging
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from src import config
from src.graph_core import Graph
from src.structures import Cable, MulticoverCert, Shower, TrellisEmbedding, Wand, WUBend

logger = logging.getLogger("holescope.generators")

FAMILIES = ("cycle", "path", "complete", "empty", "complete_bipartite", "petersen", "grotzsch",
            "mycielski", "kneser", "shift", "random_triangle_free")
ALIASES = {"rtf": "random_triangle_free", "groetzsch": "grotzsch", "kb": "complete_bipartite"}
ARITY = {"cycle": 1, "path": 1, "complete": 1, "empty": 1, "complete_bipartite": 2, "petersen": 0,
         "grotzsch": 0, "kneser": 2, "shift": 1}


@dataclass(frozen=True)
class FamilySpec:
    """
    A graph family with its integer parameters.

    mycielski carries the spec it is applied to in `inner`; the random
    triangle-free family takes n, an optional edge cap m and a seed.
    """
    family: str
    params: tuple = ()
    seed: int = None
    inner: "FamilySpec" = None

    @classmethod
    def parse(cls, text):
        """
        Parse a family string such as "cycle:5", "kneser:5:2",
        "mycielski:mycielski:complete:2" or "rtf:n=30:seed=7:m=60".
        """
        parts = [p for p in text.strip().split(":")]
        if not parts or not parts[0]:
            raise ValueError("empty family spec")
        family = ALIASES.get(parts[0].lower(), parts[0].lower())
        if family not in FAMILIES:
            raise ValueError(f"unknown family {parts[0]!r}")
        if family == "mycielski":
            if len(parts) < 2:
                raise ValueError("mycielski needs an inner family, e.g. mycielski:cycle:5")
            return cls(family, inner=cls.parse(":".join(parts[1:])))
        if family == "random_triangle_free":
            options = {}
            for part in parts[1:]:
                key, sep, value = part.partition("=")
                if not sep or key not in ("n", "seed", "m"):
                    raise ValueError(f"bad rtf option {part!r}; expected n=, seed= or m=")
                options[key] = _parse_int(value, key)
            if "n" not in options:
                raise ValueError("rtf needs n=<vertices>")
            params = (options["n"],) + ((options["m"],) if "m" in options else ())
            return cls(family, params, seed=options.get("seed", config.DEFAULT_SEED))
        params = tuple(_parse_int(p, family) for p in parts[1:])
        if len(params) != ARITY[family]:
            raise ValueError(f"{family} takes {ARITY[family]} parameters, got {len(params)}")
        return cls(family, params)

    def __str__(self):
        if self.family == "mycielski":
            return f"mycielski:{self.inner}"
        if self.family == "random_triangle_free":
            extra = f":m={self.params[1]}" if len(self.params) > 1 else ""
            return f"rtf:n={self.params[0]}:seed={self.seed}{extra}"
        return ":".join([self.family, *map(str, self.params)])


def _parse_int(token, what):
    try:
        return int(token)
    except ValueError:
        raise ValueError(f"{what}: {token!r} is not an integer") from None


def _require(condition, message):
    if not condition:
        raise ValueError(message)


def generate(spec):
    """
    Build the graph named by a FamilySpec (or a family string).

    Returns:
    Graph: The generated graph, deterministic for a given spec and seed
    """
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    family, params = spec.family, spec.params
    if family == "cycle":
        _require(params[0] >= 3, "cycle needs n >= 3")
        return Graph.from_networkx(nx.cycle_graph(params[0]))
    if family == "path":
        _require(params[0] >= 1, "path needs n >= 1")
        return Graph.from_networkx(nx.path_graph(params[0]))
    if family == "complete":
        _require(params[0] >= 1, "complete needs n >= 1")
        return Graph.from_networkx(nx.complete_graph(params[0]))
    if family == "empty":
        _require(params[0] >= 0, "empty needs n >= 0")
        return Graph(params[0])
    if family == "complete_bipartite":
        _require(min(params) >= 1, "complete_bipartite needs both sides nonempty")
        return Graph.from_networkx(nx.complete_bipartite_graph(*params))
    if family == "petersen":
        return Graph.from_networkx(nx.petersen_graph())
    if family == "grotzsch":
        return generate(FamilySpec("mycielski", inner=FamilySpec("cycle", (5,))))
    if family == "mycielski":
        inner = generate(spec.inner)
        _require(inner.n >= 1, "mycielski needs a nonnull inner graph")
        return Graph.from_networkx(nx.mycielskian(inner.to_networkx()))
    if family == "kneser":
        return kneser(*params)
    if family == "shift":
        return shift_graph(params[0])
    return random_triangle_free(params[0], seed=spec.seed, max_edges=params[1] if len(params) > 1 else None)


def kneser(n, k):
    """Kneser graph K(n, k); vertex ids are lexicographic ranks of the k-subsets"""
    _require(k >= 1 and n >= 2 * k, "kneser needs k >= 1 and n >= 2k")
    subsets = [frozenset(s) for s in combinations(range(n), k)]
    edges = [(i, j) for i, j in combinations(range(len(subsets)), 2) if not subsets[i] & subsets[j]]
    return Graph(len(subsets), edges)


def shift_graph(n):
    """Shift graph on pairs i < j of range(n), with (i, j) ~ (j, k); ids are lexicographic ranks"""
    _require(n >= 2, "shift needs n >= 2")
    pairs = list(combinations(range(n), 2))
    rank = {pair: idx for idx, pair in enumerate(pairs)}
    edges = [(rank[i, j], rank[j, k]) for i, j in pairs for k in range(j + 1, n)]
    return Graph(len(pairs), edges)


def random_triangle_free(n, seed=config.DEFAULT_SEED, max_edges=None):
    """
    One pass over the vertex pairs in a seeded random order, adding each pair
    whose ends have no common neighbour, until max_edges edges are placed.
    """
    _require(n >= 0, "rtf needs n >= 0")
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(n), 2))
    masks = [0] * n
    edges = []
    for idx in rng.permutation(len(pairs)):
        if max_edges is not None and len(edges) >= max_edges:
            break
        u, v = pairs[idx]
        if masks[u] & masks[v]:
            continue
        masks[u] |= 1 << v
        masks[v] |= 1 << u
        edges.append((u, v))
    return Graph(n, edges)


def corpus(random_count=config.CORPUS_RANDOM_COUNT, random_max_n=config.CORPUS_RANDOM_MAX_N):
    """
    Named test corpus: cycles 4..12, Petersen, the Mycielski chain from K2 up
    to 23 vertices, complete bipartite graphs and seeded random triangle-free graphs.

    Returns:
    list: (name, Graph) pairs in a fixed order
    """
    specs = [f"cycle:{n}" for n in range(4, 13)]
    specs += ["petersen", "mycielski:complete:2", "grotzsch", "mycielski:mycielski:mycielski:complete:2",
              "complete_bipartite:3:3", "path:6", "shift:6"]
    span = max(random_max_n - 4, 1)
    specs += [f"rtf:n={5 + (seed * 7) % span}:seed={seed}" for seed in range(random_count)]
    return [(spec, generate(spec)) for spec in specs]


# ---------------------------------------------------------------------------
# Canonical certificates
# ---------------------------------------------------------------------------

class _Builder:
    """Hands out consecutive vertex ids and collects edges."""

    def __init__(self):
        self.n = 0
        self.edges = []

    def vertex(self):
        self.n += 1
        return self.n - 1

    def vertices(self, count):
        return [self.vertex() for _ in range(count)]

    def edge(self, u, v):
        self.edges.append((u, v))

    def graph(self):
        return Graph(self.n, self.edges)


def canonical_extended_trellis(t, k=1, ell11_adjacent=False, extended=True):
    """
    The subdivided K_{s,2t} trellis exactly as defined, with all cross edges
    a_{x,j} - b_{x',j} (x != x', j >= 1) when k = 2 and none when k = 1.

    Parameters:
    t (int): Rows and columns, at least 1
    k (int): Uniform cross type, 1 or 2
    ell11_adjacent (bool): Add the edge a_{1,0} - b_{2,0} (extended, t >= 2)
    extended (bool): Include column 0 and c_0

    Returns:
    tuple: (Graph, TrellisEmbedding)
    """
    _require(t >= 1, "trellis needs t >= 1")
    _require(k in (1, 2), "trellis type must be 1 or 2")
    _require(not ell11_adjacent or (extended and t >= 2), "a_{1,0} - b_{2,0} needs an extended trellis with t >= 2")
    builder = _Builder()
    rows = range(1, t + 1)
    columns = range(0 if extended else 1, t + 1)
    x = {i: builder.vertex() for i in rows}
    a, b = {}, {}
    for j in columns:
        a[j], b[j] = builder.vertex(), builder.vertex()
    a_map, b_map = {}, {}
    for i in rows:
        for j in columns:
            a_map[i, j], b_map[i, j] = builder.vertex(), builder.vertex()
    c0 = builder.vertex() if extended else None
    T = TrellisEmbedding(x=x, a=a, b=b, a_map=a_map, b_map=b_map, extended=extended, c0=c0)
    for u, v in T.required_edges():
        builder.edge(u, v)
    if k == 2:
        for j in columns:
            if j == 0:
                continue
            for i in rows:
                for i2 in rows:
                    if i != i2:
                        builder.edge(a_map[i, j], b_map[i2, j])
    if ell11_adjacent:
        builder.edge(a_map[1, 0], b_map[2, 0])
    return builder.graph(), T


def canonical_cable(t, cable_type=1, base_size=1, pair_types=None):
    """
    A t-cable with one private y_{i,c} per index and base vertex and, for
    every type 2 pair (i, j), a vertex z_{i,j} adjacent to x_i and to all of N_j.

    Parameters:
    t (int): Number of apexes, at least 1
    cable_type (int): Type of every pair when pair_types is omitted
    base_size (int): Number of base vertices, at least 1
    pair_types (dict): Optional explicit type for each pair (i, j), i < j

    Returns:
    tuple: (Graph, Cable)
    """
    _require(t >= 1 and base_size >= 1, "cable needs t >= 1 and base_size >= 1")
    _require(cable_type in (1, 2), "cable type must be 1 or 2")
    types = {pair: cable_type for pair in combinations(range(t), 2)}
    types.update(pair_types or {})
    builder = _Builder()
    x = builder.vertices(t)
    C = builder.vertices(base_size)
    Y = []
    for i in range(t):
        ys = builder.vertices(base_size)
        for y, c in zip(ys, C):
            builder.edge(x[i], y)
            builder.edge(y, c)
        Y.append(set(ys))
    Z = {}
    for (i, j), kind in sorted(types.items()):
        if kind == 2:
            z = builder.vertex()
            builder.edge(x[i], z)
            Z[i, j] = {z}
    N = [set(Y[i]) | set().union(*(Z[i, j] for j in range(i + 1, t) if (i, j) in Z)) for i in range(t)]
    for (i, j), zs in Z.items():
        for z in zs:
            for v in N[j]:
                builder.edge(z, v)
    return builder.graph(), Cable(x=x, N=N, Y=Y, C=C, Z=Z)


def canonical_multicover(size, base_size, stable=True):
    """
    Apexes x_0.. over a shared stable base, each base vertex with a private
    neighbour n_{x,c} of every apex. The unstable variant adds one edge
    between the covers of x_0 and x_1 (needs size >= 2 and base_size >= 2).
    """
    _require(size >= 1 and base_size >= 1, "multicover needs size >= 1 and base_size >= 1")
    _require(stable or (size >= 2 and base_size >= 2), "an unstable multicover needs size >= 2 and base_size >= 2")
    builder = _Builder()
    apexes = builder.vertices(size)
    base = builder.vertices(base_size)
    covers = []
    for x in apexes:
        private = builder.vertices(base_size)
        for v, c in zip(private, base):
            builder.edge(x, v)
            builder.edge(v, c)
        covers.append((x, private))
    if not stable:
        builder.edge(covers[0][1][0], covers[1][1][1])
    return builder.graph(), MulticoverCert(covers=covers, base=base, stable=stable)


SHOWER_KINDS = ("c6_basic", "two_jet", "comb_sprinkler", "detour_jet")


def canonical_shower_fixture(kind, nu=3):
    """
    Hand-built small showers.

    c6_basic: the 6-cycle z0-a-c-s-d-b with levels {z0}, {a, b}, {c, s, d}; jetset {3}.
    two_jet: the 7-cycle z0-a-c-s-d-e-b with base {c, s, d, e}; jetset {3, 4}.
    comb_sprinkler: a base path v_1..v_{nu+2} from the drain v_1 whose last nu
    vertices have private parents p_1..p_nu; jetset {4, .., nu+3}.
    detour_jet: k = 3 shower with a jet of waste 2 that is 1-monotone; jetset {4, 6}.

    Parameters:
    kind (str): One of SHOWER_KINDS, optionally "comb_sprinkler:<nu>"
    nu (int): Sprinkler size for comb_sprinkler

    Returns:
    tuple: (Graph, Shower)
    """
    name, _, arg = kind.partition(":")
    if name == "c6_basic":
        z0, a, b, c, s, d = range(6)
        g = Graph(6, [(z0, a), (z0, b), (a, c), (b, d), (c, s), (s, d)])
        return g, Shower(levels=[{z0}, {a, b}, {c, s, d}], drain=s)
    if name == "two_jet":
        z0, a, b, c, s, d, e = range(7)
        g = Graph(7, [(z0, a), (a, c), (c, s), (s, d), (d, e), (e, b), (b, z0)])
        return g, Shower(levels=[{z0}, {a, b}, {c, s, d, e}], drain=s)
    if name == "comb_sprinkler":
        nu = _parse_int(arg, "comb_sprinkler") if arg else nu
        _require(nu >= 2, "comb_sprinkler needs nu >= 2")
        builder = _Builder()
        z = builder.vertex()
        parents = builder.vertices(nu)
        path = builder.vertices(nu + 2)
        for p in parents:
            builder.edge(z, p)
        for u, v in zip(path, path[1:]):
            builder.edge(u, v)
        for j, p in enumerate(parents):
            builder.edge(p, path[2 + j])
        return builder.graph(), Shower(levels=[{z}, set(parents), set(path)], drain=path[0])
    if name == "detour_jet":
        z, a, a2, b, c, x, w, y, s = range(9)
        edges = [(z, a), (a, b), (b, x), (x, c), (c, y), (y, s), (c, a2), (a2, z), (x, w), (w, y)]
        return Graph(9, edges), Shower(levels=[{z}, {a, a2}, {b, c}, {x, w, y, s}], drain=s)
    raise ValueError(f"unknown shower fixture {kind!r}; expected one of {SHOWER_KINDS}")


DETOUR_JET = (0, 1, 3, 5, 4, 7, 8)


def canonical_bend_fixture():
    """
    A u-bend (hence also a w-bend) of size 2: head z over parents p, q, r,
    base path v1 - v2 - v3 with p ~ v1, r ~ v2, q ~ v3, and U = w - u - s with w ~ p.

    Returns:
    tuple: (Graph, WUBend)
    """
    z, p, q, r, v1, v2, v3, w, u, s = range(10)
    edges = [(z, p), (z, q), (z, r), (v1, v2), (v2, v3), (p, v1), (r, v2), (q, v3), (w, u), (u, s), (w, p)]
    return Graph(10, edges), WUBend(levels=[{z}, {p, q, r}, {v1, v2, v3}], U=(w, u, s), kind="u")


def canonical_wand_fixture():
    """
    A stable shower with k = 5 over the spine w0 - .. - w5 (drain w5) and the
    wand {w0}, {w1}, {w2}, {w3}. Its only up-neighbour is v in L_2, whose post
    v - a3 - a4 - a5 ends on the floor {w5, a5}, so the shadow over the floor is {a5}.

    Returns:
    tuple: (Graph, Shower, Wand)
    """
    w0, w1, w2, w3, w4, w5, p1, v, a3, a4, a5, m = range(12)
    edges = [(w0, w1), (w1, w2), (w2, w3), (w3, w4), (w4, w5), (p1, w0), (v, p1), (v, w3), (v, a3),
             (a3, a4), (a4, a5), (w5, m), (m, a5)]
    S = Shower(levels=[{w0}, {w1, p1}, {w2, v}, {w3, a3}, {w4, a4}, {w5, m, a5}], drain=w5)
    return Graph(12, edges), S, Wand([{w0}, {w1}, {w2}, {w3}])
