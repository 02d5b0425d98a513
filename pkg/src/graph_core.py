import logging
from functools import total_ordering

import networkx as nx

from src.errors import GraphFormatError

logger = logging.getLogger("holescope.graph_core")

GRAPH6_HEADER = ">>graph6<<"


@total_ordering
class _Infinity:
    """Distance between vertices in different components"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("holescope.INF")

    def __repr__(self):
        return "INF"

    def to_json(self):
        return "inf"


INF = _Infinity()


def distance_to_json(d):
    """Integers stay integers, INF becomes the string "inf"."""
    return d.to_json() if d is INF else d


def iter_bits(mask):
    """Yield the vertex ids set in a bitmask, ascending"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices):
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """
    Immutable simple undirected graph on vertex ids 0..n-1.

    Adjacency is kept twice: as sorted neighbour tuples (for deterministic
    scans) and as integer bitmasks (for set algebra in the searches).
    """

    __slots__ = ("_n", "_adj", "_masks")

    def __init__(self, n, edges=()):
        if n < 0:
            raise GraphFormatError(f"negative vertex count {n}")
        masks = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_masks", tuple(masks))
        object.__setattr__(self, "_adj", tuple(tuple(iter_bits(m)) for m in masks))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_networkx(cls, G):
        """
        Convert a networkx graph, numbering vertices in node insertion order.

        Parameters:
        G (nx.Graph): Source graph (self-loops are rejected)

        Returns:
        Graph: Converted graph
        """
        index = {node: i for i, node in enumerate(G.nodes())}
        return cls(len(index), ((index[u], index[v]) for u, v in G.edges()))

    def to_networkx(self):
        G = nx.Graph()
        G.add_nodes_from(range(self._n))
        G.add_edges_from(self.edges())
        return G

    @property
    def n(self):
        return self._n

    @property
    def m(self):
        return sum(len(a) for a in self._adj) // 2

    @property
    def adj(self):
        return self._adj

    @property
    def masks(self):
        return self._masks

    def vertices(self):
        return range(self._n)

    def neighbors(self, v):
        self.check_vertex(v)
        return self._adj[v]

    def mask(self, v):
        return self._masks[v]

    def degree(self, v):
        self.check_vertex(v)
        return len(self._adj[v])

    def has_edge(self, u, v):
        return bool(self._masks[u] >> v & 1)

    def edges(self):
        """All edges (u, v) with u < v in lexicographic order"""
        return [(u, v) for u in range(self._n) for v in self._adj[u] if u < v]

    def check_vertex(self, v):
        if not (isinstance(v, int) and 0 <= v < self._n):
            raise GraphFormatError(f"vertex {v!r} out of range for n={self._n}")

    def induced_subgraph(self, vertices):
        """
        Induced subgraph with vertices renumbered in ascending order.

        Returns:
        tuple: (Graph, tuple of original ids indexed by new id)
        """
        original = tuple(sorted(set(vertices)))
        for v in original:
            self.check_vertex(v)
        index = {v: i for i, v in enumerate(original)}
        sub_mask = mask_of(original)
        edges = []
        for v in original:
            for w in iter_bits(self._masks[v] & sub_mask):
                if v < w:
                    edges.append((index[v], index[w]))
        return Graph(len(original), edges), original

    def with_edges(self, add=(), remove=()):
        """New graph with the given edges added and removed"""
        edges = set(self.edges())
        for u, v in remove:
            edges.discard((min(u, v), max(u, v)))
        for u, v in add:
            edges.add((min(u, v), max(u, v)))
        return Graph(self._n, sorted(edges))

    def components(self):
        """Connected components as frozensets, ordered by smallest member"""
        unseen = (1 << self._n) - 1
        result = []
        while unseen:
            root = (unseen & -unseen).bit_length() - 1
            comp = 1 << root
            frontier = comp
            while frontier:
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= self._masks[u]
                frontier = nxt & ~comp
                comp |= frontier
            unseen &= ~comp
            result.append(frozenset(iter_bits(comp)))
        return result

    def __eq__(self, other):
        return isinstance(other, Graph) and self._n == other._n and self._masks == other._masks

    def __hash__(self):
        return hash((self._n, self._masks))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


# ---------------------------------------------------------------------------
# Ingestion / serialization
# ---------------------------------------------------------------------------

def _decode_graph6_size(data):
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] < 63:
        return data[0], data[1:]
    if len(data) >= 2 and data[1] < 63:
        if len(data) < 4:
            raise GraphFormatError("truncated graph6 length header")
        return data[1] << 12 | data[2] << 6 | data[3], data[4:]
    if len(data) < 8:
        raise GraphFormatError("truncated graph6 length header")
    n = 0
    for b in data[2:8]:
        n = n << 6 | b
    return n, data[8:]


def parse_graph6(text):
    """
    Parse one graph in header-less graph6 form (an optional >>graph6<< prefix is stripped).

    Parameters:
    text (str): graph6 string

    Returns:
    Graph: Decoded graph
    """
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):].strip()
    if s.startswith(":"):
        raise GraphFormatError("sparse6 input is not supported")
    data = [ord(c) - 63 for c in s]
    if any(b < 0 or b > 63 for b in data):
        raise GraphFormatError("byte outside the printable graph6 range 63..126")
    n, body = _decode_graph6_size(data)
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(body) != expected:
        raise GraphFormatError(f"expected {expected} data bytes for n={n}, got {len(body)}")
    padding = expected * 6 - nbits
    if padding and body[-1] & ((1 << padding) - 1):
        raise GraphFormatError("nonzero padding bits in graph6 data")
    if n == 0:
        return Graph(0)
    return Graph.from_networkx(nx.from_graph6_bytes(s.encode("ascii")))


def emit_graph6(g):
    """Header-less graph6 string for g"""
    if g.n == 0:
        return "?"
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").strip()


def read_graph6_lines(lines):
    """Yield (line number, Graph) for every non-blank line of a graph6 stream"""
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            try:
                yield lineno, parse_graph6(line)
            except GraphFormatError as e:
                raise GraphFormatError(f"line {lineno}: {e}") from e


def parse_edge_list(text):
    """
    Parse a whitespace edge list: one "u v" pair per line, optional "n <k>" header.

    Blank lines and lines starting with '#' are skipped. Without a header the
    vertex count is the largest id plus one.
    """
    declared = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "n":
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            declared = _parse_id(parts[1], lineno)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        u, v = _parse_id(parts[0], lineno), _parse_id(parts[1], lineno)
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
        edges.append((u, v))
    n = max((max(u, v) + 1 for u, v in edges), default=0)
    if declared is not None:
        if n > declared:
            raise GraphFormatError(f"vertex id {n - 1} exceeds declared n={declared}")
        n = declared
    return Graph(n, edges)


def _parse_id(token, lineno):
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: {token!r} is not an integer") from None
    if value < 0:
        raise GraphFormatError(f"line {lineno}: negative vertex id {value}")
    return value


def emit_edge_list(g):
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Metric primitives
# ---------------------------------------------------------------------------

def bfs_layers(g, root, within=None):
    """
    BFS layers from root, optionally inside the vertex set `within`.

    Returns:
    list: frozensets L_0 = {root}, L_1, ... until the component is exhausted
    """
    g.check_vertex(root)
    allowed = (1 << g.n) - 1 if within is None else mask_of(within)
    seen = frontier = 1 << root
    layers = [frozenset([root])]
    while True:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= g.masks[u]
        frontier = nxt & allowed & ~seen
        if not frontier:
            return layers
        seen |= frontier
        layers.append(frozenset(iter_bits(frontier)))


def neighborhood(g, v, rho, closed=False):
    """
    Vertices at distance exactly rho from v (sphere) or at most rho (ball).

    Parameters:
    g (Graph): Host graph
    v (int): Centre vertex
    rho (int): Radius, nonnegative
    closed (bool): Ball when True, sphere when False

    Returns:
    frozenset: The sphere or ball
    """
    g.check_vertex(v)
    if rho < 0:
        raise ValueError(f"radius must be nonnegative, got {rho}")
    seen = frontier = 1 << v
    for _ in range(rho):
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= g.masks[u]
        frontier = nxt & ~seen
        seen |= frontier
    return frozenset(iter_bits(seen if closed else frontier))


def distances_from(g, v):
    """List of distances from v to every vertex (INF when unreachable)"""
    result = [INF] * g.n
    for d, layer in enumerate(bfs_layers(g, v)):
        for u in layer:
            result[u] = d
    return result


def dist(g, u, v):
    g.check_vertex(u)
    g.check_vertex(v)
    return distances_from(g, u)[v]


def is_triangle_free(g):
    masks = g.masks
    return all(masks[u] & masks[v] == 0 for u, v in g.edges())


def girth(g):
    """Length of a shortest cycle, INF for forests"""
    length = nx.girth(g.to_networkx())
    return INF if length == float("inf") else int(length)


def _distinct(seq):
    return len(set(seq)) == len(seq)


def is_induced_path(g, seq):
    """True iff seq is a path of g with no chords (repeated vertices give False)"""
    seq = list(seq)
    if not seq or not _distinct(seq):
        return False
    for v in seq:
        g.check_vertex(v)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if g.has_edge(seq[i], seq[j]) != (j == i + 1):
                return False
    return True


def is_induced_cycle(g, seq):
    """True iff seq, read cyclically, is a cycle of g with no chords"""
    seq = list(seq)
    k = len(seq)
    if k < 3 or not _distinct(seq):
        return False
    for v in seq:
        g.check_vertex(v)
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(seq[i], seq[j]) != consecutive:
                return False
    return True


def induced_path_order(g, vertices, start=None):
    """
    Order `vertices` along the path they induce.

    Parameters:
    g (Graph): Host graph
    vertices (iterable): Vertex set expected to induce a path
    start (int): End to start from (the smaller end when omitted)

    Returns:
    tuple or None: Vertices in path order, None when G[vertices] is not a path
    or `start` is not one of its ends
    """
    members = set(vertices)
    if not members:
        return None
    sub = mask_of(members)
    degree = {v: bin(g.masks[v] & sub).count("1") for v in members}
    ends = sorted(v for v in members if degree[v] <= 1)
    if any(d > 2 for d in degree.values()) or not ends:
        return None
    if start is None:
        start = ends[0]
    if start not in ends:
        return None
    order = [start]
    seen = 1 << start
    while True:
        nxt = g.masks[order[-1]] & sub & ~seen
        if not nxt:
            break
        v = nxt.bit_length() - 1
        order.append(v)
        seen |= 1 << v
    return tuple(order) if len(order) == len(members) else None
