"""Shared fixtures and brute-force oracles for the test modules."""
from itertools import combinations, product

import pytest

from src.generators import canonical_shower_fixture, generate
from src.graph_core import Graph


# ---------------------------------------------------------------------------
# Oracles (independent of the code under test)
# ---------------------------------------------------------------------------

def brute_force_hole_lengths(g, lmax):
    """Sizes of vertex subsets inducing a connected 2-regular subgraph, i.e. holes"""
    adj = [set(g.adj[v]) for v in range(g.n)]
    lengths = set()
    for size in range(4, min(g.n, lmax) + 1):
        if size in lengths:
            continue
        for subset in combinations(range(g.n), size):
            members = set(subset)
            if any(len(adj[v] & members) != 2 for v in subset):
                continue
            seen, stack = {subset[0]}, [subset[0]]
            while stack:
                for w in adj[stack.pop()] & members:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) == size:
                lengths.add(size)
                break
    return lengths


def brute_force_chi(g):
    """Smallest k admitting a proper k-colouring, by trying every assignment"""
    if g.n == 0:
        return 0
    edges = g.edges()
    for k in range(1, g.n + 1):
        for colours in product(range(k), repeat=g.n - 1):
            colouring = (0,) + colours
            if all(colouring[u] != colouring[v] for u, v in edges):
                return k
    return g.n


def has_triangle(g):
    return any(g.has_edge(u, v) and g.has_edge(v, w) and g.has_edge(u, w)
               for u, v, w in combinations(range(g.n), 3))


def random_graph(rng, n, p):
    """Seeded G(n, p) as a holescope Graph"""
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def c5():
    return generate("cycle:5")


@pytest.fixture
def c9():
    return generate("cycle:9")


@pytest.fixture
def petersen():
    return generate("petersen")


@pytest.fixture
def grotzsch():
    return generate("grotzsch")


@pytest.fixture
def c6_shower():
    return canonical_shower_fixture("c6_basic")


@pytest.fixture
def two_jet_shower():
    return canonical_shower_fixture("two_jet")
