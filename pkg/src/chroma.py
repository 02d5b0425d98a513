import json
import logging
from dataclasses import dataclass, field

import numpy as np

from src import config
from src.errors import BudgetExhausted, PhiRangeError
from src.graph_core import iter_bits, mask_of, neighborhood

PHI_POLICIES = ("fail", "clamp")


class PhiTable:
    """
    Finite non-decreasing function kappa -> phi(kappa) on 0..K.

    Lookups past K either fail (PhiRangeError) or clamp to the last value.
    """

    def __init__(self, values, policy="fail"):
        values = tuple(int(v) for v in values)
        if not values:
            raise ValueError("phi table needs at least one value")
        if any(v < 0 for v in values):
            raise ValueError("phi values must be nonnegative")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError("phi table must be non-decreasing")
        if policy not in PHI_POLICIES:
            raise ValueError(f"unknown out-of-range policy {policy!r}")
        self.values = values
        self.policy = policy

    @classmethod
    def from_json(cls, text, policy="fail"):
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
            raise ValueError("phi table JSON must be an array of nonnegative integers")
        return cls(data, policy)

    @classmethod
    def load(cls, path, policy="fail"):
        with open(path) as f:
            return cls.from_json(f.read(), policy)

    @classmethod
    def identity(cls, size, policy="fail"):
        return cls(range(size), policy)

    @classmethod
    def constant(cls, value, size=1, policy="clamp"):
        return cls([value] * size, policy)

    def __call__(self, kappa):
        if kappa < 0:
            raise ValueError(f"phi argument must be nonnegative, got {kappa}")
        if kappa < len(self.values):
            return self.values[kappa]
        if self.policy == "clamp":
            return self.values[-1]
        raise PhiRangeError(kappa, len(self.values))

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return f"PhiTable({list(self.values)}, policy={self.policy!r})"


@dataclass
class ControlReport:
    checked: int
    exhaustive: bool
    violations: list = field(default_factory=list)
    seed: int = None

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            "checked": self.checked,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "violations": [dict(v, vertices=list(v["vertices"])) for v in self.violations],
        }


class ChromaticSolver:
    """
    Exact chromatic number by DSATUR branch and bound.

    Each connected component is solved separately: a bipartiteness check, then
    a DSATUR greedy colouring for the upper bound and a greedy clique for the
    lower bound, then exhaustive search for anything in between. Results are
    cached per induced component.
    """

    def __init__(self, budget=config.DEFAULT_BUDGET):
        self.budget = budget
        self.nodes = 0
        self._cache = {}
        self.logger = logging.getLogger("holescope.chroma")

    def chromatic_number(self, g):
        return self.chi_of_set(g, range(g.n))

    def chi_of_set(self, g, vertices):
        """
        Chromatic number of the subgraph induced on `vertices`.

        Parameters:
        g (Graph): Host graph
        vertices (iterable): Vertex ids of g

        Returns:
        int: chi(G[vertices]), 0 for the empty set
        """
        vertices = set(vertices)
        for v in vertices:
            g.check_vertex(v)
        remaining = mask_of(vertices)
        best = 0
        self.nodes = 0
        while remaining:
            root = (remaining & -remaining).bit_length() - 1
            comp = 1 << root
            frontier = comp
            while frontier:
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= g.masks[u]
                frontier = nxt & remaining & ~comp
                comp |= frontier
            remaining &= ~comp
            key = (comp, tuple(g.masks[v] & comp for v in iter_bits(comp)))
            if key not in self._cache:
                self._cache[key] = self._solve_component(g, comp)
            best = max(best, self._cache[key])
        return best

    def _solve_component(self, g, comp):
        verts = list(iter_bits(comp))
        k = len(verts)
        if k == 1:
            return 1
        index = {v: i for i, v in enumerate(verts)}
        nbrs = [[index[w] for w in iter_bits(g.masks[v] & comp)] for v in verts]
        if self._is_bipartite(nbrs):
            return 2
        ub = self._dsatur_greedy(nbrs)
        lb = max(3, self._greedy_clique(nbrs))
        if lb >= ub:
            return ub
        chi = self._branch_and_bound(nbrs, ub, lb)
        self.logger.debug(f"component of {k} vertices: chi={chi} (bounds {lb}..{ub}, {self.nodes} nodes)")
        return chi

    @staticmethod
    def _is_bipartite(nbrs):
        side = [-1] * len(nbrs)
        side[0] = 0
        queue = [0]
        for u in queue:
            for w in nbrs[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return False
        return True

    @staticmethod
    def _greedy_clique(nbrs):
        adj = [set(a) for a in nbrs]
        best = 1
        order = sorted(range(len(nbrs)), key=lambda v: (-len(nbrs[v]), v))
        for v in order:
            clique = [v]
            candidates = sorted(adj[v], key=lambda u: (-len(nbrs[u]), u))
            for u in candidates:
                if all(u in adj[c] for c in clique):
                    clique.append(u)
            best = max(best, len(clique))
        return best

    @staticmethod
    def _dsatur_greedy(nbrs):
        k = len(nbrs)
        colors = [-1] * k
        deg = [len(a) for a in nbrs]
        seen = [set() for _ in range(k)]
        for _ in range(k):
            v = max((u for u in range(k) if colors[u] < 0), key=lambda u: (len(seen[u]), deg[u], -u))
            c = 0
            while c in seen[v]:
                c += 1
            colors[v] = c
            for w in nbrs[v]:
                seen[w].add(c)
        return max(colors) + 1

    def _branch_and_bound(self, nbrs, ub, lb):
        k = len(nbrs)
        colors = [-1] * k
        counts = [[0] * ub for _ in range(k)]
        sat = [0] * k
        deg = [len(a) for a in nbrs]
        best = ub

        def assign(v, c, delta):
            colors[v] = c if delta > 0 else -1
            for w in nbrs[v]:
                before = counts[w][c]
                counts[w][c] = before + delta
                if before == 0 and delta > 0:
                    sat[w] += 1
                elif before == 1 and delta < 0:
                    sat[w] -= 1

        def search(colored, used):
            nonlocal best
            self.nodes += 1
            if self.nodes > self.budget:
                self.logger.warning(f"chromatic search exceeded {self.budget} nodes")
                raise BudgetExhausted("chromatic number", self.budget)
            if colored == k:
                best = used
                return best <= lb
            v = max((u for u in range(k) if colors[u] < 0), key=lambda u: (sat[u], deg[u], -u))
            c = 0
            while c <= min(used, best - 2):
                if counts[v][c] == 0:
                    assign(v, c, +1)
                    done = search(colored + 1, max(used, c + 1))
                    assign(v, c, -1)
                    if done:
                        return True
                c += 1
            return False

        search(0, 0)
        return best


def chromatic_number(g, budget=config.DEFAULT_BUDGET):
    return ChromaticSolver(budget).chromatic_number(g)


def chi_of_set(g, vertices, budget=config.DEFAULT_BUDGET):
    return ChromaticSolver(budget).chi_of_set(g, vertices)


def chi_rho(g, rho, solver=None):
    """Maximum over v of chi of the closed rho-ball around v (0 for the null graph)"""
    solver = solver or ChromaticSolver()
    return max((solver.chi_of_set(g, neighborhood(g, v, rho, closed=True)) for v in g.vertices()), default=0)


def _random_connected_subset(g, rng):
    start = int(rng.integers(g.n))
    target = int(rng.integers(1, g.n + 1))
    chosen = {start}
    frontier = set(g.adj[start])
    while len(chosen) < target and frontier:
        v = sorted(frontier)[int(rng.integers(len(frontier)))]
        chosen.add(v)
        frontier.discard(v)
        frontier.update(w for w in g.adj[v] if w not in chosen)
    return tuple(sorted(chosen))


def check_controlled(g, rho, phi, budget=config.DEFAULT_CONTROL_BUDGET, seed=config.DEFAULT_SEED,
                     samples=config.DEFAULT_CONTROL_SAMPLES, solver=None):
    """
    Check chi(H) <= phi(chi^rho(H)) over induced subgraphs H of g.

    Parameters:
    g (Graph): Host graph
    rho (int): Radius for the local chromatic number
    phi (PhiTable): Control function
    budget (int): Enumerate all subsets when 2^n is at most this
    seed (int): Seed for the sampling mode
    samples (int): Number of connected random subgraphs in sampling mode

    Returns:
    ControlReport: Violations found, with the count of subgraphs checked
    """
    logger = logging.getLogger("holescope.chroma")
    solver = solver or ChromaticSolver()
    exhaustive = 2 ** g.n <= budget
    if exhaustive:
        subsets = (tuple(iter_bits(mask)) for mask in range(1, 2 ** g.n))
    elif g.n == 0:
        subsets = iter(())
    else:
        rng = np.random.default_rng(seed)
        subsets = (_random_connected_subset(g, rng) for _ in range(samples))
    report = ControlReport(checked=0, exhaustive=exhaustive, seed=None if exhaustive else seed)
    for subset in subsets:
        h, _ = g.induced_subgraph(subset)
        chi = solver.chromatic_number(h)
        local = chi_rho(h, rho, solver)
        bound = phi(local)
        report.checked += 1
        if chi > bound:
            report.violations.append({"vertices": subset, "chi": chi, "chi_rho": local, "bound": bound})
    logger.info(f"control check: {report.checked} subgraphs, {len(report.violations)} violations "
                f"({'exhaustive' if exhaustive else f'sampled, seed {seed}'})")
    return report
