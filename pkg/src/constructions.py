import functools
import logging
from dataclasses import dataclass, field
from itertools import combinations

from src import config
from src.chroma import ChromaticSolver
from src.errors import BudgetExhausted, PhiRangeError, PreconditionError
from src.graph_core import (bfs_layers, is_induced_cycle, is_triangle_free, iter_bits, mask_of,
                            neighborhood)
from src.holes import HoleEnumerator, odd_hole_min_length
from src.structures import (Cable, Levelling, MulticoverCert, TrellisEmbedding, classify_cable,
                            trellis_cross_type, verify_trellis)

SUCCESS = "success"
THRESHOLD_NOT_MET = "threshold_not_met"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class ConstructionResult:
    outcome: str
    witness: object = None
    stage: object = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    @classmethod
    def success(cls, witness, **extra):
        return cls(SUCCESS, witness=witness, extra=extra)

    @classmethod
    def threshold_not_met(cls, stage, detail, **extra):
        return cls(THRESHOLD_NOT_MET, stage=stage, detail=detail, extra=extra)

    @classmethod
    def budget_exhausted(cls, detail):
        return cls(BUDGET_EXHAUSTED, detail=detail)

    @property
    def ok(self):
        return self.outcome == SUCCESS


def budgeted(method):
    """Turn a BudgetExhausted escaping a procedure into a budget_exhausted result"""
    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        try:
            return method(self, *args, **kwargs)
        except BudgetExhausted as e:
            self.logger.warning(f"{method.__name__}: {e}")
            return ConstructionResult.budget_exhausted(str(e))
    return wrapper


def _require_triangle_free(g):
    if not is_triangle_free(g):
        raise PreconditionError("graph is not triangle-free")


class ConstructionEngine:
    """
    Hole finders and certificate builders driven by local chromatic structure.

    All scans go by ascending vertex id and all set choices take the smallest
    id, so results are reproducible for a fixed input. One chromatic solver
    (and its cache) is shared by every procedure run on the engine.
    """

    def __init__(self, budget=config.DEFAULT_BUDGET):
        self.budget = budget
        self.solver = ChromaticSolver(budget)
        self.logger = logging.getLogger("holescope.constructions")

    def chi(self, g, vertices):
        return self.solver.chi_of_set(g, vertices)

    # ------------------------------------------------------------------
    # Levellings
    # ------------------------------------------------------------------

    def build_levelling(self, g):
        """
        BFS levelling whose base carries at least half of chi(g).

        The root is the smallest vertex of the first component of maximum
        chromatic number; the BFS layers are cut at the layer of maximum chi
        (the earliest on ties).

        Returns:
        Levelling: (L_0, ..., L_k)
        """
        if g.n == 0:
            raise PreconditionError("levelling of the null graph")
        components = g.components()
        chis = [self.chi(g, comp) for comp in components]
        comp = components[chis.index(max(chis))]
        layers = bfs_layers(g, min(comp))
        layer_chis = [self.chi(g, layer) for layer in layers]
        k = layer_chis.index(max(layer_chis))
        self.logger.info(f"levelling from {min(comp)}: {len(layers)} layers, base L_{k} with chi {layer_chis[k]}")
        return Levelling(layers[:k + 1])

    # ------------------------------------------------------------------
    # Holes from second neighbourhoods
    # ------------------------------------------------------------------

    @budgeted
    def find_5_hole(self, g):
        """
        5-hole v - s1 - x - y - s2 from an edge xy inside some N^2(v).

        Returns:
        ConstructionResult: witness tuple on success
        """
        _require_triangle_free(g)
        for v in g.vertices():
            sphere = neighborhood(g, v, 2)
            sphere_mask = mask_of(sphere)
            for x in sorted(sphere):
                for y in iter_bits(g.masks[x] & sphere_mask):
                    if y < x:
                        continue
                    s1 = min(iter_bits(g.masks[v] & g.masks[x]))
                    s2 = min(iter_bits(g.masks[v] & g.masks[y]))
                    hole = (v, s1, x, y, s2)
                    if is_induced_cycle(g, hole):
                        return ConstructionResult.success(hole, vertex=v)
        return ConstructionResult.threshold_not_met("scan", "no second neighbourhood contains an edge")

    def _minimal_cover(self, g, candidates, targets):
        """Inclusion-minimal subset of candidates dominating targets, by greedy deletion in id order"""
        cover = sorted(candidates)
        for s in list(cover):
            rest = [u for u in cover if u != s]
            rest_mask = mask_of(rest)
            if all(g.masks[p] & rest_mask for p in targets):
                cover = rest
        return cover

    def _six_hole_from_odd_hole(self, g, v, hole):
        touching = functools.reduce(lambda acc, p: acc | g.masks[p], hole, 0) & g.masks[v]
        cover = self._minimal_cover(g, iter_bits(touching), hole)
        cover_mask = mask_of(cover)
        size = len(hole)
        for s3 in cover:
            private = [idx for idx, p in enumerate(hole) if g.masks[p] & cover_mask == 1 << s3]
            for centre in private:
                p = [hole[(centre + offset) % size] for offset in (-2, -1, 0, 1, 2)]
                s = [min(iter_bits(g.masks[q] & cover_mask)) for q in p]
                shapes = [
                    (v, s[0], p[0], p[1], p[2], s[2]),
                    (v, s[4], p[4], p[3], p[2], s[2]),
                    (v, s[1], p[1], p[2], p[3], s[3]),
                    (s[2], p[0], p[1], s[1], p[3], p[4]),
                    (s[2], p[4], p[3], s[3], p[1], p[0]),
                ]
                for shape in shapes:
                    if is_induced_cycle(g, shape):
                        return shape
        return None

    def _six_hole_by_shape(self, g, v):
        neighbours = g.masks[v]
        sphere = sorted(neighborhood(g, v, 2))
        sphere_mask = mask_of(sphere)
        for p2 in sphere:
            around = [w for w in iter_bits(g.masks[p2] & sphere_mask)]
            for p1, p3 in combinations(around, 2):
                if g.has_edge(p1, p3):
                    continue
                for s1 in iter_bits(g.masks[p1] & neighbours):
                    for s3 in iter_bits(g.masks[p3] & neighbours):
                        shape = (v, s1, p1, p2, p3, s3)
                        if is_induced_cycle(g, shape):
                            return shape
        return None

    @budgeted
    def find_6_hole(self, g):
        """
        6-hole around a vertex v whose second neighbourhood is not bipartite.

        For each such v an odd hole P of G[N^2(v)] and a minimal cover S of P
        inside N(v) are taken; one of the shapes v-s1-p1-p2-p3-s3,
        v-s2-p2-p3-p4-s4 or s3-p1-p2-s2-p4-p5 is then a hole. When no vertex
        qualifies, the shape v-s1-p1-p2-p3-s3 is searched for directly.

        Returns:
        ConstructionResult: witness tuple, with the route taken in extra["route"]
        """
        _require_triangle_free(g)
        for v in g.vertices():
            sphere = sorted(neighborhood(g, v, 2))
            if self.chi(g, sphere) <= 2:
                continue
            sub, original = g.induced_subgraph(sphere)
            odd = odd_hole_min_length(sub, 5, lmax=max(5, sub.n), budget=self.budget)
            if odd is None:
                continue
            hole = self._six_hole_from_odd_hole(g, v, [original[i] for i in odd])
            if hole is not None:
                return ConstructionResult.success(hole, vertex=v, route="local-chromatic")
        for v in g.vertices():
            hole = self._six_hole_by_shape(g, v)
            if hole is not None:
                return ConstructionResult.success(hole, vertex=v, route="shape-scan")
        return ConstructionResult.threshold_not_met("scan", "no vertex with chi(N^2(v)) > 2 and no 6-hole shape")

    @budgeted
    def find_ell_hole_c4free(self, g, ell):
        """
        ell-hole through v in a graph with no triangle and no 4-hole.

        Picks the first v with chi(N^2(v)) > 2*ell - 9, shrinks N^2(v) to an
        inclusion-minimal X keeping that bound, grows an induced path of
        ell - 3 vertices of X with pairwise distinct parents in N(v), and
        closes it through v.
        """
        if ell < 5:
            raise PreconditionError(f"ell must be at least 5, got {ell}")
        _require_triangle_free(g)
        if HoleEnumerator(self.budget).find(g, 4) is not None:
            raise PreconditionError("graph has a 4-hole")
        bound = 2 * ell - 9
        for v in g.vertices():
            sphere = sorted(neighborhood(g, v, 2))
            if self.chi(g, sphere) > bound:
                break
        else:
            return ConstructionResult.threshold_not_met(
                "second-neighbourhood", f"no vertex with chi(N^2(v)) > {bound}")
        parent = {u: next(iter_bits(g.masks[u] & g.masks[v])) for u in sphere}
        X = list(sphere)
        for u in sphere:
            rest = [w for w in X if w != u]
            if self.chi(g, rest) > bound:
                X = rest
        self.logger.info(f"ell={ell}: vertex {v}, |N^2(v)|={len(sphere)}, minimal X of size {len(X)}")
        path = self._parent_distinct_path(g, X, parent, ell - 3)
        if path is None:
            return ConstructionResult.threshold_not_met("extension", "extension failed", vertex=v)
        hole = (v, parent[path[0]], *path, parent[path[-1]])
        if not is_induced_cycle(g, hole):
            return ConstructionResult.threshold_not_met("assembly", "assembled cycle has a chord", vertex=v)
        return ConstructionResult.success(hole, vertex=v)

    def _parent_distinct_path(self, g, X, parent, length):
        x_mask = mask_of(X)
        nodes = [0]

        def extend(path, earlier_nbrs, used):
            nodes[0] += 1
            if nodes[0] > self.budget:
                raise BudgetExhausted("path extension", self.budget)
            if len(path) == length:
                return list(path)
            for w in iter_bits(g.masks[path[-1]] & x_mask & ~earlier_nbrs & ~mask_of(path)):
                if parent[w] in used:
                    continue
                found = extend(path + [w], earlier_nbrs | g.masks[path[-1]], used | {parent[w]})
                if found:
                    return found
            return None

        for start in X:
            found = extend([start], 0, {parent[start]})
            if found:
                return found
        return None

    # ------------------------------------------------------------------
    # Trellises
    # ------------------------------------------------------------------

    @budgeted
    def uniform_sub_trellis(self, g, T, ell):
        """
        Largest square block of rows R and columns S (|R| = |S| >= ell) on which
        every cross pair a_{i,j} / b_{i',j} (i < i' in R, j in S) is uniformly
        nonadjacent (type 1) or uniformly adjacent (type 2).

        Returns:
        ConstructionResult: re-indexed TrellisEmbedding, with extra["k"]
        """
        violations = verify_trellis(g, T)
        if violations:
            raise PreconditionError(f"invalid trellis: {violations[0].rule}")
        rows = T.rows()
        columns = [j for j in T.columns() if j >= 1]
        tried = 0
        for m in range(T.t, max(ell, 1) - 1, -1):
            for R in combinations(rows, m):
                tried += 1
                if tried > self.budget:
                    raise BudgetExhausted("uniform sub-trellis", self.budget)
                types = {j: trellis_cross_type(g, T, R, [j]) for j in columns}
                for k in (1, 2):
                    S = [j for j in columns if types[j] == k]
                    if len(S) >= m:
                        sub = self._sub_trellis(T, R, S[:m])
                        if verify_trellis(g, sub):
                            raise PreconditionError("sub-trellis failed to re-verify")
                        return ConstructionResult.success(sub, k=k, rows=list(R), columns=S[:m])
        return ConstructionResult.threshold_not_met("ramsey", f"no uniform block of size {ell}")

    @staticmethod
    def _sub_trellis(T, R, S):
        cols = ([0] if T.extended else []) + list(S)
        new_col = {j: (0 if j == 0 else S.index(j) + 1) for j in cols}
        return TrellisEmbedding(
            x={r + 1: T.x[i] for r, i in enumerate(R)},
            a={new_col[j]: T.a[j] for j in cols},
            b={new_col[j]: T.b[j] for j in cols},
            a_map={(r + 1, new_col[j]): T.a_map[i, j] for r, i in enumerate(R) for j in cols},
            b_map={(r + 1, new_col[j]): T.b_map[i, j] for r, i in enumerate(R) for j in cols},
            extended=T.extended,
            c0=T.c0,
        )

    @staticmethod
    def _decompose(ell, piece):
        """ell = 4p + piece*q with the least q > 0"""
        for q in range(1, 5):
            rest = ell - piece * q
            if rest >= 0 and rest % 4 == 0:
                return rest // 4, q
        return None

    def _trellis_plan(self, T, k, ell, g):
        """Rows needed for an ell-hole and a callable assembling its vertex sequence"""
        X, A, B = T.x, T.a, T.b
        AA, BB = T.a_map, T.b_map

        def P(i):
            return [X[i], AA[i, i + 1], A[i + 1], AA[i + 1, i + 1], X[i + 1]]

        def Q(i):
            if k == 1:
                return [X[i], AA[i, i + 1], A[i + 1], B[i + 1], BB[i + 1, i + 1], X[i + 1]]
            return [X[i], AA[i, i + 1], BB[i + 1, i + 1], X[i + 1]]

        def chained(segments, closing):
            cycle = [X[1]]
            for segment in segments:
                cycle += segment[1:]
            return cycle + list(reversed(closing[1:-1]))

        if ell % 4 == 0:
            p = ell // 4
            return p, lambda: chained([P(i) for i in range(1, p)], [X[1], AA[1, 1], A[1], AA[p, 1], X[p]])
        if k == 2:
            p, q = self._decompose(ell, 3)
            r = p + q
            return r, lambda: chained([Q(i) if i < q else P(i) for i in range(1, r)],
                                      [X[1], AA[1, 1], BB[r, 1], X[r]])
        if ell != 11:
            p, q = self._decompose(ell, 5)
            r = p + q
            return r, lambda: chained([Q(i) if i < q else P(i) for i in range(1, r)],
                                      [X[1], AA[1, 1], A[1], B[1], BB[r, 1], X[r]])
        if not T.extended:
            raise PreconditionError("ell = 11 with k = 1 needs an extended trellis")
        if T.t < 2:
            return 2, None
        if not g.has_edge(AA[1, 0], BB[2, 0]):
            return 2, lambda: chained([Q(1)], [X[1], AA[1, 0], A[0], T.c0, B[0], BB[2, 0], X[2]])
        return 3, lambda: [X[1], AA[1, 0], BB[2, 0], X[2], AA[2, 3], A[3], AA[3, 3], X[3], AA[3, 1], A[1], AA[1, 1]]

    def hole_from_extended_trellis(self, g, T, k, ell):
        """
        Assemble an ell-hole from a trellis uniform of type k.

        Segments P_i = x_i - a_{i,i+1} - a_{i+1} - a_{i+1,i+1} - x_{i+1} (length 4)
        and Q_i (length 5 when k = 1, 3 when k = 2) are chained from x_1 and the
        cycle is closed through column 0 or 1 depending on ell mod 4.

        Returns:
        ConstructionResult: witness tuple of exactly ell vertices
        """
        if ell < 8:
            raise PreconditionError(f"ell must be at least 8, got {ell}")
        if k not in (1, 2):
            raise PreconditionError(f"uniform type must be 1 or 2, got {k}")
        violations = verify_trellis(g, T)
        if violations:
            raise PreconditionError(f"invalid trellis: {violations[0].rule}")
        rows_needed, build = self._trellis_plan(T, k, ell, g)
        if rows_needed > T.t:
            raise PreconditionError(f"ell={ell} needs t >= {rows_needed}, trellis has t={T.t}")
        used = list(range(1, rows_needed + 1))
        if trellis_cross_type(g, T, used, used) != k:
            raise PreconditionError(f"trellis is not uniform of type {k} on rows/columns 1..{rows_needed}")
        hole = tuple(build())
        if len(hole) != ell or not is_induced_cycle(g, hole):
            return ConstructionResult.threshold_not_met(
                "assembly", f"assembled cycle of length {len(hole)} is not an {ell}-hole")
        return ConstructionResult.success(hole, k=k, rows=rows_needed)

    # ------------------------------------------------------------------
    # Cables
    # ------------------------------------------------------------------

    def hole_from_type2_cable(self, g, c):
        """
        (t+3)-hole x_1 - z_1 - ... - z_{t-1} - y_t - v - y_1 through the base of a type 2 cable.

        Returns:
        ConstructionResult: witness tuple
        """
        report = classify_cable(g, c)
        if not report["valid"]:
            raise PreconditionError(f"invalid cable: {report['violations'][0].rule}")
        if c.t < 2:
            raise PreconditionError("type 2 hole assembly needs t >= 2")
        if any(kind != 2 for kind in report["pair_types"].values()):
            raise PreconditionError("cable has a pair that is not type 2")
        if not c.C:
            raise PreconditionError("cable has an empty base")
        v = min(c.C)
        y_last = min(iter_bits(g.masks[v] & mask_of(c.Y[-1])))
        chain = []
        current = y_last
        for i in range(c.t - 2, -1, -1):
            options = g.masks[current] & mask_of(c.z(i, i + 1))
            if not options:
                return ConstructionResult.threshold_not_met("assembly", f"no Z_{i},{i + 1} neighbour of {current}")
            current = min(iter_bits(options))
            chain.insert(0, current)
        y_first = min(iter_bits(g.masks[v] & mask_of(c.Y[0])))
        hole = (c.x[0], *chain, y_last, v, y_first)
        if not is_induced_cycle(g, hole):
            return ConstructionResult.threshold_not_met("assembly", "assembled cycle has a chord")
        return ConstructionResult.success(hole)

    @budgeted
    def monochromatic_subcable(self, g, c, m, n):
        """
        Subcable on m indices whose pairs are all type 1, or else on n indices all type 2.

        Returns:
        ConstructionResult: re-indexed Cable, with extra["type"] and extra["indices"]
        """
        report = classify_cable(g, c)
        if not report["valid"]:
            raise PreconditionError(f"invalid cable: {report['violations'][0].rule}")
        types = report["pair_types"]
        for kind, size in ((1, m), (2, n)):
            tried = 0
            for indices in combinations(range(c.t), size):
                tried += 1
                if tried > self.budget:
                    raise BudgetExhausted("homogeneous index search", self.budget)
                if all(types[pair] == kind for pair in combinations(indices, 2)):
                    sub = c.subcable(indices)
                    check = classify_cable(g, sub)
                    if not check["valid"] or any(t != kind for t in check["pair_types"].values()):
                        raise PreconditionError("subcable failed to re-verify")
                    return ConstructionResult.success(sub, type=kind, indices=list(indices))
        return ConstructionResult.threshold_not_met(
            "ramsey", f"no type 1 set of size {m} and no type 2 set of size {n} among {c.t} indices")

    def cable_type1_to_multicover(self, g, c):
        """Read a type 1 cable as the multicover (x_i, Y_i) of its base"""
        report = classify_cable(g, c)
        if not report["valid"]:
            raise PreconditionError(f"invalid cable: {report['violations'][0].rule}")
        mixed = [pair for pair, kind in report["pair_types"].items() if kind != 1]
        if mixed:
            raise PreconditionError(f"pairs {mixed} are not type 1")
        return MulticoverCert(covers=tuple(zip(c.x, c.Y)), base=c.C, stable=False)

    @budgeted
    def grow_cable(self, g, t, tau, phi):
        """
        Grow a t-cable with base chromatic number above tau, one apex per stage.

        Stage thresholds run backwards from tau_t = tau via
        tau_s = phi(2^s * tau_{s+1} + 1). At stage s the apex x is the base
        vertex with the most chromatic 2-ball inside the base; the sphere at
        distance 2 is split by how each vertex meets the current Y_i, and the
        class of largest chi becomes the new base.

        Returns:
        ConstructionResult: Cable on success; the failing stage otherwise
        """
        _require_triangle_free(g)
        thresholds = [0] * (t + 1)
        thresholds[t] = tau
        try:
            for s in range(t - 1, -1, -1):
                thresholds[s] = phi(2 ** s * thresholds[s + 1] + 1)
        except PhiRangeError as e:
            return ConstructionResult.threshold_not_met(s, "phi range exceeded", error=str(e))
        self.logger.info(f"cable stage thresholds: {thresholds}")
        base = frozenset(g.vertices())
        if self.chi(g, base) <= thresholds[0]:
            return ConstructionResult.threshold_not_met(0, f"chi(G) <= tau_0 = {thresholds[0]}", thresholds=thresholds)
        x, N, Y, Z = [], [], [], {}
        for s in range(t):
            sub, original = g.induced_subgraph(base)
            balls = [(self.chi(sub, neighborhood(sub, i, 2, closed=True)), -original[i]) for i in range(sub.n)]
            best_chi, neg_apex = max(balls)
            apex = -neg_apex
            apex_index = original.index(apex)
            sphere = {original[i] for i in neighborhood(sub, apex_index, 2)}
            apex_nbrs = set(g.adj[apex])
            classes = {}
            for v in sorted(sphere):
                key = tuple(1 if any(y not in apex_nbrs for y in Y[i] if g.has_edge(v, y)) else 2 for i in range(s))
                classes.setdefault(key, set()).add(v)
            if not classes:
                return ConstructionResult.threshold_not_met(s + 1, "empty second neighbourhood", thresholds=thresholds)
            scored = sorted(classes.items(), key=lambda kv: (-self.chi(g, kv[1]), kv[0]))
            key, chosen = scored[0]
            chosen_chi = self.chi(g, chosen)
            self.logger.info(f"stage {s + 1}: apex {apex} (2-ball chi {best_chi}), {len(classes)} classes, "
                             f"kept {key} with chi {chosen_chi}")
            if chosen_chi <= thresholds[s + 1]:
                return ConstructionResult.threshold_not_met(
                    s + 1, f"chi of the kept class {chosen_chi} <= tau_{s + 1} = {thresholds[s + 1]}",
                    thresholds=thresholds)
            for i, c_i in enumerate(key):
                if c_i == 1:
                    Y[i] = Y[i] - apex_nbrs
                else:
                    Z[i, s] = Y[i] - apex_nbrs
                    Y[i] = Y[i] & apex_nbrs
            new_n = frozenset(apex_nbrs & base)
            x.append(apex)
            N.append(new_n)
            Y.append(new_n)
            base = frozenset(chosen)
        cable = Cable(x=x, N=N, Y=Y, C=base, Z=Z)
        report = classify_cable(g, cable)
        if not report["valid"]:
            return ConstructionResult.threshold_not_met("assembly", f"grown cable invalid: {report['violations'][0].rule}")
        return ConstructionResult.success(cable, pair_types=report["pair_types"], thresholds=thresholds)


def _default_engine(budget):
    return ConstructionEngine(budget)


def build_levelling(g, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).build_levelling(g)


def find_5_hole(g, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).find_5_hole(g)


def find_6_hole(g, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).find_6_hole(g)


def find_ell_hole_c4free(g, ell, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).find_ell_hole_c4free(g, ell)


def uniform_sub_trellis(g, T, ell, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).uniform_sub_trellis(g, T, ell)


def hole_from_extended_trellis(g, T, k, ell):
    return _default_engine(config.DEFAULT_BUDGET).hole_from_extended_trellis(g, T, k, ell)


def hole_from_type2_cable(g, c):
    return _default_engine(config.DEFAULT_BUDGET).hole_from_type2_cable(g, c)


def monochromatic_subcable(g, c, m, n, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).monochromatic_subcable(g, c, m, n)


def cable_type1_to_multicover(g, c):
    return _default_engine(config.DEFAULT_BUDGET).cable_type1_to_multicover(g, c)


def grow_cable(g, t, tau, phi, budget=config.DEFAULT_BUDGET):
    return _default_engine(budget).grow_cable(g, t, tau, phi)
