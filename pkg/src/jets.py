import logging

from src import config
from src.errors import BudgetExhausted, PreconditionError
from src.graph_core import distances_from, is_induced_path, iter_bits, mask_of
from src.structures import Jet, shower_floor


class JetEnumerator:
    """
    Exhaustive DFS over induced paths from the head to the drain inside a vertex set.

    There is no pruning beyond inducedness and the length cap, so the
    enumeration doubles as the reference for any path-based query.
    """

    def __init__(self, budget=config.DEFAULT_BUDGET):
        self.budget = budget
        self.nodes = 0
        self.logger = logging.getLogger("holescope.jets")

    def jets(self, g, vertex_set, head, drain, cap=config.DEFAULT_JET_CAP, edge_ok=None):
        """
        Yield every induced head-drain path of G[vertex_set] with at most `cap` edges.

        Parameters:
        g (Graph): Host graph
        vertex_set (iterable): Allowed vertices (must contain head and drain)
        head (int): Start vertex
        drain (int): End vertex
        cap (int): Maximum path length in edges
        edge_ok (callable): Optional filter on path edges (u, w)
        """
        self.nodes = 0
        allowed = mask_of(vertex_set)
        yield from self._walk(g, [head], 1 << head, 0, allowed, drain, cap, edge_ok)

    def _walk(self, g, path, path_mask, earlier_nbrs, allowed, drain, cap, edge_ok):
        self.nodes += 1
        if self.nodes > self.budget:
            self.logger.warning(f"jet enumeration exceeded {self.budget} nodes")
            raise BudgetExhausted("jet enumeration", self.budget)
        last = path[-1]
        if last == drain:
            yield tuple(path)
            return
        if len(path) - 1 >= cap:
            return
        for w in iter_bits(g.masks[last] & allowed & ~path_mask & ~earlier_nbrs):
            if edge_ok is not None and not edge_ok(last, w):
                continue
            path.append(w)
            yield from self._walk(g, path, path_mask | 1 << w, earlier_nbrs | g.masks[last],
                                  allowed, drain, cap, edge_ok)
            path.pop()


def _mat_filter(S, M):
    """Edge filter for M-jets: no edge between L_k - M and L_{k-1}"""
    outside = S.base - frozenset(M)
    above = S.levels[-2] if S.k >= 1 else frozenset()

    def edge_ok(u, w):
        return not ((u in outside and w in above) or (w in outside and u in above))
    return edge_ok


def enumerate_jets(g, S, M=None, cap=config.DEFAULT_JET_CAP, budget=config.DEFAULT_BUDGET):
    """All jets of the shower S (M-jets when a mat M is given), as Jet records"""
    edge_ok = _mat_filter(S, M) if M is not None else None
    enumerator = JetEnumerator(budget)
    return [Jet(p) for p in enumerator.jets(g, S.vertex_set, S.head, S.drain, cap, edge_ok)]


def jetset(g, S, M=None, cap=config.DEFAULT_JET_CAP, budget=config.DEFAULT_BUDGET):
    """
    Set of jet lengths of a shower, restricted to M-jets when M is given.

    Parameters:
    g (Graph): Host graph
    S (Shower): The shower
    M (set): Optional mat (subset of the floor)
    cap (int): Longest jet length considered

    Returns:
    frozenset: Jet lengths
    """
    return frozenset(j.length for j in enumerate_jets(g, S, M, cap, budget))


def wubend_jetset(g, B, cap=config.DEFAULT_JET_CAP, budget=config.DEFAULT_BUDGET):
    """Jet lengths of a w-bend: induced head-drain paths of G[V + V(U)]"""
    head = next(iter(B.levels[0]))
    vertex_set = B.vertex_set | set(B.U)
    enumerator = JetEnumerator(budget)
    return frozenset(len(p) - 1 for p in enumerator.jets(g, vertex_set, head, B.drain, cap))


def jet_metrics(g, S, J):
    """
    Tail length, waste and monotonicity of a jet.

    The tail is the minimal subpath from the last L_{k-1} vertex of J to the
    drain. The waste is the number of non-tail edges with an end outside L_k,
    less k - 1. monotone_lambda is the smallest lambda <= k for which J has
    exactly one vertex in each L_i with i < k - lambda.

    Returns:
    dict: {"tail_len", "waste", "monotone_lambda"}
    """
    path = J.path
    if S.k < 1:
        raise PreconditionError("jet metrics need a shower with k >= 1")
    if (path[0] != S.head or path[-1] != S.drain or not set(path) <= S.vertex_set
            or not is_induced_path(g, path)):
        raise PreconditionError("path is not a jet of the shower")
    k = S.k
    level = [S.level_of(v) for v in path]
    last_parent = max(idx for idx, lv in enumerate(level) if lv == k - 1)
    tail_len = len(path) - 1 - last_parent
    spent = sum(1 for idx in range(last_parent) if level[idx] != k or level[idx + 1] != k)
    counts = [level.count(i) for i in range(k + 1)]
    monotone_lambda = next(lam for lam in range(k + 1) if all(counts[i] == 1 for i in range(k - lam)))
    return {"tail_len": tail_len, "waste": spent - (k - 1), "monotone_lambda": monotone_lambda}


def longest_run(values):
    values = sorted(set(values))
    best = run = 1 if values else 0
    for a, b in zip(values, values[1:]):
        run = run + 1 if b == a + 1 else 1
        best = max(best, run)
    return best


def solidity(values):
    """
    Density and solidity of a set of integers.

    Dense: no two consecutive integers both missing between min and max.
    n-solid (n >= 2): contains n consecutive integers; 1-solid: two members
    differ by 1 or by 3.

    Returns:
    dict: {"dense": bool, "max_solid": int, "longest_run": int}
    """
    members = sorted(set(values))
    dense = all(b - a <= 2 for a, b in zip(members, members[1:]))
    run = longest_run(members)
    if run >= 2:
        max_solid = run
    else:
        present = set(members)
        max_solid = 1 if any(a + 3 in present for a in members) else 0
    return {"dense": dense, "max_solid": max_solid, "longest_run": run}


def is_complete(lengths, nu):
    """True iff the set contains nu consecutive integers"""
    return longest_run(lengths) >= nu


def mat_size(g, M):
    """Largest d_G(w1, w2) over pairs in one component of G[M] (0 for fewer than two vertices)"""
    if not M:
        return 0
    sub, original = g.induced_subgraph(M)
    best = 0
    for comp in sub.components():
        members = sorted(original[i] for i in comp)
        for idx, u in enumerate(members):
            d = distances_from(g, u)
            best = max([best] + [d[w] for w in members[idx + 1:]])
    return best


def _check_wand_in_shower(S, W):
    if W.t > S.k:
        raise PreconditionError(f"wand of length {W.t} does not fit a shower with k={S.k}")
    for i, part in enumerate(W.sets):
        if not part <= S.levels[i]:
            raise PreconditionError(f"wand set W_{i} is not inside L_{i}")


def up_neighbours(g, S, W):
    """
    T_i for 0 <= i < t: vertices of L_i outside the wand that are up-neighbours
    of some vertex of W_{i+1} (all their wand neighbours lie in W_{i+1}).
    """
    _check_wand_in_shower(S, W)
    wand_mask = mask_of(W.vertex_set)
    T = {}
    for i in range(W.t):
        upper = mask_of(W.sets[i + 1])
        T[i] = frozenset(
            v for v in S.levels[i]
            if v not in W.vertex_set and g.masks[v] & upper and (g.masks[v] & wand_mask) & ~upper == 0
        )
    return T


def wand_shadow(g, S, W, M):
    """
    Vertices of the mat M at the bottom of some post whose top is an up-neighbour.

    Posts are monotone paths from a top in T down to L_k whose other vertices
    neither lie in nor touch the wand; reachability is propagated level by level.

    Returns:
    frozenset: The shadow of W over M
    """
    M = frozenset(M)
    _check_wand_in_shower(S, W)
    if not M <= shower_floor(g, S):
        raise PreconditionError("mat must be a subset of the floor")
    wand = W.vertex_set
    wand_mask = mask_of(wand)
    T = up_neighbours(g, S, W)
    reached = frozenset()
    for j in range(S.k + 1):
        reached_mask = mask_of(reached)
        below = {y for y in S.levels[j]
                 if y not in wand and not g.masks[y] & wand_mask and g.masks[y] & reached_mask}
        reached = frozenset(below | T.get(j, frozenset()))
    return M & reached
