"""
Layered scaffolds (levellings, showers, bends, wands) and labelled substructure
certificates (trellises, covers, cables) with their validity checkers.

Verifiers return lists of Violation records naming the broken rule and the
vertices that witness it; an empty list means the certificate is valid.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations

from src.errors import CertificateError, PreconditionError
from src.graph_core import dist, induced_path_order, is_induced_path, iter_bits, mask_of

logger = logging.getLogger("holescope.structures")


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: tuple = ()
    detail: str = ""

    def to_dict(self):
        return {"rule": self.rule, "witness": list(self.witness), "detail": self.detail}


def _frozen_levels(levels):
    return tuple(frozenset(level) for level in levels)


@dataclass(frozen=True)
class Levelling:
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", _frozen_levels(self.levels))
        if not self.levels:
            raise CertificateError("a levelling needs at least the head level L_0")

    @property
    def k(self):
        return len(self.levels) - 1

    @property
    def head(self):
        return next(iter(self.levels[0])) if len(self.levels[0]) == 1 else None

    @property
    def base(self):
        return self.levels[-1]

    @property
    def vertex_set(self):
        return frozenset().union(*self.levels)

    def level_of(self, v):
        for i, level in enumerate(self.levels):
            if v in level:
                return i
        return None

    def height(self, v):
        """k - i for v in L_i"""
        i = self.level_of(v)
        if i is None:
            raise PreconditionError(f"vertex {v} is not in the levelling")
        return self.k - i


@dataclass(frozen=True)
class Shower(Levelling):
    drain: int = None

    @property
    def levelling(self):
        return Levelling(self.levels)


@dataclass(frozen=True)
class Jet:
    path: tuple

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))

    @property
    def length(self):
        return len(self.path) - 1


@dataclass(frozen=True)
class TrellisEmbedding:
    """
    Named vertices of a (possibly extended) t-trellis.

    Rows i and columns j are 1-based; column 0 exists only when extended.
    a_map and b_map are keyed by (i, j).
    """
    x: dict
    a: dict
    b: dict
    a_map: dict
    b_map: dict
    extended: bool = False
    c0: int = None

    @property
    def t(self):
        return len(self.x)

    def rows(self):
        return sorted(self.x)

    def columns(self):
        return sorted(self.a)

    def named_vertices(self):
        named = list(self.x.values()) + list(self.a.values()) + list(self.b.values())
        named += list(self.a_map.values()) + list(self.b_map.values())
        if self.extended:
            named.append(self.c0)
        return named

    def required_edges(self):
        edges = []
        for j in self.columns():
            if j == 0:
                edges += [(self.a[0], self.c0), (self.c0, self.b[0])]
            else:
                edges.append((self.a[j], self.b[j]))
            for i in self.rows():
                edges += [(self.x[i], self.a_map[i, j]), (self.x[i], self.b_map[i, j]),
                          (self.a_map[i, j], self.a[j]), (self.b_map[i, j], self.b[j])]
        return edges


@dataclass(frozen=True)
class MulticoverCert:
    covers: tuple  # (apex, frozenset N)
    base: frozenset
    stable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "covers", tuple((x, frozenset(n)) for x, n in self.covers))
        object.__setattr__(self, "base", frozenset(self.base))


@dataclass(frozen=True)
class Cable:
    """t-cable with 0-based indices; Z is keyed by (i, j) with i < j, absent keys are empty"""
    x: tuple
    N: tuple
    Y: tuple
    C: frozenset
    Z: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "N", _frozen_levels(self.N))
        object.__setattr__(self, "Y", _frozen_levels(self.Y))
        object.__setattr__(self, "C", frozenset(self.C))
        object.__setattr__(self, "Z", {key: frozenset(v) for key, v in self.Z.items() if v})

    @property
    def t(self):
        return len(self.x)

    def z(self, i, j):
        return self.Z.get((i, j), frozenset())

    def subcable(self, indices):
        """Cable on the given index subset, renumbered in ascending order"""
        idx = sorted(indices)
        return Cable(
            x=[self.x[i] for i in idx],
            N=[self.N[i] for i in idx],
            Y=[self.Y[i] for i in idx],
            C=self.C,
            Z={(a, b): self.z(idx[a], idx[b]) for a, b in combinations(range(len(idx)), 2)},
        )


@dataclass(frozen=True)
class WUBend:
    """Levelling plus a drain path U = (w, ..., s); kind is "w" or "u"."""
    levels: tuple
    U: tuple
    kind: str = "w"

    def __post_init__(self):
        object.__setattr__(self, "levels", _frozen_levels(self.levels))
        object.__setattr__(self, "U", tuple(self.U))
        if not self.levels:
            raise CertificateError("a bend needs at least the head level L_0")
        if not self.U:
            raise CertificateError("a bend needs a nonempty drain path U")
        if self.kind not in ("w", "u"):
            raise CertificateError(f"unknown bend kind {self.kind!r}")

    @property
    def k(self):
        return len(self.levels) - 1

    @property
    def drain(self):
        return self.U[-1]

    @property
    def vertex_set(self):
        return frozenset().union(*self.levels)


@dataclass(frozen=True)
class Wand:
    sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "sets", _frozen_levels(self.sets))

    @property
    def t(self):
        return len(self.sets) - 1

    @property
    def vertex_set(self):
        return frozenset().union(*self.sets)


# ---------------------------------------------------------------------------
# Levellings and showers
# ---------------------------------------------------------------------------

def _check_ids(g, vertices):
    for v in vertices:
        g.check_vertex(v)


def _levelling_violations(g, levels, parents_upto):
    """Shared levelling axioms; levels 1..parents_upto must have parents."""
    violations = []
    owner = {}
    for i, level in enumerate(levels):
        _check_ids(g, level)
        for v in sorted(level):
            if v in owner:
                violations.append(Violation("levels-overlap", (v,), f"in L_{owner[v]} and L_{i}"))
            else:
                owner[v] = i
    if len(levels[0]) != 1:
        violations.append(Violation("head-not-unique", tuple(sorted(levels[0])), f"|L_0| = {len(levels[0])}"))
    masks = [mask_of(level) for level in levels]
    for i in range(1, parents_upto + 1):
        for v in sorted(levels[i]):
            if not g.masks[v] & masks[i - 1]:
                violations.append(Violation("orphan", (v,), f"no neighbour in L_{i - 1}"))
    for i, level in enumerate(levels):
        far = 0
        for j in range(i + 2, len(levels)):
            far |= masks[j]
        for v in sorted(level):
            for w in iter_bits(g.masks[v] & far):
                violations.append(Violation("skip-edge", (v, w), f"L_{i} to L_{owner.get(w)}"))
    return violations


def verify_levelling(g, L):
    """
    Check the levelling axioms.

    Parameters:
    g (Graph): Host graph
    L (Levelling): Candidate levelling

    Returns:
    list: Violations (empty when valid)
    """
    return _levelling_violations(g, L.levels, L.k)


def shower_floor(g, S):
    """Vertices of L_k with a neighbour in L_{k-1}"""
    if S.k == 0:
        return frozenset()
    above = mask_of(S.levels[-2])
    return frozenset(v for v in S.base if g.masks[v] & above)


def _unstable_levels(g, levels, indices):
    violations = []
    for i in indices:
        level_mask = mask_of(levels[i])
        for v in sorted(levels[i]):
            for w in iter_bits(g.masks[v] & level_mask):
                if v < w:
                    violations.append(Violation("unstable-level", (v, w), f"edge inside L_{i}"))
    return violations


def verify_shower(g, S, lam=None):
    """
    Check the shower axioms, optionally with stability.

    Parameters:
    g (Graph): Host graph
    S (Shower): Candidate shower
    lam (int or "all"): Also require L_i stable for k - lam <= i <= k - 1 ("all" for full stability)

    Returns:
    list: Violations (empty when valid)
    """
    violations = _levelling_violations(g, S.levels, S.k - 1)
    if S.drain not in S.base:
        violations.append(Violation("drain-outside-base", (S.drain,) if S.drain is not None else (), "drain not in L_k"))
    base = sorted(S.base)
    if base:
        sub, original = g.induced_subgraph(base)
        if len(sub.components()) > 1:
            violations.append(Violation("base-disconnected", tuple(base), "G[L_k] is not connected"))
    else:
        violations.append(Violation("base-disconnected", (), "L_k is empty"))
    if lam is not None:
        lam = S.k if lam == "all" else lam
        if S.k < lam:
            violations.append(Violation("too-short", (), f"k = {S.k} < lambda = {lam}"))
        violations += _unstable_levels(g, S.levels, range(max(0, S.k - lam), S.k))
    if not violations and S.k >= 1 and not shower_floor(g, S):
        logger.warning("shower has an empty floor")
    return violations


def verify_recirculator(g, S, R):
    """
    True iff R is a recirculator: an induced drain-head path whose interior avoids
    the shower's vertex set and has no neighbours there except the drain and head.
    """
    R = tuple(R)
    head = S.head
    if len(R) < 2 or {R[0], R[-1]} != {S.drain, head}:
        raise PreconditionError("recirculator must have ends drain and head")
    if not is_induced_path(g, R):
        return False
    vertex_set = S.vertex_set
    outside = mask_of(vertex_set - {S.drain, head})
    for r in R[1:-1]:
        if r in vertex_set or g.masks[r] & outside:
            return False
    return True


def is_monotone_path(g, L, P):
    """P is a path of G[V] whose ends lie in L_h, L_j and whose length is |j - h|"""
    P = tuple(P)
    if not P or not set(P) <= L.vertex_set:
        return False
    if any(not g.has_edge(u, v) for u, v in zip(P, P[1:])) or len(set(P)) != len(P):
        return False
    return len(P) - 1 == abs(L.level_of(P[-1]) - L.level_of(P[0]))


def contained_in(inner, outer):
    """
    Containment of showers and bends: same drain, L_i' inside L_i, and the
    inner bend's drain path inside L_k (shower host) or inside L_k plus the
    outer drain path (w-bend host).
    """
    if inner.drain != outer.drain or len(inner.levels) != len(outer.levels):
        return False
    if not all(a <= b for a, b in zip(inner.levels, outer.levels)):
        return False
    if isinstance(inner, WUBend):
        room = set(outer.base) if isinstance(outer, Shower) else set(outer.levels[-1]) | set(outer.U)
        return set(inner.U) <= room
    return isinstance(outer, Shower)


# ---------------------------------------------------------------------------
# Trellises
# ---------------------------------------------------------------------------

def _trellis_index_check(T):
    columns = T.columns()
    expected_columns = list(range(0 if T.extended else 1, T.t + 1))
    if columns != expected_columns or sorted(T.b) != expected_columns:
        raise CertificateError(f"trellis columns {columns} do not match t={T.t}")
    if T.rows() != list(range(1, T.t + 1)):
        raise CertificateError("trellis rows must be numbered 1..t")
    for i in T.rows():
        for j in columns:
            if (i, j) not in T.a_map or (i, j) not in T.b_map:
                raise CertificateError(f"trellis index maps incomplete at ({i}, {j})")
    if T.extended and T.c0 is None:
        raise CertificateError("extended trellis without c0")


def verify_trellis(g, T):
    """
    Check the (extended) trellis conditions.

    The only edges of g among named vertices beyond the required ones may be
    of the form a_{x,j} - b_{x',j} within one column.
    """
    _trellis_index_check(T)
    named = T.named_vertices()
    _check_ids(g, named)
    violations = []
    seen = set()
    for v in named:
        if v in seen:
            violations.append(Violation("duplicate-vertex", (v,), "named twice"))
        seen.add(v)
    required = {frozenset(e) for e in T.required_edges()}
    for u, v in T.required_edges():
        if not g.has_edge(u, v):
            violations.append(Violation("missing-edge", (u, v), "required trellis edge absent"))
    column_of_a = {v: j for (i, j), v in T.a_map.items()}
    column_of_b = {v: j for (i, j), v in T.b_map.items()}
    apexes = set(T.x.values())
    named_mask = mask_of(seen)
    for u in sorted(seen):
        for w in iter_bits(g.masks[u] & named_mask):
            if w <= u or frozenset((u, w)) in required:
                continue
            if u in column_of_a and w in column_of_b and column_of_a[u] == column_of_b[w]:
                continue
            if w in column_of_a and u in column_of_b and column_of_a[w] == column_of_b[u]:
                continue
            if u in apexes and w in apexes:
                violations.append(Violation("x-not-stable", (u, w), "edge inside X"))
            else:
                violations.append(Violation("forbidden-edge", (u, w), "extra edge not of form a_{x,j} - b_{x',j}"))
    return violations


def trellis_cross_type(g, T, rows, columns):
    """
    Uniform type of the cross pairs a_{i,j} / b_{i',j} over i < i' in rows and j in columns.

    Returns:
    int or None: 1 (all nonadjacent), 2 (all adjacent), None (mixed)
    """
    kinds = {g.has_edge(T.a_map[i, j], T.b_map[i2, j]) for i, i2 in combinations(sorted(rows), 2) for j in columns}
    if kinds == {False}:
        return 1
    if kinds == {True}:
        return 2
    return None if kinds else 1


# ---------------------------------------------------------------------------
# Covers and cables
# ---------------------------------------------------------------------------

def verify_multicover(g, M):
    """
    Check that each (x, N_x) is a cover of the shared base and that no apex sees
    another cover; with the stable flag, also no edges between distinct N-sets.
    """
    violations = []
    base = sorted(M.base)
    _check_ids(g, base)
    apexes = [x for x, _ in M.covers]
    if len(set(apexes)) != len(apexes):
        violations.append(Violation("duplicate-apex", tuple(apexes), "apexes must be distinct"))
    for x, N in M.covers:
        _check_ids(g, [x, *N])
        for v in sorted(N):
            if not g.has_edge(x, v):
                violations.append(Violation("N-not-neighbours", (x, v), "N_x must lie in N(x)"))
        overlap = M.base & (N | {x})
        if overlap:
            violations.append(Violation("C-overlaps-cover", tuple(sorted(overlap)), f"apex {x}"))
        n_mask = mask_of(N)
        for c in base:
            if g.has_edge(c, x):
                violations.append(Violation("C-touches-apex", (c, x), "base vertex adjacent to apex"))
            if not g.masks[c] & n_mask:
                violations.append(Violation("C-undominated", (c, x), "base vertex with no neighbour in N_x"))
    for (x, N), (x2, N2) in ((p, q) for p in M.covers for q in M.covers if p is not q):
        if x == x2:
            continue
        touched = sorted(iter_bits(g.masks[x2] & mask_of(N | {x})))
        if touched:
            violations.append(Violation("apex-touches-other-cover", (x2, *touched), f"cover of apex {x}"))
        if M.stable and x < x2:
            n2_mask = mask_of(N2)
            for v in sorted(N):
                for w in iter_bits(g.masks[v] & n2_mask):
                    violations.append(Violation("unstable-covers", (v, w), f"N_{x} to N_{x2}"))
    return violations


def _cable_index_check(c):
    t = c.t
    if len(c.N) != t or len(c.Y) != t:
        raise CertificateError("cable needs one N and one Y set per apex")
    for i, j in c.Z:
        if not (0 <= i < j < t):
            raise CertificateError(f"Z key ({i}, {j}) out of range for t={t}")


def classify_cable(g, c):
    """
    Validate a t-cable and type each index pair.

    A pair (i, j) is type 1 when Z_{i,j} is empty and x_j has no neighbour in Y_i,
    otherwise type 2 when every vertex of N_j has a neighbour in Z_{i,j} and none
    in Y_i. Type 1 is reported when both hold.

    Returns:
    dict: {"valid": bool, "violations": list, "pair_types": {(i, j): 1 or 2}}
    """
    _cable_index_check(c)
    t = c.t
    masks = g.masks
    violations = []
    _check_ids(g, [*c.x, *c.C])
    if len(set(c.x)) != t:
        violations.append(Violation("duplicate-apex", c.x, "apexes must be distinct"))
    for i, j in combinations(range(t), 2):
        if g.has_edge(c.x[i], c.x[j]):
            violations.append(Violation("apexes-adjacent", (c.x[i], c.x[j]), f"x_{i} ~ x_{j}"))
    n_masks = [mask_of(N) for N in c.N]
    y_masks = [mask_of(Y) for Y in c.Y]
    claimed = 0
    for i in range(t):
        _check_ids(g, c.N[i])
        outside = c.N[i] - set(g.adj[c.x[i]])
        if outside:
            violations.append(Violation("N-not-neighbours", (c.x[i], *sorted(outside)), f"N_{i}"))
        if n_masks[i] & claimed:
            violations.append(Violation("N-overlap", tuple(iter_bits(n_masks[i] & claimed)), f"N_{i}"))
        claimed |= n_masks[i]
        parts = [c.Y[i]] + [c.z(i, j) for j in range(i + 1, t)]
        used = set()
        for part in parts:
            if not part <= c.N[i] or part & used:
                violations.append(Violation("Z-Y-not-partition", tuple(sorted(part)), f"inside N_{i}"))
            used |= part
    apex_mask = mask_of(c.x)
    overlap = c.C & set(iter_bits(apex_mask | claimed))
    if overlap:
        violations.append(Violation("C-overlap", tuple(sorted(overlap)), "base meets apexes or N-sets"))
    for v in sorted(c.C):
        for i in range(t):
            if not masks[v] & y_masks[i]:
                violations.append(Violation("C-undominated", (v,), f"no neighbour in Y_{i}"))
            if g.has_edge(v, c.x[i]):
                violations.append(Violation("C-touches-apex", (v, c.x[i]), f"x_{i}"))
            for j in range(i + 1, t):
                if masks[v] & mask_of(c.z(i, j)):
                    violations.append(Violation("C-touches-Z", (v,), f"Z_{i},{j}"))
    for i, j in combinations(range(t), 2):
        if masks[c.x[i]] & n_masks[j]:
            violations.append(Violation("apex-touches-later-N", (c.x[i], *iter_bits(masks[c.x[i]] & n_masks[j])),
                                        f"x_{i} into N_{j}"))
    for i, j, k in combinations(range(t), 3):
        for v in sorted(c.z(i, j)):
            if masks[v] & n_masks[k]:
                violations.append(Violation("Z-touches-later-N", (v, *iter_bits(masks[v] & n_masks[k])),
                                            f"Z_{i},{j} into N_{k}"))
    pair_types = {}
    for i, j in combinations(range(t), 2):
        z_mask = mask_of(c.z(i, j))
        if not z_mask and not masks[c.x[j]] & y_masks[i]:
            pair_types[i, j] = 1
        elif all(masks[v] & z_mask and not masks[v] & y_masks[i] for v in c.N[j]):
            pair_types[i, j] = 2
        else:
            violations.append(Violation("pair-untyped", (c.x[i], c.x[j]), f"pair ({i}, {j}) is neither type"))
    return {"valid": not violations, "violations": violations, "pair_types": pair_types}


# ---------------------------------------------------------------------------
# Bends, sprinklers, wands
# ---------------------------------------------------------------------------

def verify_wubend(g, B):
    """
    Check the w-bend axioms (plus the u-bend ones when B.kind == "u").

    Returns:
    dict: {"violations": list, "size": distance between the base path ends or None}
    """
    violations = _levelling_violations(g, B.levels, B.k)
    _check_ids(g, B.U)
    base = B.levels[-1]
    order = induced_path_order(g, base)
    size = None
    if order is None:
        violations.append(Violation("base-not-path", tuple(sorted(base)), "G[L_k] is not an induced path"))
    else:
        size = dist(g, order[0], order[-1])
    if not is_induced_path(g, B.U):
        violations.append(Violation("U-not-induced-path", B.U, ""))
    meet = B.vertex_set & set(B.U)
    if meet:
        violations.append(Violation("U-meets-levels", tuple(sorted(meet)), ""))
    w = B.U[0]
    base_mask = mask_of(base)
    parents = sorted(B.levels[-2]) if B.k >= 1 else []
    if not any(g.has_edge(p, w) and g.masks[p] & base_mask for p in parents):
        violations.append(Violation("no-attachment", (w,), "no L_{k-1} vertex adjacent to w and to L_k"))
    for u in B.U:
        for v in iter_bits(g.masks[u] & base_mask):
            violations.append(Violation("U-touches-base", (u, v), ""))
    rest_mask = mask_of(B.U[1:])
    for p in parents:
        if g.masks[p] & base_mask and g.masks[p] & rest_mask:
            violations.append(Violation("straddling-parent", (p,), "neighbours in L_k and in U - w"))
    if B.kind == "u":
        attached = [p for p in parents if g.has_edge(p, w)]
        if len(attached) != 1:
            violations.append(Violation("attachment-not-unique", (w, *attached), "w needs one L_{k-1} neighbour"))
        else:
            below = list(iter_bits(g.masks[attached[0]] & base_mask))
            ends = {order[0], order[-1]} if order else set()
            if len(below) != 1 or below[0] not in ends:
                violations.append(Violation("attachment-not-at-end", (attached[0], *below), ""))
        for p in parents:
            if not g.masks[p] & base_mask:
                violations.append(Violation("childless-parent", (p,), "no neighbour in L_k"))
    return {"violations": violations, "size": size}


def sprinkler_floor(g, S, nu):
    """Last nu vertices of the base path read from the drain, or None"""
    order = induced_path_order(g, S.base, start=S.drain)
    if order is None or len(order) < nu:
        return None
    return order[len(order) - nu:]


def verify_sprinkler(g, S, nu):
    """
    True iff S is a nu-sprinkler: the base is a path v_1..v_n from the drain
    with n >= nu, v_1..v_{n-nu} have no neighbour in L_{k-1}, and each of the
    last nu vertices has a private parent in L_{k-1}.
    """
    if nu < 2 or S.k < 1 or verify_shower(g, S):
        return False
    order = induced_path_order(g, S.base, start=S.drain)
    if order is None or len(order) < nu:
        return False
    parents = S.levels[-2]
    base_mask = mask_of(S.base)
    cut = len(order) - nu
    for v in order[:cut]:
        if any(g.has_edge(v, p) for p in parents):
            return False
    for v in order[cut:]:
        if not any(g.has_edge(v, p) and g.masks[p] & base_mask == 1 << v for p in parents):
            return False
    return True


def verify_wand(g, S, W):
    """True iff W is a wand in the stable shower S"""
    if verify_shower(g, S, lam="all"):
        return False
    if W.t > S.k - 2 or W.t < 0:
        return False
    for i, part in enumerate(W.sets):
        if not part or not part <= S.levels[i]:
            return False
    for upper, lower in zip(W.sets, W.sets[1:]):
        if any(not g.has_edge(u, v) for u in upper for v in lower):
            return False
    return True
