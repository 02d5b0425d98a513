import logging
from dataclasses import dataclass, field

from src import config
from src.errors import BudgetExhausted
from src.graph_core import iter_bits


@dataclass(frozen=True)
class HoleSpectrum:
    lengths: tuple
    cap: int
    complete: bool
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)

    def witness(self, length):
        return self.witnesses.get(length)

    def __contains__(self, length):
        return length in self.lengths

    def to_dict(self):
        return {
            "lengths": list(self.lengths),
            "cap": self.cap,
            "complete": self.complete,
            "witnesses": {str(k): list(v) for k, v in sorted(self.witnesses.items())},
        }


@dataclass(frozen=True)
class HoleInterval:
    t: int
    holes: tuple

    @property
    def nu(self):
        return len(self.holes)

    def to_dict(self):
        return {"t": self.t, "lengths": [len(h) for h in self.holes], "holes": [list(h) for h in self.holes]}


class HoleEnumerator:
    """
    Induced-cycle search by DFS over induced paths.

    Every hole is generated once from its smallest vertex s, walking first to
    the smaller of the two cycle neighbours of s. Only vertices larger than s
    are used. A path is extended only while some length still wanted could be
    closed from it.
    """

    def __init__(self, budget=config.DEFAULT_BUDGET):
        self.budget = budget
        self.nodes = 0
        self.logger = logging.getLogger("holescope.holes")

    def search(self, g, wanted):
        """
        Find one witness for as many of the wanted lengths as exist.

        Parameters:
        g (Graph): Host graph
        wanted (iterable): Hole lengths of interest (values below 4 are ignored)

        Returns:
        dict: length -> witness vertex tuple, first found in DFS order
        """
        missing = {w for w in wanted if w >= 4}
        found = {}
        self.nodes = 0
        masks = g.masks
        for s in g.vertices():
            if not missing:
                break
            above = ((1 << g.n) - 1) & ~((1 << (s + 1)) - 1)
            s_bit = 1 << s
            for v1 in iter_bits(masks[s] & above):
                if not missing:
                    break
                self._extend(g, [s, v1], s_bit | 1 << v1, 0, above, s_bit, missing, found)
        self.logger.debug(f"hole search: {len(found)} lengths found, {self.nodes} nodes expanded")
        return found

    def _extend(self, g, path, path_mask, interior_nbrs, above, s_bit, missing, found):
        self.nodes += 1
        if self.nodes > self.budget:
            self.logger.warning(f"hole search exceeded {self.budget} nodes")
            raise BudgetExhausted("hole enumeration", self.budget)
        masks = g.masks
        last = path[-1]
        candidates = masks[last] & above & ~path_mask & ~interior_nbrs
        closing_length = len(path) + 1
        if len(path) >= 3 and closing_length in missing:
            for w in iter_bits(candidates):
                if masks[w] & s_bit and w > path[1]:
                    found[closing_length] = tuple(path) + (w,)
                    missing.discard(closing_length)
                    break
        if not missing or len(path) + 2 > max(missing):
            return
        # last becomes interior once the path grows past it
        new_interior = interior_nbrs | masks[last]
        for w in iter_bits(candidates):
            if masks[w] & s_bit:
                continue
            path.append(w)
            self._extend(g, path, path_mask | 1 << w, new_interior, above, s_bit, missing, found)
            path.pop()
            if not missing or len(path) + 2 > max(missing):
                return

    def spectrum(self, g, lmax=config.DEFAULT_LMAX):
        if lmax < 4:
            raise ValueError(f"Lmax must be at least 4, got {lmax}")
        found = self.search(g, range(4, lmax + 1))
        return HoleSpectrum(lengths=tuple(sorted(found)), cap=lmax, complete=lmax >= g.n, witnesses=found)

    def find(self, g, length):
        if length < 4:
            raise ValueError(f"hole length must be at least 4, got {length}")
        return self.search(g, [length]).get(length)


def hole_spectrum(g, lmax=config.DEFAULT_LMAX, budget=config.DEFAULT_BUDGET):
    """
    Lengths in [4, lmax] at which g has a hole, with one witness per length.

    Returns:
    HoleSpectrum: lengths, cap, completeness flag and witnesses
    """
    return HoleEnumerator(budget).spectrum(g, lmax)


def find_hole_of_length(g, length, budget=config.DEFAULT_BUDGET):
    return HoleEnumerator(budget).find(g, length)


def odd_hole_min_length(g, length, lmax=config.DEFAULT_LMAX, budget=config.DEFAULT_BUDGET):
    """Shortest odd hole of length at least `length` (and at most lmax), or None"""
    if length < 5:
        raise ValueError(f"odd hole length bound must be at least 5, got {length}")
    enumerator = HoleEnumerator(budget)
    start = length if length % 2 else length + 1
    for candidate in range(start, lmax + 1, 2):
        hole = enumerator.find(g, candidate)
        if hole is not None:
            return hole
    return None


def hole_interval(g, nu, lmax=config.DEFAULT_LMAX, budget=config.DEFAULT_BUDGET, spectrum=None):
    """
    Smallest t such that g has holes of every length t+1..t+nu.

    Parameters:
    g (Graph): Host graph
    nu (int): Number of consecutive lengths, at least 1
    lmax (int): Spectrum cap
    spectrum (HoleSpectrum): Precomputed spectrum to reuse

    Returns:
    HoleInterval or None
    """
    if nu < 1:
        raise ValueError(f"nu must be at least 1, got {nu}")
    spectrum = spectrum or hole_spectrum(g, lmax, budget)
    present = set(spectrum.lengths)
    for first in spectrum.lengths:
        run = range(first, first + nu)
        if all(length in present for length in run):
            return HoleInterval(t=first - 1, holes=tuple(spectrum.witness(length) for length in run))
    return None


def density_of(lengths):
    lengths = sorted(set(lengths))
    if not lengths:
        return {"count": 0, "min": None, "max": None, "largest_gap": 0}
    gaps = [b - a for a, b in zip(lengths, lengths[1:])]
    return {"count": len(lengths), "min": lengths[0], "max": lengths[-1], "largest_gap": max(gaps, default=0)}


def spectrum_density(g, lmax=config.DEFAULT_LMAX, budget=config.DEFAULT_BUDGET):
    """Descriptive statistics of the hole spectrum: count, min, max and largest gap"""
    return density_of(hole_spectrum(g, lmax, budget).lengths)
