import numpy as np
import pytest

from conftest import brute_force_chi, random_graph
from src.chroma import ChromaticSolver, PhiTable, check_controlled, chi_of_set, chi_rho, chromatic_number
from src.errors import BudgetExhausted, PhiRangeError
from src.generators import generate
from src.graph_core import Graph


@pytest.mark.parametrize("family,expected", [
    ("empty:0", 0), ("empty:4", 1), ("path:2", 2), ("cycle:6", 2), ("cycle:5", 3), ("cycle:9", 3),
    ("complete:4", 4), ("petersen", 3), ("grotzsch", 4), ("complete_bipartite:3:4", 2), ("kneser:5:2", 3),
    ("shift:6", 3), ("mycielski:mycielski:mycielski:complete:2", 5),
])
def test_known_chromatic_numbers(family, expected):
    assert chromatic_number(generate(family)) == expected


def test_matches_brute_force_on_small_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(1, 8))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.8)))
        assert chromatic_number(g) == brute_force_chi(g)


def test_disconnected_graph_takes_the_worst_component():
    c5_plus_edge = Graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6)])
    assert chromatic_number(c5_plus_edge) == 3
    assert chi_of_set(c5_plus_edge, {5, 6}) == 2
    assert chi_of_set(c5_plus_edge, set()) == 0


def test_solver_cache_is_reused(petersen):
    solver = ChromaticSolver()
    assert solver.chromatic_number(petersen) == 3
    assert solver.chi_of_set(petersen, range(10)) == 3
    assert len(solver._cache) == 1


def test_budget_exhaustion_raises(grotzsch):
    with pytest.raises(BudgetExhausted) as info:
        chromatic_number(grotzsch, budget=1)
    assert info.value.budget == 1


def test_chi_rho(c9, petersen):
    assert chi_rho(c9, 0) == 1
    assert chi_rho(c9, 2) == 2
    assert chi_rho(c9, 4) == 3
    assert chi_rho(petersen, 2) == 3
    assert chi_rho(Graph(0), 2) == 0


def test_phi_table_lookup():
    phi = PhiTable([0, 1, 3, 3])
    assert phi(2) == 3 and len(phi) == 4
    with pytest.raises(PhiRangeError) as info:
        phi(4)
    assert info.value.kappa == 4
    assert PhiTable([0, 1, 3, 3], policy="clamp")(9) == 3
    assert PhiTable.identity(5)(4) == 4
    assert PhiTable.constant(2)(100) == 2
    assert PhiTable.from_json("[0, 2, 2]")(1) == 2


@pytest.mark.parametrize("values,policy", [([], "fail"), ([2, 1], "fail"), ([-1, 0], "fail"), ([0, 1], "wrap")])
def test_phi_table_rejects(values, policy):
    with pytest.raises(ValueError):
        PhiTable(values, policy)


def test_phi_table_json_must_be_integer_array():
    with pytest.raises(ValueError):
        PhiTable.from_json('{"a": 1}')
    with pytest.raises(ValueError):
        PhiTable.from_json("[0, 1.5]")


def test_check_controlled_finds_the_five_cycle(c5):
    report = check_controlled(c5, 1, PhiTable.identity(10))
    assert report.exhaustive
    assert report.checked == 31
    assert report.violations == [{"vertices": (0, 1, 2, 3, 4), "chi": 3, "chi_rho": 2, "bound": 2}]
    assert not report.ok
    assert report.to_dict()["violations"][0]["vertices"] == [0, 1, 2, 3, 4]


def test_check_controlled_passes_with_large_radius(c5):
    report = check_controlled(c5, 2, PhiTable.identity(10))
    assert report.ok and report.checked == 31


def test_check_controlled_sampling_is_seeded(petersen):
    first = check_controlled(petersen, 1, PhiTable.identity(10), budget=16, seed=4, samples=20)
    second = check_controlled(petersen, 1, PhiTable.identity(10), budget=16, seed=4, samples=20)
    assert not first.exhaustive
    assert first.checked == 20 and first.seed == 4
    assert first.to_dict() == second.to_dict()
