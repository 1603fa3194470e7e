import math

import networkx as nx
import pytest

from phylo.errors import GraphViolation, ParseError
from phylo.formula import Verdict, classify, is_tame, parse_formula
from phylo.instances import (
    CubicHamGraph,
    cycle_neighbours,
    graph_girth,
    incidence_girth,
    lcf_graph,
    load_catalog,
    pair_graph_edges,
    parse_graph,
    phi_k,
    random_satisfiable_tame,
    random_tame_formula,
    validate_graph,
)
from phylo.solver import solve
from phylo.tree import verify_solution

CATALOG = load_catalog()


def k4(cycle=(0, 1, 2, 3)):
    adj = tuple(tuple(w for w in range(4) if w != v) for v in range(4))
    return CubicHamGraph("K4", adj, cycle)


def cube():
    adj = tuple(tuple(v ^ (1 << b) for b in range(3)) for v in range(8))
    gray = (0, 1, 3, 2, 6, 7, 5, 4)
    return CubicHamGraph("Q3", adj, gray)


def cycle_edges(g):
    c = g.cycle
    return {tuple(sorted((c[i], c[(i + 1) % g.n]))) for i in range(g.n)}


def formula_pairs_as_vertices(inst):
    names = inst.formula.names
    return {tuple(sorted(int(names[v][1:]) for v in e)) for e in pair_graph_edges(inst.formula)}


# -- graphs ---------------------------------------------------------------------------


def test_validate_k4():
    assert validate_graph(k4()) == 3


def test_validate_cube():
    assert validate_graph(cube()) == 4


def test_validate_rejects_non_cycle_permutation():
    with pytest.raises(GraphViolation) as err:
        validate_graph(k4(cycle=(0, 0, 1, 2)))
    assert err.value.prop == "hamiltonicity"


def test_validate_rejects_cycle_step_off_graph():
    g = cube()
    bad = CubicHamGraph("Q3", g.adjacency, (0, 1, 2, 3, 4, 5, 6, 7))
    with pytest.raises(GraphViolation) as err:
        validate_graph(bad)
    assert err.value.prop == "hamiltonicity"


@pytest.mark.parametrize(
    "adjacency, prop",
    [
        (((1, 2), (0, 2), (0, 1)), "3-regularity"),
        (((1, 2, 4), (0, 2, 3), (0, 1, 3), (0, 1, 2)), "vertex-range"),
        (((1, 1, 2), (0, 2, 3), (0, 1, 3), (0, 1, 2)), "3-regularity"),
        (((1, 2, 3), (2, 3, 4), (0, 1, 5), (0, 1, 4), (1, 3, 5), (2, 4, 0)), "symmetry"),
    ],
)
def test_validate_structural_violations(adjacency, prop):
    g = CubicHamGraph("bad", adjacency, tuple(range(len(adjacency))))
    with pytest.raises(GraphViolation) as err:
        validate_graph(g)
    assert err.value.prop == prop


def test_validate_rejects_wrong_stated_girth():
    g = CubicHamGraph("K4", k4().adjacency, (0, 1, 2, 3), girth=4)
    with pytest.raises(GraphViolation) as err:
        validate_graph(g)
    assert err.value.prop == "girth"


def test_girth_of_forest_is_infinite():
    assert graph_girth([[1], [0, 2], [1]]) == math.inf


def test_parse_graph_round_trip():
    g = lcf_graph("Heawood", [5, -5], 7, girth=6)
    again = parse_graph(g.to_text(), "Heawood")
    assert again == g


@pytest.mark.parametrize("text", ["0 1 2 3\ncycle: 0", "0: 1 2 3", "0: a b c\ncycle: 0", "x: 1\ncycle: 0"])
def test_parse_graph_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


@pytest.mark.parametrize("name, n, girth", [
    ("K4", 4, 3), ("Q3", 8, 4), ("Heawood", 14, 6), ("Pappus", 18, 6), ("McGee", 24, 7), ("TutteCoxeter", 30, 8),
])
def test_catalog_integrity(name, n, girth):
    g = CATALOG[name]
    assert g.n == n
    assert validate_graph(g) == girth
    ref = nx.Graph(g.edges())
    assert nx.girth(ref) == girth
    assert all(d == 3 for _, d in ref.degree())
    assert cycle_edges(g) <= set(g.edges())


# -- hard instances ------------------------------------------------------------------------


def test_cycle_neighbours_k4():
    assert cycle_neighbours(k4(), 0) == (3, 1, 2)


def test_phi_k4_unsatisfiable():
    inst = phi_k(k4())
    assert inst.k == 3 and len(inst.formula.clauses) == 4
    assert not solve(inst.formula).satisfiable


def test_phi_cube_pair_graph_is_cycle():
    inst = phi_k(cube())
    assert len(inst.formula.clauses) == 8
    assert formula_pairs_as_vertices(inst) == cycle_edges(cube())


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_phi_catalog_unsat_and_pairs_equal_cycle(name):
    g = CATALOG[name]
    inst = phi_k(g)
    assert formula_pairs_as_vertices(inst) == cycle_edges(g)
    r = solve(inst.formula)
    assert not r.satisfiable and len(r.variables) == g.n


def test_phi_predecessor_successor_variant_satisfiable_on_k4():
    inst = phi_k(k4(), variant="pred-succ")
    r = solve(inst.formula)
    assert r.satisfiable
    assert verify_solution(inst.formula, r.tree, r.alpha).valid


def test_phi_rejects_invalid_graph_and_variant():
    with pytest.raises(GraphViolation):
        phi_k(k4(cycle=(0, 0, 1, 2)))
    with pytest.raises(ValueError):
        phi_k(k4(), variant="other")


def test_incidence_girth_examples():
    assert incidence_girth(parse_formula("a,b|c\na,b|d")) == 2
    assert incidence_girth(parse_formula("a,b|c")) == math.inf


def test_incidence_girth_matches_networkx():
    for seed in range(40):
        f = random_tame_formula(seed)
        g = nx.Graph()
        for i, c in enumerate(f.clauses):
            for v in c.variables():
                g.add_edge(("v", v), ("c", i))
        expect = nx.girth(g)
        got = incidence_girth(f)
        assert (got == math.inf) if expect == math.inf else (2 * got == expect)


# -- random instances --------------------------------------------------------------------


def test_random_satisfiable_small_example():
    f = random_satisfiable_tame(10, 20, seed=1)
    r = solve(f)
    assert r.satisfiable and verify_solution(f, r.tree, r.alpha).valid


def test_random_satisfiable_three_leaves():
    f = random_satisfiable_tame(3, 1, seed=0)
    assert len(f.clauses) == 1 and len(f.clauses[0]) == 1


def test_random_satisfiable_deterministic():
    assert random_satisfiable_tame(50, 80, 7) == random_satisfiable_tame(50, 80, 7)
    assert random_satisfiable_tame(50, 80, 7) != random_satisfiable_tame(50, 80, 8)


def test_random_satisfiable_properties():
    for seed in range(50):
        f = random_satisfiable_tame(12, 30, seed)
        assert classify(f).verdict is Verdict.POLYNOMIAL
        r = solve(f)
        assert r.satisfiable and verify_solution(f, r.tree, r.alpha).valid


def test_random_satisfiable_needs_three_variables():
    with pytest.raises(ValueError):
        random_satisfiable_tame(2, 1, 0)


def test_random_tame_formula_bounds():
    for seed in range(100):
        f = random_tame_formula(seed)
        assert 3 <= f.n <= 7 and f.m <= 12
        assert all(is_tame(c) for c in f.clauses)
