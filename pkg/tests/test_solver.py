import random

import pytest

from oracles import brute_satisfiable
from phylo.errors import NotTame
from phylo.formula import parse_formula
from phylo.instances import random_tame_formula
from phylo.solver import (
    Satisfiable,
    Unsatisfiable,
    build_constraint_graph,
    solve,
    verify_unsat_witness,
)
from phylo.tree import oracle_satisfiable, to_newick, verify_solution

UNSAT_EXAMPLE = "a,b|c\nb,c|a\na,b|d"


def edge_names(f, g):
    return [tuple(sorted(f.names[v] for v in e)) for e in g.edges]


def test_constraint_graph_example():
    f = parse_formula(UNSAT_EXAMPLE)
    assert edge_names(f, build_constraint_graph(f)) == [("a", "b"), ("b", "c"), ("a", "b")]


def test_constraint_graph_common_pair_single_edge():
    f = parse_formula("x,y|z1 OR x,y|z2")
    g = build_constraint_graph(f)
    assert edge_names(f, g) == [("x", "y")]
    assert g.clause_of_edge == (0,)


def test_constraint_graph_empty():
    g = build_constraint_graph(parse_formula(""))
    assert g.edges == ()


def test_constraint_graph_drops_trivial_and_rejects_non_tame():
    f = parse_formula("a,b|c OR a,c|b OR b,c|a\na,b|d")
    g = build_constraint_graph(f)
    assert g.trivial_clauses == (0,) and g.clause_of_edge == (1,)
    with pytest.raises(NotTame) as err:
        build_constraint_graph(parse_formula("a,b|c\nx,z|y OR y,z|x"))
    assert err.value.clause_index == 1


@pytest.mark.parametrize("backend", ["hdt", "naive"])
def test_solve_unsat_example(backend):
    f = parse_formula(UNSAT_EXAMPLE)
    r = solve(f, backend)
    assert isinstance(r, Unsatisfiable)
    assert {f.names[v] for v in r.variables} == {"a", "b", "c"}
    assert verify_unsat_witness(f, r)


def test_solve_single_triple():
    f = parse_formula("x,y|w")
    r = solve(f)
    assert isinstance(r, Satisfiable)
    assert verify_solution(f, r.tree, r.alpha).valid


def test_solve_empty_formula_comb():
    f = parse_formula("", variables=("a", "b", "c", "d"))
    r = solve(f)
    assert to_newick(r.tree) == "(((a,b),c),d);"


def test_solve_no_variables():
    r = solve(parse_formula(""))
    assert r.satisfiable and len(r.tree) == 0


def test_solve_common_pair_disjunction():
    f = parse_formula("a,b|c OR a,b|d")
    r = solve(f)
    assert r.satisfiable == oracle_satisfiable(f).satisfiable == True  # noqa: E712
    assert verify_solution(f, r.tree, r.alpha).valid


def test_solve_early_unsat_clause():
    f = parse_formula("a,b|c\na,a|b")
    r = solve(f)
    assert isinstance(r, Unsatisfiable) and r.clauses == (1,)
    assert verify_unsat_witness(f, r)


def test_solve_ignores_trivial_clause():
    f = parse_formula("a,b|c OR a,c|b OR b,c|a\na,b|c")
    r = solve(f)
    assert r.satisfiable and verify_solution(f, r.tree, r.alpha).valid


def test_solve_rejects_non_tame():
    with pytest.raises(NotTame):
        solve(parse_formula("x,z|y OR y,z|x"))


def test_witness_checks():
    f = parse_formula(UNSAT_EXAMPLE)
    w = solve(f)
    assert verify_unsat_witness(f, w)
    assert not verify_unsat_witness(f, Unsatisfiable(w.variables, w.clauses[:-1]))
    # clause 2 mentions d, which lies outside S
    assert not verify_unsat_witness(f, Unsatisfiable(w.variables, w.clauses + (2,)))
    assert not verify_unsat_witness(f, Unsatisfiable(frozenset(), ()))


def test_left_comb_of_components():
    # components {a,b}, {c}, {d,e}: the clauses straddling them are dropped
    f = parse_formula("a,b|c\nd,e|a", variables=("a", "b", "c", "d", "e"))
    r = solve(f)
    assert to_newick(r.tree) == "(((a,b),c),(d,e));"


def test_backend_independence():
    for seed in range(300):
        f = random_tame_formula(seed, max_vars=9, max_literals=16)
        a, b = solve(f, "hdt"), solve(f, "naive")
        assert type(a) is type(b)
        if a.satisfiable:
            assert to_newick(a.tree) == to_newick(b.tree)
        else:
            assert a == b


def test_matches_independent_brute_force():
    for seed in range(200):
        f = random_tame_formula(seed, max_vars=5, max_literals=8)
        clauses = [[(l.x, l.y, l.z) for l in c] for c in f.clauses]
        assert solve(f).satisfiable == brute_satisfiable(f.n, clauses), f.to_text()


def test_clause_removal_keeps_satisfiable():
    rng = random.Random(4)
    checked = 0
    for seed in range(300):
        f = random_tame_formula(seed)
        if not solve(f).satisfiable:
            continue
        for _ in range(3):
            if not f.clauses:
                break
            drop = rng.randrange(len(f.clauses))
            f = f.restrict([i for i in range(len(f.clauses)) if i != drop])
            assert solve(f).satisfiable
            checked += 1
    assert checked > 100


def test_unsat_clause_removal_never_hurts_sat_instances():
    # removing a clause from an unsatisfiable instance may make it satisfiable, never the reverse
    for seed in range(300):
        f = random_tame_formula(seed)
        before = solve(f).satisfiable
        for drop in range(len(f.clauses)):
            g = f.restrict([i for i in range(len(f.clauses)) if i != drop])
            assert solve(g).satisfiable or not before
