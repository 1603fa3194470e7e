import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_trivial
from phylo.errors import CapExceeded, ParseError
from phylo.formula import (
    Clause,
    EarlyUnsat,
    Formula,
    Literal,
    Verdict,
    classify,
    is_tame,
    is_trivial,
    normalize,
    parse_formula,
)


def clause(text, names=()):
    return parse_formula(text, names).clauses[0]


# -- parsing ----------------------------------------------------------------


def test_parse_example_formula():
    f = parse_formula("x,z|y OR y,z|x\nx,y|w")
    assert len(f.clauses) == 2
    assert f.n == 4
    assert f.m == 3
    assert f.names == ("x", "z", "y", "w")


def test_parse_empty():
    f = parse_formula("")
    assert f.n == 0 and len(f.clauses) == 0 and f.m == 0


def test_parse_keeps_degenerate_literal():
    f = parse_formula("a,a|b")
    assert len(f.clauses) == 1
    assert f.clauses[0].literals[0].degenerate


def test_parse_comments_whitespace_and_order():
    f = parse_formula("# header\n  a , b | c   OR  a,b|d  # tail\n\n")
    assert [f.literal_text(l) for l in f.clauses[0]] == ["a,b|c", "a,b|d"]


def test_parse_preinterned_order():
    f = parse_formula("b,c|a", variables=("a", "b", "c", "d"))
    assert f.names == ("a", "b", "c", "d")
    assert f.clauses[0].literals[0] == Literal(1, 2, 0)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("a,b|c\nab|c", 2, 1),
        ("a,b|c OR", 1, 9),
        ("a,b|c or a,b|d", 1, 7),
        ("a,b|c\n  a,b|c OR x-y", 2, 12),
    ],
)
def test_parse_error_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_round_trip_text():
    text = "x,z|y OR y,z|x\nx,y|w\n"
    f = parse_formula(text)
    again = parse_formula(f.to_text(), f.names)
    assert again.clauses == f.clauses


# -- literals and normalization ------------------------------------------------


@given(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9))
def test_literal_canonical_pair_symmetric(x, y, z):
    a = Literal(x, y, z)
    assert a == Literal(y, x, z)
    assert Literal(a.x, a.y, a.z) == a
    assert a.x <= a.y


def test_normalize_drops_degenerate_literal():
    f = parse_formula("a,a|b OR a,b|c")
    g = normalize(f)
    assert [g.literal_text(l) for l in g.clauses[0]] == ["a,b|c"]


def test_normalize_early_unsat():
    f = parse_formula("a,b|c\na,a|b OR a,b|a")
    assert normalize(f) == EarlyUnsat(1)


def test_normalize_identity_without_degenerate():
    f = parse_formula("a,b|c\nb,c|d")
    assert normalize(f) is f


@given(st.lists(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4), max_size=5))
def test_normalize_idempotent(raw):
    f = Formula(tuple("abcde"), tuple(Clause(tuple(Literal(*t) for t in c)) for c in raw))
    g = normalize(f)
    if isinstance(g, EarlyUnsat):
        return
    assert normalize(g) == g


def test_duplicate_literals_merged_duplicate_clauses_kept():
    f = parse_formula("a,b|c OR b,a|c\na,b|c")
    assert len(f.clauses[0]) == 1
    assert len(f.clauses) == 2 and f.m == 2


# -- triviality and tameness ---------------------------------------------------------


def test_trivial_all_three_orientations():
    assert is_trivial(clause("a,b|c OR a,c|b OR b,c|a"))


def test_trivial_two_orientations_is_not():
    assert not is_trivial(clause("a,b|c OR a,c|b"))


def test_single_triple_not_trivial():
    assert not is_trivial(clause("a,b|c"))


def test_trivial_cap():
    c = clause("a,b|c OR d,e|f OR g,a|b")
    with pytest.raises(CapExceeded):
        is_trivial(c)
    assert is_trivial(c, cap=7) is False


def _clauses_up_to_4_vars():
    lits = [(x, y, z) for x in range(4) for y in range(x + 1, 4) for z in range(4) if z not in (x, y)]
    for k in (1, 2, 3, 4):
        yield from itertools.combinations(lits, k)
    yield tuple(lits)
    yield tuple(l for l in lits if 3 not in l)


def test_trivial_matches_independent_enumeration():
    checked = 0
    for lits in _clauses_up_to_4_vars():
        c = Clause(tuple(Literal(*l) for l in lits))
        assert is_trivial(c) == brute_trivial(lits), lits
        checked += 1
    assert checked == 12 + 66 + 220 + 495 + 2


def test_tame_common_pair():
    assert is_tame(clause("x,y|z1 OR x,y|z2"))


def test_forbidden_triple_not_tame():
    assert not is_tame(clause("x,z|y OR y,z|x"))


def test_single_triple_tame():
    assert is_tame(clause("a,b|c"))


# -- classification -----------------------------------------------------------------


def test_classify_triples_polynomial():
    assert classify(parse_formula("x,y|z")).verdict is Verdict.POLYNOMIAL


def test_classify_forbidden_triple_np_complete():
    r = classify(parse_formula("x,z|y OR y,z|x"))
    assert r.verdict is Verdict.NP_COMPLETE
    assert str(r.verdict) == "NP-complete"
    assert r.first_non_tame() == 0


def test_classify_trivial_only_polynomial():
    r = classify(parse_formula("a,b|c OR a,c|b OR b,c|a"))
    assert r.verdict is Verdict.POLYNOMIAL
    assert r.flags[0].trivial and r.flags[0].tame


def test_classify_flags_degenerate():
    r = classify(parse_formula("a,a|b\nx,z|y OR y,z|x"))
    assert r.flags[0].degenerate_unsat
    assert r.first_non_tame() == 1
