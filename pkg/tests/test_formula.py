from __future__ import annotations

import random

import pytest

from mrex.formula import (
    CnfFormula,
    DegenerateQueryError,
    DimacsParseError,
    FormulaError,
    TautologyError,
    intersect_kbs,
    negate_query,
    normalize_clause,
    parse_dimacs,
    parse_literal_list,
    parse_query_text,
    write_dimacs,
)

from oracles import formula_mask, random_cnf


def test_normalize_sorts_and_dedups():
    assert normalize_clause([3, -1, 3]) == (-1, 3)
    assert normalize_clause([-2, 1]) == (1, -2)
    assert normalize_clause([]) == ()


def test_normalize_rejects_tautology_and_zero():
    with pytest.raises(TautologyError):
        normalize_clause([1, -1])
    with pytest.raises(FormulaError):
        normalize_clause([0])
    with pytest.raises(FormulaError):
        normalize_clause([2**31])


def test_normalize_is_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        width = rng.randint(0, 5)
        lits = [rng.choice([1, -1]) * rng.randint(1, 6) for _ in range(width)]
        try:
            once = normalize_clause(lits)
        except TautologyError:
            continue
        assert normalize_clause(once) == once


def test_from_clauses_merges_duplicates_with_warning():
    f = CnfFormula.from_clauses([(1, 2), (2, 1), (-3,)])
    assert f.clauses == ((1, 2), (-3,))
    assert f.num_vars == 3
    assert any("merged" in w for w in f.warnings)


def test_clause_ids_stable_under_extension():
    f = CnfFormula.from_clauses([(1,), (2, 3)])
    g = f.extended([(4,), (1,)])
    assert g.clauses[:2] == f.clauses
    assert g.clauses == ((1,), (2, 3), (4,))
    assert g.num_vars == 4


def test_parse_dimacs_basic():
    text = "c a comment\np cnf 4 3\n1 -2 0\n-3\n4 0\n2 0\n"
    f = parse_dimacs(text)
    assert f.clauses == ((1, -2), (-3, 4), (2,))
    assert f.num_vars == 4


def test_parse_dimacs_flags_empty_clause_and_duplicates():
    f = parse_dimacs("p cnf 2 3\n0\n1 2 0\n2 1 0\n")
    assert () in f.clauses
    assert any("empty clause" in w for w in f.warnings)
    assert any("merged" in w for w in f.warnings)


def test_parse_dimacs_drops_tautologies_with_warning():
    f = parse_dimacs("p cnf 2 2\n1 -1 0\n2 0\n")
    assert f.clauses == ((2,),)
    assert any("tautological" in w for w in f.warnings)


def test_parse_dimacs_errors():
    with pytest.raises(DimacsParseError):
        parse_dimacs("1 2 0\n")  # no header
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf x y\n")
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 2\n")  # missing terminator
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 foo 0\n")
    with pytest.raises(DimacsParseError):
        parse_dimacs(f"p cnf 2 1\n{2**31} 0\n")


def test_parse_dimacs_num_vars_envelope():
    f = parse_dimacs("p cnf 9 1\n1 0\n")
    assert f.num_vars == 9
    g = parse_dimacs("p cnf 1 1\n7 0\n")
    assert g.num_vars == 7


def test_dimacs_round_trip_random():
    rng = random.Random(13)
    for _ in range(50):
        clauses = random_cnf(rng, rng.randint(1, 9), rng.randint(1, 15))
        f = CnfFormula.from_clauses(clauses)
        assert parse_dimacs(write_dimacs(f)) == f


def test_parse_literal_list_and_query_dispatch():
    q = parse_literal_list("1 -3\n2\n")
    assert q.clauses == ((1,), (-3,), (2,))
    assert parse_query_text("p cnf 2 1\n1 2 0\n").clauses == ((1, 2),)
    assert parse_query_text("-4\n").clauses == ((-4,),)
    with pytest.raises(DegenerateQueryError):
        parse_literal_list("\n")


def test_intersect_is_syntactic():
    kb_a = CnfFormula.from_clauses([(1, 2), (-2, 3), (-3,)])
    kb_h = CnfFormula.from_clauses([(-3,), (5,), (2, 1)])
    hard, soft = intersect_kbs(kb_a, kb_h)
    assert hard == {0, 2}  # (1,2) and (-3,) are shared syntactically
    assert soft == {1}
    assert hard | soft == set(range(len(kb_a.clauses)))
    # logically equivalent but syntactically different clauses do not intersect
    kb_h2 = CnfFormula.from_clauses([(2, 1, 4), (-3, -3)])
    hard2, _ = intersect_kbs(kb_a, kb_h2)
    assert hard2 == {2}


def test_negate_unit_conjunction_single_clause():
    q = CnfFormula.from_clauses([(-5,), (-6,)])
    neg = negate_query(q, 7)
    assert neg.single_clause
    assert neg.clauses == ((5, 6),)
    assert len(neg.aux_vars) == 0


def test_negate_general_query_structure():
    q = CnfFormula.from_clauses([(1, 2), (3, 4)])
    neg = negate_query(q, 5)
    assert not neg.single_clause
    assert neg.aux_vars == range(5, 7)
    expected = {(-1, -5), (-2, -5), (-3, -6), (-4, -6), (5, 6)}
    assert set(neg.clauses) == expected


def test_negation_equisatisfiability_random():
    # models of the negation restricted to original vars = assignments
    # falsifying the query, for both encodings
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randint(1, 6)
        clauses = random_cnf(rng, n, rng.randint(1, 4))
        q = CnfFormula.from_clauses(clauses)
        try:
            neg = negate_query(q, n + 1)
        except DegenerateQueryError:
            continue
        total = n + len(neg.aux_vars)
        full = (1 << (1 << n)) - 1
        fals = full ^ formula_mask(q.clauses, n)
        neg_mask = formula_mask(neg.clauses, total)
        # project the negation's models down to the first n variables
        projected = 0
        for a in range(1 << total):
            if neg_mask >> a & 1:
                projected |= 1 << (a & ((1 << n) - 1))
        assert projected == fals


def test_negate_query_degenerate_cases():
    with pytest.raises(DegenerateQueryError):
        negate_query(CnfFormula.from_clauses([]), 1)
    with pytest.raises(DegenerateQueryError):
        negate_query(CnfFormula.from_clauses([()]), 1)
    with pytest.raises(DegenerateQueryError):
        negate_query(CnfFormula.from_clauses([(1,), (-1,)]), 2)
    with pytest.raises(FormulaError):
        negate_query(CnfFormula.from_clauses([(1, 2), (3,)]), 2)
