from __future__ import annotations

import random

import pytest

from mrex.minsets import (
    McsResult,
    MusResult,
    NothingToCorrectError,
    NotUnsatisfiableError,
    SeedInconsistentError,
    SoftSolver,
    enumerate_all_mcses,
    enumerate_all_muses,
    extract_mcs,
    extract_mus,
)

from oracles import (
    random_unsat_soft,
    tt_all_mcses,
    tt_all_muses,
    tt_satisfiable,
)

# the worked five-clause base: a|b, -b|c, -c, -b|d, -d  (a=1 b=2 c=3 d=4, f=5)
BASE = [(1, 2), (-2, 3), (-3,), (-2, 4), (-4,)]


def test_mcs_of_worked_base_with_negated_goal():
    hard = [(-3,), (5,), (-1,)]
    res = extract_mcs(BASE, hard, num_vars=5)
    assert res.ids in {frozenset({0}), frozenset({1, 3}), frozenset({1, 4})}


def test_mcs_respects_seed():
    hard = [(-3,), (5,), (-1,)]
    res = extract_mcs(BASE, hard, seed={1}, num_vars=5)
    assert res.ids == {0}


def test_mcs_seed_conflict_detected():
    # seed {(-3,)} against hard (3) is already unsatisfiable
    with pytest.raises(SeedInconsistentError):
        extract_mcs([(-3,), (1,)], [(3,)], seed={0})


def test_mcs_nothing_to_correct():
    with pytest.raises(NothingToCorrectError):
        extract_mcs([(1,), (2,)], [(3,)])


def test_mus_of_worked_support_clauses():
    soft = [(-3,), (5,), (1, 2), (-2, 3)]
    hard = [(-1,)]
    res = extract_mus(soft, hard, num_vars=5)
    assert res.ids == {0, 2, 3}


def test_mus_requires_unsat():
    with pytest.raises(NotUnsatisfiableError):
        extract_mus([(1,), (2,)], [])


def test_enumerate_worked_base_mcses():
    hard = [(-3,), (5,), (-1,)]
    got = enumerate_all_mcses(BASE, hard, num_vars=5)
    assert got.complete
    assert {r.ids for r in got} == {
        frozenset({0}),
        frozenset({1, 3}),
        frozenset({1, 4}),
    }


def test_enumerate_worked_base_muses():
    hard = [(-3,), (5,), (-1,)]
    got = enumerate_all_muses(BASE, hard, num_vars=5)
    assert got.complete
    assert {r.ids for r in got} == {frozenset({0, 1}), frozenset({0, 3, 4})}


def test_enumeration_cap_flags_incomplete():
    hard = [(-3,), (5,), (-1,)]
    got = enumerate_all_mcses(BASE, hard, cap=2, num_vars=5)
    assert not got.complete
    assert len(got) == 2
    # canonical order: smaller sets first
    assert got[0].ids == {0}


def test_enumeration_results_are_sorted_canonically():
    hard = [(-3,), (5,), (-1,)]
    got = enumerate_all_mcses(BASE, hard, num_vars=5)
    keys = [(len(r.ids), sorted(r.ids)) for r in got]
    assert keys == sorted(keys)


def test_extracted_mcs_is_among_enumerated_random():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(3, 6)
        soft, hard = random_unsat_soft(rng, n, rng.randint(n + 2, n + 5), rng.randint(0, 2))
        if not tt_satisfiable(hard, n):
            continue
        all_mcs = {r.ids for r in enumerate_all_mcses(soft, hard, num_vars=n)}
        got = extract_mcs(soft, hard, num_vars=n)
        assert got.ids in all_mcs


def test_extracted_mus_is_among_enumerated_random():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(3, 6)
        soft, hard = random_unsat_soft(rng, n, rng.randint(n + 2, n + 5), rng.randint(0, 2))
        if not tt_satisfiable(hard, n):
            continue
        all_mus = {r.ids for r in enumerate_all_muses(soft, hard, num_vars=n)}
        got = extract_mus(soft, hard, num_vars=n)
        assert got.ids in all_mus


def test_enumerators_match_truth_table_oracle_random():
    rng = random.Random(13)
    for _ in range(50):
        n = rng.randint(2, 5)
        soft, hard = random_unsat_soft(rng, n, rng.randint(n + 2, n + 4), rng.randint(0, 2))
        got_mcs = {r.ids for r in enumerate_all_mcses(soft, hard, num_vars=n)}
        got_mus = {r.ids for r in enumerate_all_muses(soft, hard, num_vars=n)}
        assert got_mcs == tt_all_mcses(soft, hard, n)
        assert got_mus == tt_all_muses(soft, hard, n)


def test_session_scan_path_matches_truth_table_path():
    # variables beyond the truth-table limit force the selector-session scan
    rng = random.Random(14)
    soft, hard = random_unsat_soft(rng, 6, 6, 1)
    wide = 40
    lift = [tuple(l + (wide if l > 0 else -wide) for l in c) for c in soft]
    lift_hard = [tuple(l + (wide if l > 0 else -wide) for l in c) for c in hard]
    a = {r.ids for r in enumerate_all_mcses(soft, hard, num_vars=6)}
    b = {r.ids for r in enumerate_all_mcses(lift, lift_hard, num_vars=wide + 6)}
    assert a == b


def test_shared_workspace_reuse():
    hard = [(-3,), (5,), (-1,)]
    ws = SoftSolver(BASE, hard, num_vars=5)
    first = extract_mcs(ws)
    second = extract_mcs(ws, seed={1})
    assert first.ids in {frozenset({0}), frozenset({1, 3}), frozenset({1, 4})}
    assert second.ids == {0}
    assert ws.oracle_calls > 0


def test_result_kinds():
    assert McsResult(frozenset()).kind == "mcs"
    assert MusResult(frozenset()).kind == "mus"


def test_mcs_deterministic():
    hard = [(-3,), (5,), (-1,)]
    a = extract_mcs(BASE, hard, num_vars=5)
    b = extract_mcs(BASE, hard, num_vars=5)
    assert a == b
