"""Minimal correction sets and minimal unsatisfiable subsets over soft/hard
clause splits.

Soft clauses are addressed by their position in the given sequence; hard
clauses always hold.  Extraction is deterministic: candidate clauses are
visited in ascending position order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .formula import Clause
from .solver import SatSession, SolveResult

# When True every extraction re-verifies its result by single-element
# perturbation before returning (test builds).
check_minimality = False

Cancel = Callable[[], None]


class MinimalSetError(ValueError):
    pass


class SeedInconsistentError(MinimalSetError):
    """The seed together with the hard clauses is already unsatisfiable."""


class NothingToCorrectError(MinimalSetError):
    """hard ∪ soft is satisfiable: there is no correction set to extract."""


class NotUnsatisfiableError(MinimalSetError):
    """hard ∪ soft is satisfiable: there is no unsatisfiable core to shrink."""


class EnumerationLimitError(MinimalSetError):
    """Instance too large for exhaustive subset enumeration."""


@dataclass(frozen=True)
class McsResult:
    ids: frozenset[int]
    kind: str = field(default="mcs", compare=False)


@dataclass(frozen=True)
class MusResult:
    ids: frozenset[int]
    kind: str = field(default="mus", compare=False)


class SoftSolver:
    """Selector-guarded workspace over a fixed soft universe.

    num_vars must cover every variable in soft and hard clauses; selectors
    are allocated above it.  One workspace can serve many extractions, which
    is what keeps the main reconciliation loop incremental.
    """

    def __init__(
        self,
        soft: Sequence[Clause],
        hard: Iterable[Clause] = (),
        num_vars: int | None = None,
    ):
        self.soft = [tuple(c) for c in soft]
        hard = [tuple(c) for c in hard]
        if num_vars is None:
            num_vars = 0
            for c in list(hard) + self.soft:
                for l in c:
                    v = l if l > 0 else -l
                    if v > num_vars:
                        num_vars = v
        self.num_vars = num_vars
        self.session = SatSession(num_vars)
        for c in hard:
            self.session.add_hard(c)
        self.selectors = [self.session.add_soft(c) for c in self.soft]
        self._positions = {s: i for i, s in enumerate(self.selectors)}

    def __len__(self) -> int:
        return len(self.soft)

    def solve_ids(self, ids: Iterable[int], extra: Iterable[int] = ()) -> SolveResult:
        assumptions = [self.selectors[i] for i in ids]
        assumptions.extend(extra)
        return self.session.solve(assumptions)

    def core_ids(self, result: SolveResult) -> set[int]:
        return {self._positions[x] for x in result.conflict_subset if x in self._positions}

    def satisfied_ids(self, model: tuple[bool, ...], skip: set[int]) -> list[int]:
        out = []
        for i, clause in enumerate(self.soft):
            if i in skip:
                continue
            for l in clause:
                if model[l] if l > 0 else not model[-l]:
                    out.append(i)
                    break
        return out

    @property
    def oracle_calls(self) -> int:
        return self.session.solve_count


def extract_mcs(
    soft: Sequence[Clause] | SoftSolver,
    hard: Iterable[Clause] = (),
    seed: Iterable[int] = (),
    *,
    num_vars: int | None = None,
    first_result: SolveResult | None = None,
    cancel: Cancel | None = None,
) -> McsResult:
    """One minimal correction set disjoint from the seed clauses.

    Linear search: grow a satisfiable subset from the seed in ascending
    position order, admitting for free every clause the current model already
    satisfies; the complement of the final subset is the MCS.
    """
    ws = soft if isinstance(soft, SoftSolver) else SoftSolver(soft, hard, num_vars)
    kept = set(seed)
    res = first_result if first_result is not None else ws.solve_ids(kept)
    if not res.satisfiable:
        raise SeedInconsistentError("seed clauses conflict with the hard clauses")
    kept.update(ws.satisfied_ids(res.model, kept))
    for i in range(len(ws.soft)):
        if i in kept:
            continue
        if cancel is not None:
            cancel()
        r = ws.solve_ids(kept | {i})
        if r.satisfiable:
            kept.add(i)
            kept.update(ws.satisfied_ids(r.model, kept))
    mcs = frozenset(range(len(ws.soft))) - kept
    if not mcs:
        raise NothingToCorrectError("hard and soft clauses are jointly satisfiable")
    if check_minimality:
        _audit_mcs(ws, mcs, set(seed))
    return McsResult(mcs)


def _audit_mcs(ws: SoftSolver, mcs: frozenset[int], seed: set[int]) -> None:
    assert not mcs & seed, "correction set overlaps the seed"
    complement = set(range(len(ws.soft))) - mcs
    assert ws.solve_ids(complement).satisfiable, "complement of MCS is not satisfiable"
    for i in sorted(mcs):
        assert not ws.solve_ids(complement | {i}).satisfiable, (
            f"MCS not minimal: restoring clause {i} keeps the set satisfiable"
        )


def extract_mus(
    soft: Sequence[Clause] | SoftSolver,
    hard: Iterable[Clause] = (),
    *,
    num_vars: int | None = None,
    cancel: Cancel | None = None,
) -> MusResult:
    """One minimal unsatisfiable subset of the soft clauses (modulo hard).

    Deletion-based: drop candidates in ascending position order, keeping
    those whose removal restores satisfiability.  Conflict subsets from the
    oracle prune candidates that cannot be in the current core.
    """
    ws = soft if isinstance(soft, SoftSolver) else SoftSolver(soft, hard, num_vars)
    res = ws.solve_ids(range(len(ws.soft)))
    if res.satisfiable:
        raise NotUnsatisfiableError("hard and soft clauses are jointly satisfiable")
    current = ws.core_ids(res)
    for i in sorted(current):
        if i not in current:
            continue
        if cancel is not None:
            cancel()
        r = ws.solve_ids(current - {i})
        if not r.satisfiable:
            current = ws.core_ids(r)
    mus = frozenset(current)
    if check_minimality:
        _audit_mus(ws, mus)
    return MusResult(mus)


def _audit_mus(ws: SoftSolver, mus: frozenset[int]) -> None:
    assert not ws.solve_ids(mus).satisfiable, "MUS is not unsatisfiable"
    for i in sorted(mus):
        assert ws.solve_ids(mus - {i}).satisfiable, (
            f"MUS not minimal: clause {i} is removable"
        )


class SubsetEnumeration(list):
    """List of results plus a completeness flag (False once capped)."""

    complete: bool = True


_TT_MAX_VARS = 16
_SCAN_MAX_SOFT = 16


def _subset_sat(
    soft: Sequence[Clause], hard: Sequence[Clause], num_vars: int
) -> list[bool]:
    """Satisfiability of hard ∪ subset for every soft subset (by bitmask)."""
    k = len(soft)
    if num_vars <= _TT_MAX_VARS and (1 << num_vars) * (1 << k) <= 1 << 28:
        full = (1 << (1 << num_vars)) - 1
        base = full
        for c in hard:
            base &= _clause_assignments(c, num_vars)
        masks = [_clause_assignments(c, num_vars) for c in soft]
        table = [0] * (1 << k)
        table[0] = base
        for m in range(1, 1 << k):
            low = m & -m
            table[m] = table[m ^ low] & masks[low.bit_length() - 1]
        return [t != 0 for t in table]
    if k > _SCAN_MAX_SOFT:
        raise EnumerationLimitError(
            f"{k} soft clauses over {num_vars} variables exceeds exhaustive enumeration limits"
        )
    ws = SoftSolver(soft, hard, num_vars)
    out = []
    for m in range(1 << k):
        ids = [i for i in range(k) if m >> i & 1]
        out.append(ws.solve_ids(ids).satisfiable)
    return out


def _clause_assignments(clause: Clause, num_vars: int) -> int:
    full = (1 << (1 << num_vars)) - 1
    mask = 0
    for lit in clause:
        v = lit if lit > 0 else -lit
        # bit a is set iff assignment a (bit v-1 of a = value of var v) makes v true
        pattern = 0
        step = 1 << (v - 1)
        a = step
        while a < (1 << num_vars):
            pattern |= ((1 << step) - 1) << a
            a += 2 * step
        mask |= pattern if lit > 0 else full ^ pattern
    return mask


def enumerate_all_mcses(
    soft: Sequence[Clause],
    hard: Iterable[Clause] = (),
    cap: int | None = None,
    *,
    num_vars: int | None = None,
) -> SubsetEnumeration:
    """All MCSes by subset scan, in (size, ids) order; capped when asked."""
    soft = [tuple(c) for c in soft]
    hard = [tuple(c) for c in hard]
    nv = num_vars if num_vars is not None else _max_var(soft, hard)
    sat = _subset_sat(soft, hard, nv)
    k = len(soft)
    full = (1 << k) - 1
    found: list[frozenset[int]] = []
    for m in range(1 << k):
        if not sat[full ^ m]:
            continue
        bits = [b for b in range(k) if m >> b & 1]
        if all(not sat[(full ^ m) | (1 << b)] for b in bits):
            found.append(frozenset(bits))
    return _package(found, McsResult, cap)


def enumerate_all_muses(
    soft: Sequence[Clause],
    hard: Iterable[Clause] = (),
    cap: int | None = None,
    *,
    num_vars: int | None = None,
) -> SubsetEnumeration:
    """All MUSes by subset scan, in (size, ids) order; capped when asked."""
    soft = [tuple(c) for c in soft]
    hard = [tuple(c) for c in hard]
    nv = num_vars if num_vars is not None else _max_var(soft, hard)
    sat = _subset_sat(soft, hard, nv)
    k = len(soft)
    found: list[frozenset[int]] = []
    for m in range(1 << k):
        if sat[m]:
            continue
        bits = [b for b in range(k) if m >> b & 1]
        if all(sat[m ^ (1 << b)] for b in bits):
            found.append(frozenset(bits))
    return _package(found, MusResult, cap)


def _max_var(soft: Sequence[Clause], hard: Sequence[Clause]) -> int:
    nv = 0
    for c in list(soft) + list(hard):
        for l in c:
            v = l if l > 0 else -l
            if v > nv:
                nv = v
    return nv


def _package(found: list[frozenset[int]], wrap, cap: int | None) -> SubsetEnumeration:
    found.sort(key=lambda s: (len(s), sorted(s)))
    out = SubsetEnumeration()
    out.complete = True
    for ids in found:
        if cap is not None and len(out) >= cap:
            out.complete = False
            break
        out.append(wrap(ids))
    return out
