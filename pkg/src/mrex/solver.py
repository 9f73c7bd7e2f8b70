"""Incremental CDCL SAT sessions with assumption-based solving.

A session owns a growing set of hard clauses plus soft clauses guarded by
selector variables, so callers can switch clause subsets on and off between
solves without rebuilding.  Solving is deterministic: identical session
histories produce identical answers, models, and conflict subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

# When True every SAT answer is audited clause-by-clause against the
# registered hard clauses and the assumed soft clauses (test builds).
check_models = False

_RESTART_BASE = 256


class SolverUsageError(ValueError):
    """Malformed clause or assumption handed to a session."""


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solve call.

    model is a total assignment indexed by variable (entry 0 unused) on SAT.
    conflict_subset on UNSAT names assumption literals that, together with
    the hard clauses and the soft clauses whose selectors appear among them,
    are jointly unsatisfiable.
    """

    satisfiable: bool
    model: tuple[bool, ...] | None = None
    conflict_subset: frozenset[int] | None = None

    def value(self, lit: int) -> bool:
        v = self.model[lit if lit > 0 else -lit]
        return v if lit > 0 else not v


def _luby(i: int) -> int:
    """Luby restart sequence 1,1,2,1,1,2,4,... (1-indexed)."""
    k = 1
    while (1 << (k + 1)) - 1 <= i:
        k += 1
    while (1 << k) - 1 != i:
        i = i - (1 << (k - 1)) + 1
        k = 1
        while (1 << (k + 1)) - 1 <= i:
            k += 1
    return 1 << (k - 1)


class SatSession:
    """One incremental solver instance; operations own their sessions."""

    def __init__(self, num_vars: int = 0):
        self._nvars = 0
        self._assign: list[int] = [0]  # +1 true, -1 false, 0 unassigned
        self._level: list[int] = [0]
        self._reason: list[list[int] | None] = [None]
        self._phase: list[bool] = [False]
        self._activity: list[float] = [0.0]
        self._order: list[tuple[float, int]] = []  # (-activity, var)
        self._watches: dict[int, list[list[int]]] = {}
        self._learnts: list[list[int]] = []
        self._n_problem_clauses = 0
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._var_inc = 1.0
        self._ok = True
        self._hard_audit: list[tuple[int, ...]] = []
        self._soft_audit: dict[int, tuple[int, ...]] = {}
        self._selectors: list[int] = []
        self.solve_count = 0
        for _ in range(num_vars):
            self.new_var()

    @property
    def num_vars(self) -> int:
        return self._nvars

    def new_var(self) -> int:
        self._nvars += 1
        v = self._nvars
        self._assign.append(0)
        self._level.append(0)
        self._reason.append(None)
        self._phase.append(False)
        self._activity.append(0.0)
        heappush(self._order, (-0.0, v))
        return v

    def _grow_to(self, clause: Sequence[int]) -> None:
        top = max((l if l > 0 else -l) for l in clause) if clause else 0
        while self._nvars < top:
            self.new_var()

    def add_hard(self, clause: Iterable[int]) -> None:
        lits = tuple(clause)
        self._check_clause(lits)
        self._grow_to(lits)
        self._hard_audit.append(lits)
        self._add_clause(list(lits))

    def add_soft(self, clause: Iterable[int]) -> int:
        """Register clause behind a fresh selector; assuming the selector
        activates the clause.  Returns the selector variable."""
        lits = tuple(clause)
        self._check_clause(lits)
        self._grow_to(lits)
        s = self.new_var()
        self._selectors.append(s)
        self._soft_audit[s] = lits
        self._add_clause([-s, *lits])
        return s

    @staticmethod
    def _check_clause(lits: tuple[int, ...]) -> None:
        seen = set()
        for l in lits:
            if not isinstance(l, int) or l == 0:
                raise SolverUsageError(f"bad literal {l!r}")
            if -l in seen:
                raise SolverUsageError(f"tautological clause {lits}")
            if l in seen:
                raise SolverUsageError(f"duplicate literal in clause {lits}")
            seen.add(l)

    def _value(self, lit: int) -> int:
        v = self._assign[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def _add_clause(self, lits: list[int]) -> None:
        if self._trail_lim:
            self._cancel_until(0)
        if not self._ok:
            return
        out: list[int] = []
        for l in lits:
            v = self._value(l)
            if v == 1:
                return  # satisfied at root forever
            if v == 0:
                out.append(l)
        if not out:
            self._ok = False
            return
        if len(out) == 1:
            self._enqueue(out[0], None)
            if self._propagate() is not None:
                self._ok = False
            return
        self._n_problem_clauses += 1
        self._attach(out)

    def _attach(self, clause: list[int]) -> None:
        self._watches.setdefault(clause[0], []).append(clause)
        self._watches.setdefault(clause[1], []).append(clause)

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        v = lit if lit > 0 else -lit
        self._assign[v] = 1 if lit > 0 else -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self) -> list[int] | None:
        trail = self._trail
        assign = self._assign
        watches = self._watches
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            wl = watches.get(-p)
            if not wl:
                continue
            keep: list[list[int]] = []
            i = 0
            n = len(wl)
            while i < n:
                c = wl[i]
                i += 1
                if len(c) == 0:
                    continue  # lazily deleted learnt
                if c[0] == -p:
                    c[0] = c[1]
                    c[1] = -p
                first = c[0]
                v0 = assign[first] if first > 0 else -assign[-first]
                if v0 == 1:
                    keep.append(c)
                    continue
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if (assign[lk] if lk > 0 else -assign[-lk]) != -1:
                        c[1] = lk
                        c[k] = -p
                        watches.setdefault(lk, []).append(c)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(c)
                if v0 == -1:
                    keep.extend(wl[i:])
                    watches[-p] = keep
                    self._qhead = len(trail)
                    return c
                self._enqueue(first, c)
            watches[-p] = keep
        return None

    def _cancel_until(self, level: int) -> None:
        if len(self._trail_lim) <= level:
            return
        bound = self._trail_lim[level]
        trail = self._trail
        assign = self._assign
        order = self._order
        activity = self._activity
        for idx in range(len(trail) - 1, bound - 1, -1):
            lit = trail[idx]
            v = lit if lit > 0 else -lit
            self._phase[v] = lit > 0
            assign[v] = 0
            self._reason[v] = None
            heappush(order, (-activity[v], v))
        del trail[bound:]
        del self._trail_lim[level:]
        self._qhead = bound

    def _bump(self, v: int) -> None:
        self._activity[v] += self._var_inc
        if self._activity[v] > 1e100:
            scale = 1e-100
            for u in range(1, self._nvars + 1):
                self._activity[u] *= scale
            self._var_inc *= scale
            self._order = [(-self._activity[u], u) for u in range(1, self._nvars + 1)
                           if self._assign[u] == 0]
            heapify(self._order)
        else:
            heappush(self._order, (-self._activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        """1UIP conflict analysis; returns (learnt clause, backtrack level)."""
        seen = bytearray(self._nvars + 1)
        learnt: list[int] = [0]
        level = self._level
        reason = self._reason
        trail = self._trail
        cur = len(self._trail_lim)
        counter = 0
        p = 0
        idx = len(trail) - 1
        c: list[int] | None = confl
        while True:
            start = 0 if p == 0 else 1
            for j in range(start, len(c)):
                q = c[j]
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                p = trail[idx]
                idx -= 1
                v = p if p > 0 else -p
                if seen[v]:
                    break
            counter -= 1
            seen[v] = 0
            if counter == 0:
                break
            c = reason[v]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        # move the highest-level tail literal into the second watch slot
        best = 1
        for j in range(2, len(learnt)):
            if level[abs(learnt[j])] > level[abs(learnt[best])]:
                best = j
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _analyze_final(self, failed: int) -> frozenset[int]:
        """Assumption subset implying the failure of assumption `failed`."""
        out = {failed}
        v = failed if failed > 0 else -failed
        if self._level[v] == 0:
            return frozenset(out)
        seen = bytearray(self._nvars + 1)
        seen[v] = 1
        bound = self._trail_lim[0]
        for idx in range(len(self._trail) - 1, bound - 1, -1):
            lit = self._trail[idx]
            u = lit if lit > 0 else -lit
            if not seen[u]:
                continue
            seen[u] = 0
            r = self._reason[u]
            if r is None:
                out.add(lit)
            else:
                for q in r[1:]:
                    w = q if q > 0 else -q
                    if self._level[w] > 0:
                        seen[w] = 1
        return frozenset(out)

    def _pick_branch(self) -> int:
        order = self._order
        assign = self._assign
        activity = self._activity
        while order:
            negact, v = order[0]
            if assign[v] != 0 or -negact != activity[v]:
                heappop(order)
                continue
            heappop(order)
            return v
        return 0

    def _record_learnt(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
            return
        self._learnts.append(learnt)
        self._attach(learnt)
        self._enqueue(learnt[0], learnt)

    def _reduce_db(self) -> None:
        """Drop the longer half of the learnt clauses (called at level 0)."""
        ranked = sorted(range(len(self._learnts)), key=lambda i: (len(self._learnts[i]), i))
        kept_ids = set(ranked[: len(ranked) // 2])
        new_learnts: list[list[int]] = []
        for i, c in enumerate(self._learnts):
            v0 = c[0] if c[0] > 0 else -c[0]
            locked = self._assign[v0] != 0 and self._reason[v0] is c
            if i in kept_ids or len(c) <= 2 or locked:
                new_learnts.append(c)
            else:
                c.clear()  # watchers drop emptied clauses lazily
        self._learnts = new_learnts

    def solve(self, assumptions: Iterable[int] = ()) -> SolveResult:
        self.solve_count += 1
        if self._trail_lim:
            self._cancel_until(0)
        if self._ok and self._propagate() is not None:
            self._ok = False
        if not self._ok:
            return SolveResult(False, conflict_subset=frozenset())
        assumps = sorted(set(assumptions))
        aset = set(assumps)
        for a in assumps:
            if a == 0 or abs(a) > self._nvars:
                raise SolverUsageError(f"assumption {a} references an unregistered variable")
            if -a in aset:
                return SolveResult(False, conflict_subset=frozenset((a, -a)))

        conflicts = 0
        restarts = 0
        limit = _RESTART_BASE * _luby(1)
        max_learnts = max(5000, 2 * self._n_problem_clauses)
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self._trail_lim:
                    self._ok = False
                    return SolveResult(False, conflict_subset=frozenset())
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                self._record_learnt(learnt)
                self._var_inc /= 0.95
                conflicts += 1
                if conflicts >= limit:
                    conflicts = 0
                    restarts += 1
                    limit = _RESTART_BASE * _luby(restarts + 1)
                    self._cancel_until(0)
                    if len(self._learnts) > max_learnts:
                        self._reduce_db()
                continue
            level = len(self._trail_lim)
            if level < len(assumps):
                p = assumps[level]
                v = self._value(p)
                if v == 1:
                    self._trail_lim.append(len(self._trail))
                elif v == -1:
                    subset = self._analyze_final(p)
                    self._cancel_until(0)
                    return SolveResult(False, conflict_subset=subset)
                else:
                    self._trail_lim.append(len(self._trail))
                    self._enqueue(p, None)
            else:
                v = self._pick_branch()
                if v == 0:
                    model = tuple(a == 1 for a in self._assign)
                    if check_models:
                        self._audit(model, aset)
                    self._cancel_until(0)
                    return SolveResult(True, model=model)
                self._trail_lim.append(len(self._trail))
                self._enqueue(v if self._phase[v] else -v, None)

    def _audit(self, model: tuple[bool, ...], assumed: set[int]) -> None:
        def holds(clause: tuple[int, ...]) -> bool:
            return any(model[l] if l > 0 else not model[-l] for l in clause)

        for clause in self._hard_audit:
            if not holds(clause):
                raise AssertionError(f"model violates hard clause {clause}")
        for s, clause in self._soft_audit.items():
            if s in assumed and not holds(clause):
                raise AssertionError(f"model violates assumed soft clause {clause}")
        for a in assumed:
            v = a if a > 0 else -a
            if model[v] != (a > 0):
                raise AssertionError(f"model violates assumption {a}")


def new_session(num_vars: int = 0) -> SatSession:
    return SatSession(num_vars)
