"""Cardinality-minimal supports that reconcile two knowledge bases.

Given kb_a |= query and kb_h not |= query, find a support: a subset of
kb_a ∪ kb_h that is consistent with kb_h and entails the query, minimizing
the number of clauses the human side is missing (the update = support \\
kb_h).  The search alternates minimum hitting sets over the corrections
found so far with correction-set extraction, stopping at the first seed
whose clauses close the entailment gap; a final unsatisfiable-subset pass
trims the kb_h-side contribution.

In restricted mode (used by the planning frontend) the support may draw its
kb_h-side clauses only from kb_a ∩ kb_h, so the whole support lies within
kb_a.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .formula import Clause, CnfFormula, negate_query, intersect_kbs
from .hitting import HittingSetInstance, min_hitting_set
from .minsets import SoftSolver, extract_mcs, extract_mus
from .solver import SatSession

GENERAL = "general"
RESTRICTED = "restricted"


class ReconcileError(ValueError):
    pass


class PremiseError(ReconcileError):
    """kb_a does not entail the query (or is itself unsatisfiable)."""


class ReconcileTimeout(Exception):
    """Deadline hit; carries whatever statistics were gathered."""

    def __init__(self, message: str, *, iterations: int = 0, mcs_count: int = 0,
                 oracle_calls: int = 0, elapsed: float = 0.0):
        super().__init__(message)
        self.iterations = iterations
        self.mcs_count = mcs_count
        self.oracle_calls = oracle_calls
        self.elapsed = elapsed


class _Expired(Exception):
    pass


class _Deadline:
    def __init__(self, seconds: float | None):
        self._end = None if seconds is None else time.monotonic() + seconds

    def check(self) -> None:
        if self._end is not None and time.monotonic() > self._end:
            raise _Expired


@dataclass(frozen=True)
class ReconcileProblem:
    kb_a: CnfFormula
    kb_h: CnfFormula
    query: CnfFormula
    mode: str = GENERAL


@dataclass(frozen=True)
class Explanation:
    """Support plus run statistics.  Clause tuples are canonically sorted."""

    support: tuple[Clause, ...]
    update: tuple[Clause, ...]
    removed_from_kb_h: tuple[Clause, ...]
    iterations: int
    mcs_count: int
    oracle_calls: int
    elapsed: float = field(compare=False)
    mode: str = GENERAL
    restricted_consistency_ok: bool | None = None


@dataclass(frozen=True)
class VerificationReport:
    entailed: bool
    minimal: bool
    consistent: bool
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.entailed and self.minimal and self.consistent


def _env_vars(*formulas: CnfFormula) -> int:
    return max((f.num_vars for f in formulas), default=0)


def _check_premises(kb_a: CnfFormula, query: CnfFormula, neg_clauses: Sequence[Clause],
                    num_vars: int) -> int:
    """kb_a must be satisfiable and entail the query.  Returns solve count."""
    session = SatSession(num_vars)
    for c in kb_a.clauses:
        session.add_hard(c)
    if not session.solve().satisfiable:
        raise PremiseError("kb_a is unsatisfiable")
    selectors = [session.add_soft(c) for c in neg_clauses]
    if session.solve(selectors).satisfiable:
        raise PremiseError("kb_a does not entail the query")
    return session.solve_count


def preprocess_consistency(
    kb_a: CnfFormula, kb_h: CnfFormula, num_vars: int | None = None,
    cancel=None,
) -> tuple[tuple[Clause, ...], tuple[Clause, ...], int]:
    """Restore mutual consistency by removing a minimal correction set of
    kb_h-only clauses.  Returns (kb_h clauses kept, clauses removed, solves).

    kb_a must be satisfiable (checked by the caller)."""
    nv = num_vars if num_vars is not None else _env_vars(kb_a, kb_h)
    in_a = kb_a.clause_set()
    diff = [c for c in kb_h.clauses if c not in in_a]
    if not diff:
        return kb_h.clauses, (), 0
    ws = SoftSolver(diff, hard=kb_a.clauses, num_vars=nv)
    if ws.solve_ids(range(len(diff))).satisfiable:
        return kb_h.clauses, (), ws.oracle_calls
    mcs = extract_mcs(ws, cancel=cancel)
    removed = {diff[i] for i in mcs.ids}
    kept = tuple(c for c in kb_h.clauses if c not in removed)
    return kept, tuple(sorted(removed)), ws.oracle_calls


def reconcile(problem: ReconcileProblem, *, timeout: float | None = None) -> Explanation:
    """Smallest-update support reconciling problem.kb_h with problem.kb_a.

    Raises PremiseError when kb_a is unsatisfiable or does not entail the
    query, and ReconcileTimeout when the deadline passes between oracle
    calls.  When kb_h already entails the query the update comes out empty.
    """
    if problem.mode not in (GENERAL, RESTRICTED):
        raise ReconcileError(f"unknown mode {problem.mode!r}")
    started = time.monotonic()
    deadline = _Deadline(timeout)
    kb_a, kb_h, query = problem.kb_a, problem.kb_h, problem.query
    env = _env_vars(kb_a, kb_h, query)
    neg = negate_query(query, env + 1)
    total_vars = env + len(neg.aux_vars)

    oracle_calls = 0
    iterations = 0
    instance = HittingSetInstance()
    ws = mus_ws = None
    try:
        oracle_calls += _check_premises(kb_a, query, neg.clauses, total_vars)

        hard_ids, soft_ids = intersect_kbs(kb_a, kb_h)
        shared = [kb_a.clauses[i] for i in sorted(hard_ids)]
        candidates = [kb_a.clauses[i] for i in sorted(soft_ids)]

        kept_h, removed, calls = preprocess_consistency(kb_a, kb_h, env, deadline.check)
        oracle_calls += calls

        context = shared if problem.mode == RESTRICTED else list(kept_h)
        ws = SoftSolver(candidates, hard=context + list(neg.clauses), num_vars=total_vars)
        while True:
            deadline.check()
            iterations += 1
            seed = min_hitting_set(instance, cancel=deadline.check)
            res = ws.solve_ids(seed)
            if res.satisfiable:
                mcs = extract_mcs(ws, seed=seed, first_result=res, cancel=deadline.check)
                instance.add_set(mcs.ids)
                continue
            epsilon = [candidates[i] for i in sorted(seed)]
            mus_ws = SoftSolver(
                context, hard=epsilon + list(neg.clauses), num_vars=total_vars
            )
            mus = extract_mus(mus_ws, cancel=deadline.check)
            oracle_calls += ws.oracle_calls + mus_ws.oracle_calls
            support = tuple(sorted(set(epsilon) | {context[i] for i in mus.ids}))
            in_h = kb_h.clause_set()
            update = tuple(sorted(c for c in support if c not in in_h))
            consistency_ok = None
            if problem.mode == RESTRICTED:
                check = SatSession(total_vars)
                for c in kept_h:
                    check.add_hard(c)
                for c in support:
                    if c not in set(kept_h):
                        check.add_hard(c)
                consistency_ok = check.solve().satisfiable
                oracle_calls += check.solve_count
            return Explanation(
                support=support,
                update=update,
                removed_from_kb_h=tuple(removed),
                iterations=iterations,
                mcs_count=len(instance),
                oracle_calls=oracle_calls,
                elapsed=time.monotonic() - started,
                mode=problem.mode,
                restricted_consistency_ok=consistency_ok,
            )
    except _Expired:
        for session in (ws, mus_ws):
            if session is not None:
                oracle_calls += session.oracle_calls
        raise ReconcileTimeout(
            f"reconciliation exceeded {timeout} seconds",
            iterations=iterations,
            mcs_count=len(instance),
            oracle_calls=oracle_calls,
            elapsed=time.monotonic() - started,
        ) from None


def smallest_support(kb: CnfFormula, query: CnfFormula, *,
                     timeout: float | None = None) -> Explanation:
    """Cardinality-minimal subset of kb entailing the query (single KB).

    Same hitting-set loop as reconcile with the whole kb as candidate
    clauses; the returned seed itself is the support.
    """
    started = time.monotonic()
    deadline = _Deadline(timeout)
    env = _env_vars(kb, query)
    neg = negate_query(query, env + 1)
    total_vars = env + len(neg.aux_vars)
    oracle_calls = _check_premises(kb, query, neg.clauses, total_vars)

    candidates = list(kb.clauses)
    ws = SoftSolver(candidates, hard=list(neg.clauses), num_vars=total_vars)
    instance = HittingSetInstance()
    iterations = 0
    try:
        while True:
            deadline.check()
            iterations += 1
            seed = min_hitting_set(instance, cancel=deadline.check)
            res = ws.solve_ids(seed)
            if res.satisfiable:
                mcs = extract_mcs(ws, seed=seed, first_result=res, cancel=deadline.check)
                instance.add_set(mcs.ids)
                continue
            support = tuple(sorted(candidates[i] for i in seed))
            return Explanation(
                support=support,
                update=(),
                removed_from_kb_h=(),
                iterations=iterations,
                mcs_count=len(instance),
                oracle_calls=oracle_calls + ws.oracle_calls,
                elapsed=time.monotonic() - started,
            )
    except _Expired:
        raise ReconcileTimeout(
            f"support search exceeded {timeout} seconds",
            iterations=iterations,
            mcs_count=len(instance),
            oracle_calls=oracle_calls + ws.oracle_calls,
            elapsed=time.monotonic() - started,
        ) from None


_TT_LIMIT_VARS = 20


def brute_force_min_update(
    problem: ReconcileProblem, *, max_candidates: int = 14
) -> tuple[int, tuple[Clause, ...]]:
    """Independent oracle: smallest update by exhaustive subset sweep.

    Enumerates subsets of kb_a \\ kb_h in ascending cardinality (id-ordered
    within each size) and returns the first whose union with the mode's
    context entails the query.  Satisfiability is decided by truth-table
    bitmasks when the variable envelope allows, otherwise by fresh selector
    sessions; neither path shares state with reconcile's search.
    """
    kb_a, kb_h, query = problem.kb_a, problem.kb_h, problem.query
    env = _env_vars(kb_a, kb_h, query)
    hard_ids, soft_ids = intersect_kbs(kb_a, kb_h)
    candidates = [kb_a.clauses[i] for i in sorted(soft_ids)]
    if len(candidates) > max_candidates:
        raise ReconcileError(
            f"{len(candidates)} candidate clauses exceed the exhaustive sweep limit"
        )
    kept_h, _removed, _ = preprocess_consistency(kb_a, kb_h, env)
    if problem.mode == RESTRICTED:
        context = [kb_a.clauses[i] for i in sorted(hard_ids)]
    else:
        context = list(kept_h)

    if env <= _TT_LIMIT_VARS:
        from .minsets import _clause_assignments

        full = (1 << (1 << env)) - 1
        ctx_mask = full
        for c in context:
            ctx_mask &= _clause_assignments(c, env)
        query_mask = full
        for c in query.clauses:
            query_mask &= _clause_assignments(c, env)
        cand_masks = [_clause_assignments(c, env) for c in candidates]

        def entails(subset: tuple[int, ...]) -> bool:
            m = ctx_mask
            for i in subset:
                m &= cand_masks[i]
            return m & ~query_mask == 0

    else:
        neg = negate_query(query, env + 1)
        ws = SoftSolver(candidates, hard=context + list(neg.clauses),
                        num_vars=env + len(neg.aux_vars))

        def entails(subset: tuple[int, ...]) -> bool:
            return not ws.solve_ids(subset).satisfiable

    ids = range(len(candidates))
    for size in range(len(candidates) + 1):
        for subset in combinations(ids, size):
            if entails(subset):
                return size, tuple(candidates[i] for i in subset)
    raise PremiseError("no candidate subset closes the entailment gap")


def verify_explanation(
    kb_h: CnfFormula | Iterable[Clause],
    support: Iterable[Clause],
    query: CnfFormula,
) -> VerificationReport:
    """Check a support against the knowledge base it should update.

    entailed: kb_h ∪ support ∪ ¬query unsatisfiable;
    minimal: every proper subset of the support fails to entail the query on
    its own; consistent: kb_h ∪ support satisfiable.
    """
    kb_h_clauses = tuple(kb_h.clauses if isinstance(kb_h, CnfFormula) else kb_h)
    support = tuple(sorted(set(tuple(c) for c in support)))
    env = max(
        [query.num_vars]
        + [abs(l) for c in kb_h_clauses for l in c]
        + [abs(l) for c in support for l in c]
    )
    neg = negate_query(query, env + 1)
    total = env + len(neg.aux_vars)
    failures: list[str] = []

    session = SatSession(total)
    for c in kb_h_clauses:
        session.add_hard(c)
    for c in support:
        session.add_hard(c)
    neg_selectors = [session.add_soft(c) for c in neg.clauses]
    entailed = not session.solve(neg_selectors).satisfiable
    if not entailed:
        failures.append("support with kb_h does not entail the query")
    consistent = session.solve().satisfiable
    if not consistent:
        failures.append("support conflicts with kb_h")

    minimal = True
    probe = SoftSolver(list(support), hard=list(neg.clauses), num_vars=total)
    for i in range(len(support)):
        rest = set(range(len(support))) - {i}
        if not probe.solve_ids(rest).satisfiable:
            minimal = False
            failures.append(f"support clause {support[i]} is redundant")
    return VerificationReport(entailed, minimal, consistent, tuple(failures))


def serialize_explanation(expl: Explanation,
                          verification: VerificationReport | None = None) -> str:
    """Line-delimited records; parse_explanation_records inverts it."""
    lines = [f"explanation mode={expl.mode}"]
    for role, clauses in (
        ("support", expl.support),
        ("update", expl.update),
        ("removed", expl.removed_from_kb_h),
    ):
        for c in clauses:
            lits = ",".join(str(l) for l in c) if c else "-"
            lines.append(f"clause role={role} lits={lits}")
    lines.append(
        "stat"
        f" support_size={len(expl.support)}"
        f" update_size={len(expl.update)}"
        f" removed_size={len(expl.removed_from_kb_h)}"
        f" iterations={expl.iterations}"
        f" mcs_count={expl.mcs_count}"
        f" oracle_calls={expl.oracle_calls}"
    )
    def flag(value: bool) -> str:
        return "true" if value else "false"

    if expl.restricted_consistency_ok is not None:
        lines.append(
            f"assumption restricted_consistency_ok={flag(expl.restricted_consistency_ok)}"
        )
    if verification is not None:
        lines.append(
            "verify"
            f" entailed={flag(verification.entailed)}"
            f" minimal={flag(verification.minimal)}"
            f" consistent={flag(verification.consistent)}"
            f" ok={flag(verification.ok)}"
        )
    return "\n".join(lines) + "\n"


def parse_explanation_records(text: str) -> dict[str, list[Clause]]:
    """Clause sections of a serialized explanation, keyed by role."""
    out: dict[str, list[Clause]] = {"support": [], "update": [], "removed": []}
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] != "clause":
            continue
        fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
        role = fields.get("role")
        lits = fields.get("lits", "-")
        if role not in out:
            continue
        clause = () if lits == "-" else tuple(int(x) for x in lits.split(","))
        out[role].append(clause)
    return out
