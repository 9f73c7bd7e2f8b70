"""Bounded planning-as-SAT encoding.

Per step t: action variables imply their preconditions at t and effects at
t+1; explanatory frame clauses make every fluent change name a cause; an
at-least-one clause plus pairwise at-most-one clauses force exactly one
action per step.  Step 0 carries the closed-world initial state; the goal
can be emitted as units at the horizon.

Two encodings share one variable space when built with the same
fluent_order/action_order, which is how an agent's knowledge base and a
degraded user model stay comparable clause-for-clause: an action or fluent
missing from the weaker model keeps its variable but contributes no
clauses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..formula import Clause, CnfFormula
from ..solver import SatSession
from .model import GroundAction, GroundAtom, Plan, PlanningError, PlanningProblem


@dataclass(frozen=True)
class ClauseOrigin:
    """Why a clause exists: kind, step, and the action/fluent it concerns."""

    kind: str  # init|goal|pre|add|del|frame_on|frame_off|alo|amo|goal_def
    t: int
    action: str | None = None
    fluent: str | None = None


@dataclass
class BoundedEncoding:
    problem: PlanningProblem
    horizon: int
    cnf: CnfFormula
    var_map: dict[str, int]
    origins: tuple[ClauseOrigin, ...]
    fluent_order: tuple[GroundAtom, ...]
    action_order: tuple[str, ...]
    goal_vars: tuple[tuple[int, ...], ...]  # per step, the goal fluents' variables
    notes: tuple[str, ...] = ()

    def var(self, name: str, t: int) -> int:
        try:
            return self.var_map[f"{name}@{t}"]
        except KeyError:
            raise PlanningError(f"unknown name {name!r} at step {t}") from None

    def name_of(self, var: int) -> str:
        rev = getattr(self, "_rev", None)
        if rev is None:
            rev = {v: k for k, v in self.var_map.items()}
            self._rev = rev
        return rev.get(var, f"aux{var}")

    def literal_name(self, lit: int) -> str:
        return ("-" if lit < 0 else "") + self.name_of(abs(lit))

    def clause_names(self, clause: Clause) -> str:
        return ",".join(self.literal_name(l) for l in clause)


def encode_bounded(
    problem: PlanningProblem,
    n: int,
    include_goal: bool,
    *,
    fluent_order: Sequence[GroundAtom] | None = None,
    action_order: Sequence[str] | None = None,
) -> BoundedEncoding:
    """CNF whose models are exactly the length-n executions of `problem`
    (reaching the goal when include_goal).

    fluent_order/action_order fix the variable numbering; they default to
    the problem's own universe and must cover it.
    """
    if n < 0:
        raise PlanningError("horizon must be nonnegative")
    fluents = tuple(fluent_order) if fluent_order is not None else problem.fluents
    if action_order is not None:
        act_labels = tuple(action_order)
    else:
        act_labels = tuple(a.label for a in problem.actions)
    fl_index = {f: i for i, f in enumerate(fluents)}
    act_index = {lbl: j for j, lbl in enumerate(act_labels)}
    if not set(problem.fluents) <= set(fl_index):
        raise PlanningError("fluent_order does not cover the problem's fluents")
    if not {a.label for a in problem.actions} <= set(act_index):
        raise PlanningError("action_order does not cover the problem's actions")

    nf, na = len(fluents), len(act_labels)
    num_vars = (n + 1) * nf + n * na

    def fvar(atom: GroundAtom, t: int) -> int:
        return t * nf + fl_index[atom] + 1

    def avar(label: str, t: int) -> int:
        return (n + 1) * nf + t * na + act_index[label] + 1

    var_map: dict[str, int] = {}
    for t in range(n + 1):
        for f in fluents:
            var_map[f"{f}@{t}"] = fvar(f, t)
    for t in range(n):
        for lbl in act_labels:
            var_map[f"{lbl}@{t}"] = avar(lbl, t)

    own_actions = problem.actions  # already canonically sorted
    adders: dict[GroundAtom, list[GroundAction]] = {f: [] for f in fluents}
    deleters: dict[GroundAtom, list[GroundAction]] = {f: [] for f in fluents}
    for a in own_actions:
        for f in sorted(a.add):
            adders[f].append(a)
        for f in sorted(a.delete):
            deleters[f].append(a)

    clauses: list[Clause] = []
    origins: list[ClauseOrigin] = []
    notes: list[str] = []
    seen: dict[Clause, int] = {}

    def emit(clause: tuple[int, ...], origin: ClauseOrigin) -> None:
        clause = tuple(sorted(set(clause), key=abs))
        if clause in seen:
            notes.append(f"duplicate clause suppressed: {origin.kind}@{origin.t}")
            return
        seen[clause] = len(clauses)
        clauses.append(clause)
        origins.append(origin)

    own_fluents = set(problem.fluents)
    for f in fluents:
        if f in own_fluents:
            lit = fvar(f, 0) if f in problem.init else -fvar(f, 0)
            emit((lit,), ClauseOrigin("init", 0, fluent=str(f)))

    for t in range(n):
        for a in own_actions:
            av = avar(a.label, t)
            for p in sorted(a.pre):
                emit((-av, fvar(p, t)), ClauseOrigin("pre", t, a.label, str(p)))
            for e in sorted(a.add):
                emit((-av, fvar(e, t + 1)), ClauseOrigin("add", t, a.label, str(e)))
            for e in sorted(a.delete):
                emit((-av, -fvar(e, t + 1)), ClauseOrigin("del", t, a.label, str(e)))
        for f in fluents:
            if f not in own_fluents:
                continue
            causes_on = tuple(avar(a.label, t) for a in adders[f])
            emit(
                (fvar(f, t), -fvar(f, t + 1)) + causes_on,
                ClauseOrigin("frame_on", t, fluent=str(f)),
            )
            causes_off = tuple(avar(a.label, t) for a in deleters[f])
            emit(
                (-fvar(f, t), fvar(f, t + 1)) + causes_off,
                ClauseOrigin("frame_off", t, fluent=str(f)),
            )
        if own_actions:
            emit(
                tuple(avar(a.label, t) for a in own_actions),
                ClauseOrigin("alo", t),
            )
        else:
            notes.append(f"at-least-one omitted at step {t}: no actions")
        for i in range(len(own_actions)):
            for j in range(i + 1, len(own_actions)):
                emit(
                    (-avar(own_actions[i].label, t), -avar(own_actions[j].label, t)),
                    ClauseOrigin(
                        "amo", t,
                        action=f"{own_actions[i].label}|{own_actions[j].label}",
                    ),
                )

    if include_goal:
        for g in sorted(problem.goal):
            emit((fvar(g, n),), ClauseOrigin("goal", n, fluent=str(g)))

    goal_sorted = tuple(sorted(problem.goal))
    goal_vars = tuple(
        tuple(fvar(g, t) for g in goal_sorted) for t in range(n + 1)
    )
    cnf = CnfFormula.from_clauses(clauses, num_vars)
    if len(cnf.clauses) != len(clauses):  # pragma: no cover - emit() pre-dedupes
        raise PlanningError("encoding produced duplicate clauses")
    return BoundedEncoding(
        problem=problem,
        horizon=n,
        cnf=cnf,
        var_map=var_map,
        origins=tuple(origins),
        fluent_order=fluents,
        action_order=act_labels,
        goal_vars=goal_vars,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class OptimalityQuery:
    """The claim that no execution reaches the goal before the horizon.

    query: conjunction of units ¬g_t for t < n.  For multi-fluent goals the
    g_t are fresh aggregate variables with definition clauses g_t ↔ ⋀ f@t,
    which must be added to every knowledge base involved; singleton goals
    use the goal fluent's own variable and need no definitions.
    """

    query: CnfFormula
    definitions: tuple[Clause, ...]
    new_names: tuple[tuple[int, str], ...]
    goal_step_literals: tuple[int, ...]


def optimality_query(encoding: BoundedEncoding) -> OptimalityQuery:
    n = encoding.horizon
    goal = tuple(sorted(encoding.problem.goal))
    if n < 1:
        raise PlanningError("optimality needs horizon >= 1")
    if not goal:
        raise PlanningError("optimality needs a nonempty goal")
    if len(goal) == 1:
        g = goal[0]
        lits = tuple(encoding.var(str(g), t) for t in range(n))
        query = CnfFormula.from_clauses([(-v,) for v in lits], encoding.cnf.num_vars)
        return OptimalityQuery(query, (), (), lits)

    base = encoding.cnf.num_vars
    defs: list[Clause] = []
    names: list[tuple[int, str]] = []
    lits: list[int] = []
    for t in range(n):
        gv = base + t + 1
        names.append((gv, f"goal@{t}"))
        lits.append(gv)
        back: list[int] = [gv]
        for f in goal:
            fv = encoding.var(str(f), t)
            defs.append((-gv, fv))
            back.append(-fv)
        defs.append(tuple(back))
    query = CnfFormula.from_clauses([(-v,) for v in lits], base + n)
    return OptimalityQuery(query, tuple(defs), tuple(names), tuple(lits))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    missing_clauses: tuple[Clause, ...] = ()
    missing_origins: tuple[ClauseOrigin, ...] = ()


def check_feasibility(
    encoding: BoundedEncoding,
    plan: Plan,
    reference: BoundedEncoding | None = None,
) -> FeasibilityResult:
    """Can this encoding execute `plan` and end in the goal?

    Solves under assumptions: each plan step's action variable plus the
    goal fluents at the horizon.  When infeasible and a reference encoding
    is given, reports the reference's action-dynamics clauses (pre/add/del)
    for the plan's steps that the checked encoding lacks.
    """
    n = encoding.horizon
    if len(plan) != n:
        raise PlanningError(f"plan length {len(plan)} differs from horizon {n}")
    assumptions = [encoding.var(a.label, t) for t, a in enumerate(plan)]
    assumptions += list(encoding.goal_vars[n])
    session = SatSession(encoding.cnf.num_vars)
    for c in encoding.cnf.clauses:
        session.add_hard(c)
    feasible = session.solve(assumptions).satisfiable
    if feasible or reference is None:
        return FeasibilityResult(feasible)
    have = encoding.cnf.clause_set()
    missing: list[Clause] = []
    origins: list[ClauseOrigin] = []
    for t, a in enumerate(plan):
        for clause, origin in zip(reference.cnf.clauses, reference.origins):
            if (
                origin.kind in ("pre", "add", "del")
                and origin.t == t
                and origin.action == a.label
                and clause not in have
            ):
                missing.append(clause)
                origins.append(origin)
    return FeasibilityResult(False, tuple(missing), tuple(origins))


def decode_model(encoding: BoundedEncoding, model: Sequence[bool]) -> Plan:
    """Plan named by the model's true action variables, one per step."""
    by_label = {a.label: a for a in encoding.problem.actions}
    steps: list[GroundAction] = []
    for t in range(encoding.horizon):
        chosen = [
            lbl for lbl in by_label
            if model[encoding.var(lbl, t)]
        ]
        if len(chosen) != 1:
            raise PlanningError(
                f"model selects {len(chosen)} actions at step {t}, expected 1"
            )
        steps.append(by_label[chosen[0]])
    return tuple(steps)


def write_var_map(encoding: BoundedEncoding) -> str:
    """Sidecar text: `<variable> <name>@<t>` per line, variable-sorted."""
    lines = [f"{v} {name}" for name, v in encoding.var_map.items()]
    lines.sort(key=lambda s: int(s.split()[0]))
    return "\n".join(lines) + "\n"
