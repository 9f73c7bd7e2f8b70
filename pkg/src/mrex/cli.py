"""Command-line front end.

Subcommands cover clause-level reconciliation (``reconcile``, ``verify``,
``backbone``, ``tweak-cnf``) and the planning pipeline (``explain-plan``,
``tweak-model``, ``encode-plan``).  Output comes in two formats: ``text``
for humans and ``records`` — line-delimited ``kind key=value ...`` rows —
for harnesses.  Records are deterministic for a fixed (inputs, seed,
config) triple; wall-clock readings appear only on lines starting with
``time ``.

Exit codes:
  0   success
  2   command-line usage error (argparse)
  10  input could not be parsed (DIMACS, PDDL, query, plan, explanation)
  11  premise violation (kb_a unsatisfiable / does not entail the query,
      unsatisfiable backbone input, empty backbone)
  12  time limit exceeded (partial statistics are still reported)
  13  verification failure
  14  resource cap exceeded or goal unreachable
"""

from __future__ import annotations

import argparse
import hashlib
import math
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .backbone import UnsatisfiableError, compute_backbone
from .formula import (
    Clause,
    CnfFormula,
    FormulaError,
    parse_dimacs,
    parse_query_text,
    write_dimacs,
)
from .planning import (
    BoundedEncoding,
    GoalUnreachableError,
    GroundingCapError,
    PddlParseError,
    PlanningError,
    StateCapError,
    check_feasibility,
    encode_bounded,
    ground,
    optimal_plan_search,
    optimality_query,
    parse_pddl,
    parse_plan_text,
    tweak_model,
    validate_plan,
    write_plan_text,
    write_var_map,
)
from .planning.ground import DEFAULT_ACTION_CAP
from .planning.search import DEFAULT_STATE_CAP
from .reconcile import (
    GENERAL,
    RESTRICTED,
    Explanation,
    PremiseError,
    ReconcileProblem,
    ReconcileTimeout,
    parse_explanation_records,
    reconcile,
    serialize_explanation,
    verify_explanation,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 10
EXIT_PREMISE = 11
EXIT_TIMEOUT = 12
EXIT_VERIFY = 13
EXIT_CAP = 14

DEFAULT_TIMEOUT = 1500.0

TWEAK_CNF_RATES = {9: 0.1, 10: 0.2, 11: 0.3, 12: 0.4}
TRIM_RATE = 0.2


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation parameters; echoed into every report."""

    command: str
    inputs: tuple[str, ...]
    mode: str = GENERAL
    seed: int = 0
    timeout: float = DEFAULT_TIMEOUT
    scenario: int | None = None
    query: str | None = None
    out: str | None = None
    fmt: str = "text"
    k: int = 0
    count: int = 2
    horizon: int | None = None
    include_goal: bool = False

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("time limit must be positive")


@dataclass
class Report:
    """Accumulates structured records and a parallel human-readable view."""

    records: list[str] = field(default_factory=list)
    text_lines: list[str] = field(default_factory=list)

    def record(self, _rectype: str, **fields: object) -> None:
        parts = [_rectype]
        for key, value in fields.items():
            parts.append(f"{key}={_fmt_value(value)}")
        self.records.append(" ".join(parts))

    def raw_record(self, line: str) -> None:
        self.records.append(line)

    def text(self, line: str) -> None:
        self.text_lines.append(line)

    def render(self, fmt: str) -> str:
        lines = self.records if fmt == "records" else self.text_lines
        return "\n".join(lines) + ("\n" if lines else "")


def _fmt_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.3f}"
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    return str(value)


def _lits(clause: Clause) -> str:
    return ",".join(str(l) for l in clause)


def _read_input(path: str, report: Report) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    report.record("input", path=path, sha256=hashlib.sha256(data).hexdigest())
    return data.decode("utf-8")


class CliError(Exception):
    """Carries a CLI exit code together with the failure message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _start(config: RunConfig) -> Report:
    report = Report()
    fields: dict[str, object] = {
        "command": config.command,
        "seed": config.seed,
        "mode": config.mode,
        "timeout": config.timeout,
    }
    if config.scenario is not None:
        fields["scenario"] = config.scenario
    if config.horizon is not None:
        fields["horizon"] = config.horizon
    report.record("run", **fields)
    report.text(f"{config.command}: seed={config.seed} mode={config.mode}")
    return report


def _write_out(path: str, content: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(content)


def _write_kb(path: str, formula: CnfFormula, log_lines: Iterable[str]) -> None:
    """Write a KB plus the provenance/deletion log that produced it."""
    _write_out(path, write_dimacs(formula))
    _write_out(path + ".log", "\n".join(log_lines) + "\n")


# ---------------------------------------------------------------------------
# reconcile / verify


def _parse_cnf(path: str, report: Report, label: str) -> CnfFormula:
    try:
        formula = parse_dimacs(_read_input(path, report))
    except FormulaError as exc:
        raise CliError(EXIT_PARSE, f"{label}: {exc}") from exc
    report.record(
        "kb", name=label, vars=formula.num_vars, clauses=len(formula.clauses)
    )
    return formula


def _parse_query(path: str, report: Report) -> CnfFormula:
    try:
        return parse_query_text(_read_input(path, report))
    except FormulaError as exc:
        raise CliError(EXIT_PARSE, f"query: {exc}") from exc


def _explanation_records(
    expl: Explanation, verification=None, names=None
) -> list[str]:
    lines = serialize_explanation(expl, verification).splitlines()
    if names is None:
        return lines
    out = []
    for line in lines:
        if line.startswith("clause "):
            lits = line.rsplit("lits=", 1)[1]
            clause = tuple(int(t) for t in lits.split(",")) if lits else ()
            line += f" names={';'.join(names(l) for l in clause)}"
        out.append(line)
    return out


def cmd_reconcile(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    kb_a = _parse_cnf(config.inputs[0], report, "kb_a")
    kb_h = _parse_cnf(config.inputs[1], report, "kb_h")
    query = _parse_query(config.query, report)
    problem = ReconcileProblem(kb_a, kb_h, query, mode=config.mode)
    started = time.monotonic()
    try:
        expl = reconcile(problem, timeout=config.timeout)
    except PremiseError as exc:
        report.record("error", kind="premise", msg=str(exc))
        report.text(f"premise violation: {exc}")
        return report, EXIT_PREMISE
    except ReconcileTimeout as exc:
        report.record(
            "stat",
            iterations=exc.iterations,
            mcs_count=exc.mcs_count,
            oracle_calls=exc.oracle_calls,
        )
        report.record("error", kind="timeout", msg=str(exc))
        report.record("time", elapsed=exc.elapsed)
        report.text(f"timeout after {exc.elapsed:.3f}s ({exc.iterations} iterations)")
        return report, EXIT_TIMEOUT
    removed = set(expl.removed_from_kb_h)
    kept = [c for c in kb_h.clauses if c not in removed]
    verification = verify_explanation(kept, expl.support, query)
    for line in _explanation_records(expl, verification):
        report.raw_record(line)
    report.record("time", elapsed=time.monotonic() - started)
    report.text(
        f"support size {len(expl.support)}, update size {len(expl.update)}, "
        f"removed {len(expl.removed_from_kb_h)} clause(s) from kb_h"
    )
    for clause in expl.update:
        report.text(f"  add to kb_h: {_lits(clause)}")
    for clause in expl.removed_from_kb_h:
        report.text(f"  remove from kb_h: {_lits(clause)}")
    report.text(f"verification: {'ok' if verification.ok else 'FAILED'}")
    if config.out:
        _write_out(config.out, "\n".join(_explanation_records(expl, verification)) + "\n")
    if not verification.ok:
        report.record("error", kind="verify", msg=";".join(verification.failures))
        return report, EXIT_VERIFY
    return report, EXIT_OK


def cmd_verify(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    kb_h = _parse_cnf(config.inputs[0], report, "kb_h")
    try:
        roles = parse_explanation_records(_read_input(config.inputs[1], report))
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"explanation: {exc}") from exc
    query = _parse_query(config.query, report)
    support = roles.get("support", [])
    removed = set(roles.get("removed", []))
    kept = [c for c in kb_h.clauses if c not in removed]
    verification = verify_explanation(kept, support, query)
    report.record(
        "verify",
        entailed=verification.entailed,
        minimal=verification.minimal,
        consistent=verification.consistent,
        ok=verification.ok,
    )
    for failure in verification.failures:
        report.record("failure", check=failure)
        report.text(f"failed: {failure}")
    report.text(f"verification: {'ok' if verification.ok else 'FAILED'}")
    return report, EXIT_OK if verification.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# backbone


def cmd_backbone(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    kb = _parse_cnf(config.inputs[0], report, "kb")
    try:
        backbone = compute_backbone(kb)
    except UnsatisfiableError as exc:
        report.record("error", kind="premise", msg=str(exc))
        report.text(f"premise violation: {exc}")
        return report, EXIT_PREMISE
    if not backbone:
        report.record("error", kind="premise", msg="no backbone query derivable")
        report.text("kb has an empty backbone; no query derivable")
        return report, EXIT_PREMISE
    chosen = list(backbone)
    if config.k > 0:
        if config.k >= len(backbone):
            report.record("warn", msg="k exceeds backbone size; using all literals")
            report.text(f"warning: k={config.k} >= backbone size {len(backbone)}")
        else:
            rng = random.Random(config.seed)
            pool = list(backbone)
            chosen = sorted(
                (pool.pop(rng.randrange(len(pool))) for _ in range(config.k)),
                key=abs,
            )
    report.record("stat", backbone_size=len(backbone), sampled=len(chosen))
    for lit in chosen:
        report.record("literal", value=lit)
    report.text(f"backbone size {len(backbone)}; query literals: "
                + " ".join(str(l) for l in chosen))
    if config.out:
        lines = [f"run command=backbone seed={config.seed} k={config.k}"]
        lines += [r for r in report.records if r.startswith("input ")]
        _write_out(config.out, "\n".join(str(l) for l in chosen) + "\n")
        _write_out(config.out + ".log", "\n".join(lines) + "\n")
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# tweak-cnf


def tweak_cnf(
    formula: CnfFormula, scenario: int, seed: int
) -> tuple[CnfFormula, list[str]]:
    """Remove ⌈p·m⌉ clauses, then trim ⌈0.2·len⌉ literals from ⌈p·m⌉ of the
    surviving multi-literal clauses (unit clauses are skipped and logged)."""
    if scenario not in TWEAK_CNF_RATES:
        raise CliError(EXIT_USAGE, f"unknown CNF scenario {scenario}")
    rate = TWEAK_CNF_RATES[scenario]
    rng = random.Random(seed)
    m = len(formula.clauses)
    quota = math.ceil(rate * m)
    log: list[str] = []

    pool = list(range(m))
    removed: set[int] = set()
    for _ in range(min(quota, len(pool))):
        idx = pool.pop(rng.randrange(len(pool)))
        removed.add(idx)
        log.append(f"remove index={idx} lits={_lits(formula.clauses[idx])}")

    survivors = {i: list(formula.clauses[i]) for i in range(m) if i not in removed}
    trim_pool = sorted(survivors)
    trimmed = skipped = 0
    while trimmed < quota and trim_pool:
        idx = trim_pool.pop(rng.randrange(len(trim_pool)))
        clause = survivors[idx]
        if len(clause) < 2:
            skipped += 1
            log.append(f"skip index={idx} reason=unit")
            continue
        drop = math.ceil(TRIM_RATE * len(clause))
        before = len(clause)
        gone: list[int] = []
        for _ in range(drop):
            gone.append(clause.pop(rng.randrange(len(clause))))
        trimmed += 1
        log.append(
            f"trim index={idx} removed={_fmt_value(sorted(gone, key=abs))} "
            f"before={before} after={len(clause)}"
        )
    log.append(
        f"stat clauses_before={m} clauses_after={len(survivors)} "
        f"removed={len(removed)} trimmed={trimmed} skipped={skipped}"
    )
    out = CnfFormula.from_clauses(
        (survivors[i] for i in sorted(survivors)), num_vars=formula.num_vars
    )
    return out, log


def cmd_tweak_cnf(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    kb = _parse_cnf(config.inputs[0], report, "kb")
    tweaked, log = tweak_cnf(kb, config.scenario, config.seed)
    for line in log:
        report.raw_record(line)
        report.text(line)
    report.record("kb", name="kb_h", vars=tweaked.num_vars,
                  clauses=len(tweaked.clauses))
    if config.out:
        header = [r for r in report.records if r.startswith(("run ", "input "))]
        _write_kb(config.out, tweaked, header + log)
        report.text(f"wrote {config.out} (+.log)")
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# planning commands


def _parse_planning_inputs(config: RunConfig, report: Report):
    domain_text = _read_input(config.inputs[0], report)
    problem_text = _read_input(config.inputs[1], report)
    try:
        task = parse_pddl(domain_text, problem_text)
    except PddlParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    try:
        problem = ground(task)
    except GroundingCapError as exc:
        raise CliError(EXIT_CAP, str(exc)) from exc
    report.record("ground", fluents=len(problem.fluents),
                  actions=len(problem.actions))
    return problem


def cmd_tweak_model(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    problem = _parse_planning_inputs(config, report)
    try:
        tweaked = tweak_model(problem, config.scenario, config.seed,
                              count=config.count)
    except PlanningError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    for rec in tweaked.log:
        report.record("tweak", **_tweak_fields(rec))
        report.text(str(rec))
    listing = _model_listing(tweaked.problem)
    report.record("model", actions=len(tweaked.problem.actions),
                  init=len(tweaked.problem.init))
    if config.out:
        _write_out(config.out, listing)
        _write_out(
            config.out + ".log",
            "\n".join(report.records) + "\n",
        )
        report.text(f"wrote {config.out} (+.log)")
    return report, EXIT_OK


def _tweak_fields(rec) -> dict[str, object]:
    fields: dict[str, object] = {"scenario": rec.scenario, "kind": rec.kind}
    if rec.action is not None:
        fields["action"] = rec.action
    if rec.atom is not None:
        fields["atom"] = rec.atom
    return fields


def _model_listing(problem) -> str:
    lines = [f"init {' '.join(str(a) for a in sorted(problem.init))}".rstrip()]
    lines.append(f"goal {' '.join(str(a) for a in sorted(problem.goal))}".rstrip())
    for action in problem.actions:
        lines.append(
            f"action {action.label}"
            f" pre={_fmt_value(sorted(map(str, action.pre)))}"
            f" add={_fmt_value(sorted(map(str, action.add)))}"
            f" del={_fmt_value(sorted(map(str, action.delete)))}"
        )
    return "\n".join(lines) + "\n"


def cmd_encode_plan(config: RunConfig) -> tuple[Report, int]:
    report = _start(config)
    problem = _parse_planning_inputs(config, report)
    enc = encode_bounded(problem, config.horizon, include_goal=config.include_goal)
    report.record("encode", horizon=config.horizon, vars=enc.cnf.num_vars,
                  clauses=len(enc.cnf.clauses), include_goal=config.include_goal)
    for note in enc.notes:
        report.record("note", msg=note)
    report.text(
        f"horizon {config.horizon}: {enc.cnf.num_vars} variables, "
        f"{len(enc.cnf.clauses)} clauses"
    )
    if config.out:
        _write_kb(config.out, enc.cnf, report.records)
        _write_out(config.out + ".map", write_var_map(enc))
        report.text(f"wrote {config.out} (+.map, +.log)")
    return report, EXIT_OK


@dataclass
class ExplainPlanResult:
    """Everything the explain-plan pipeline produced, for tests and output."""

    report: Report
    exit_code: int
    explanation: Explanation | None = None
    verification: object = None
    problem: ReconcileProblem | None = None
    encoding: BoundedEncoding | None = None
    plan: tuple = ()
    repair: tuple[Clause, ...] = ()
    artifacts: dict[str, str] = field(default_factory=dict)


def run_explain_plan(config: RunConfig, plan_text: str | None = None) -> ExplainPlanResult:
    report = _start(config)
    problem = _parse_planning_inputs(config, report)

    if plan_text is not None:
        try:
            plan = parse_plan_text(plan_text, problem)
        except PlanningError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from exc
        if not validate_plan(problem, plan):
            raise CliError(EXIT_PARSE, "provided plan does not reach the goal")
        source = "file"
    else:
        try:
            plan = optimal_plan_search(problem)
        except GoalUnreachableError as exc:
            raise CliError(EXIT_CAP, str(exc)) from exc
        except StateCapError as exc:
            raise CliError(EXIT_CAP, str(exc)) from exc
        source = "search"
    n = len(plan)
    report.record("plan", source=source, length=n)
    for t, action in enumerate(plan):
        report.record("step", t=t, action=action.label)
    report.text(f"optimal plan ({n} steps): "
                + (" ".join(a.label for a in plan) or "<empty>"))

    tweaked = tweak_model(problem, config.scenario, config.seed,
                          count=config.count)
    for rec in tweaked.log:
        report.record("tweak", **_tweak_fields(rec))

    if n == 0:
        report.record("stat", support_size=0, update_size=0, removed_size=0,
                      iterations=0, mcs_count=0, oracle_calls=0)
        report.record("note", msg="empty optimal plan; optimality is vacuous")
        report.text("the goal already holds initially; nothing to explain")
        return ExplainPlanResult(report, EXIT_OK, plan=plan)

    enc_a = encode_bounded(problem, n, include_goal=False)
    enc_h = encode_bounded(
        tweaked.problem, n, include_goal=False,
        fluent_order=enc_a.fluent_order, action_order=enc_a.action_order,
    )
    report.record("encode", kb="agent", vars=enc_a.cnf.num_vars,
                  clauses=len(enc_a.cnf.clauses))
    report.record("encode", kb="human", vars=enc_h.cnf.num_vars,
                  clauses=len(enc_h.cnf.clauses))
    for note in enc_h.notes:
        report.record("note", kb="human", msg=note)

    feas = check_feasibility(enc_h, plan, reference=enc_a)
    report.record("feasibility", feasible=feas.feasible,
                  missing=len(feas.missing_clauses))
    oq = optimality_query(enc_a)
    aggregate_names = dict(oq.new_names)

    def name_of(lit: int) -> str:
        var = abs(lit)
        base = aggregate_names.get(var) or enc_a.name_of(var)
        return ("-" + base) if lit < 0 else base

    kb_h_cnf = enc_h.cnf
    if feas.missing_clauses:
        kb_h_cnf = kb_h_cnf.extended(feas.missing_clauses)
        for clause, origin in zip(feas.missing_clauses, feas.missing_origins):
            report.record(
                "clause", role="repair", lits=_lits(clause),
                names=";".join(name_of(l) for l in clause),
                kind=origin.kind, t=origin.t, action=origin.action,
            )
        report.text(f"feasibility repair: restored {len(feas.missing_clauses)} "
                    "action-dynamics clause(s) missing from the human model")
    kb_a = enc_a.cnf.extended(oq.definitions)
    kb_h = kb_h_cnf.extended(oq.definitions)
    rec_problem = ReconcileProblem(kb_a, kb_h, oq.query, mode=config.mode)
    started = time.monotonic()
    try:
        expl = reconcile(rec_problem, timeout=config.timeout)
    except PremiseError as exc:
        report.record("error", kind="premise", msg=str(exc))
        report.text(f"premise violation: {exc}")
        return ExplainPlanResult(report, EXIT_PREMISE, problem=rec_problem,
                                 encoding=enc_a, plan=plan)
    except ReconcileTimeout as exc:
        report.record("stat", iterations=exc.iterations, mcs_count=exc.mcs_count,
                      oracle_calls=exc.oracle_calls)
        report.record("error", kind="timeout", msg=str(exc))
        report.record("time", elapsed=exc.elapsed)
        report.text(f"timeout after {exc.elapsed:.3f}s")
        return ExplainPlanResult(report, EXIT_TIMEOUT, problem=rec_problem,
                                 encoding=enc_a, plan=plan)
    removed = set(expl.removed_from_kb_h)
    kept = [c for c in kb_h.clauses if c not in removed]
    verification = verify_explanation(kept, expl.support, oq.query)
    expl_lines = _explanation_records(expl, verification, names=name_of)
    for line in expl_lines:
        report.raw_record(line)
    report.record("time", elapsed=time.monotonic() - started)
    report.text(
        f"support size {len(expl.support)}, update size {len(expl.update)}, "
        f"removed {len(expl.removed_from_kb_h)} clause(s)"
    )
    for clause in expl.update:
        report.text("  add to kb_h: " + " ∨ ".join(name_of(l) for l in clause))
    for clause in expl.removed_from_kb_h:
        report.text("  remove from kb_h: " + " ∨ ".join(name_of(l) for l in clause))
    report.text(f"verification: {'ok' if verification.ok else 'FAILED'}")

    result = ExplainPlanResult(
        report,
        EXIT_OK if verification.ok else EXIT_VERIFY,
        explanation=expl,
        problem=rec_problem,
        encoding=enc_a,
        plan=plan,
        repair=feas.missing_clauses,
    )
    result.verification = verification
    if not verification.ok:
        report.record("error", kind="verify", msg=";".join(verification.failures))
    if config.out:
        outdir = Path(config.out)
        provenance = [r for r in report.records if not r.startswith("time ")]
        _write_kb(str(outdir / "kb_a.cnf"), kb_a, provenance)
        _write_kb(str(outdir / "kb_h.cnf"), kb_h, provenance)
        _write_out(str(outdir / "kb_a.cnf.map"), write_var_map(enc_a))
        _write_out(str(outdir / "plan.txt"), write_plan_text(plan))
        _write_out(
            str(outdir / "query.txt"),
            "\n".join(str(c[0]) for c in oq.query.clauses) + "\n",
        )
        _write_out(str(outdir / "explanation.records"),
                   "\n".join(expl_lines) + "\n")
        report.text(f"wrote artifacts under {outdir}/")
        result.artifacts = {
            "kb_a": str(outdir / "kb_a.cnf"),
            "kb_h": str(outdir / "kb_h.cnf"),
            "query": str(outdir / "query.txt"),
            "explanation": str(outdir / "explanation.records"),
        }
    return result


def cmd_explain_plan(config: RunConfig, plan_path: str | None) -> tuple[Report, int]:
    plan_text = None
    if plan_path is not None:
        try:
            plan_text = Path(plan_path).read_text()
        except OSError as exc:
            raise CliError(EXIT_PARSE, f"cannot read {plan_path}: {exc}") from exc
    result = run_explain_plan(config, plan_text)
    return result.report, result.exit_code


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrex",
        description="Minimal-update explanations for clause-level and "
                    "planning-level model reconciliation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, mode_default: str = GENERAL) -> None:
        p.add_argument("--mode", choices=[GENERAL, RESTRICTED],
                       default=mode_default,
                       help="where support clauses may come from")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                       help="time limit in seconds (default 1500)")
        p.add_argument("--format", dest="fmt", choices=["text", "records"],
                       default="text")
        p.add_argument("--out", default=None, help="output path")

    p = sub.add_parser("reconcile", help="explain a query to a CNF kb_h")
    p.add_argument("kb_a")
    p.add_argument("kb_h")
    p.add_argument("--query", required=True)
    common(p)

    p = sub.add_parser("explain-plan",
                       help="explain plan optimality to a perturbed model")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--scenario", type=int, choices=range(1, 9), required=True)
    p.add_argument("--count", type=int, default=2,
                   help="removals per action/state for scenarios 4 and 6")
    p.add_argument("--plan", default=None,
                   help="plan file (default: search for an optimal plan)")
    common(p, mode_default=RESTRICTED)

    p = sub.add_parser("tweak-cnf", help="perturb a CNF knowledge base")
    p.add_argument("kb")
    p.add_argument("--scenario", type=int, choices=range(9, 13), required=True)
    common(p)

    p = sub.add_parser("tweak-model", help="perturb a grounded planning model")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--scenario", type=int, choices=range(1, 9), required=True)
    p.add_argument("--count", type=int, default=2)
    common(p)

    p = sub.add_parser("backbone", help="derive a backbone-literal query")
    p.add_argument("kb")
    p.add_argument("--k", type=int, default=0,
                   help="sample size (0 = all backbone literals)")
    common(p)

    p = sub.add_parser("verify", help="check an explanation file")
    p.add_argument("kb_h")
    p.add_argument("explanation")
    p.add_argument("--query", required=True)
    common(p)

    p = sub.add_parser("encode-plan", help="write a bounded planning encoding")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--include-goal", action="store_true")
    common(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = tuple(
        getattr(args, name)
        for name in ("kb_a", "kb_h", "kb", "domain", "problem", "explanation")
        if getattr(args, name, None) is not None
    )
    try:
        return RunConfig(
            command=args.command,
            inputs=inputs,
            mode=getattr(args, "mode", GENERAL),
            seed=args.seed,
            timeout=args.timeout,
            scenario=getattr(args, "scenario", None),
            query=getattr(args, "query", None),
            out=args.out,
            fmt=args.fmt,
            k=getattr(args, "k", 0),
            count=getattr(args, "count", 2),
            horizon=getattr(args, "horizon", None),
            include_goal=getattr(args, "include_goal", False),
        )
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "reconcile":
            report, code = cmd_reconcile(config)
        elif args.command == "explain-plan":
            report, code = cmd_explain_plan(config, args.plan)
        elif args.command == "tweak-cnf":
            report, code = cmd_tweak_cnf(config)
        elif args.command == "tweak-model":
            report, code = cmd_tweak_model(config)
        elif args.command == "backbone":
            report, code = cmd_backbone(config)
        elif args.command == "verify":
            report, code = cmd_verify(config)
        elif args.command == "encode-plan":
            report, code = cmd_encode_plan(config)
        else:  # pragma: no cover - argparse guards this
            parser.error(f"unknown command {args.command}")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GroundingCapError, StateCapError, GoalUnreachableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PddlParseError, FormulaError, PlanningError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = report.render(config.fmt)
    if out:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
