"""Command-line interface: subcommands, exit codes, records, determinism."""

from pathlib import Path

import pytest

from mrex.cli import (
    EXIT_CAP,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PREMISE,
    EXIT_TIMEOUT,
    EXIT_VERIFY,
    main,
)

DATA = Path(__file__).parent / "data"
BLOCKS = str(DATA / "blocksworld.pddl")
SUSSMAN = str(DATA / "sussman.pddl")
TWO_BLOCKS = str(DATA / "two-blocks.pddl")
CHAIN_DOMAIN = str(DATA / "chain-domain.pddl")
CHAIN_PROBLEM = str(DATA / "chain-problem.pddl")
TRIVIAL = str(DATA / "trivial.pddl")

KB_A_TEXT = "p cnf 5 5\n1 2 0\n-2 3 0\n-3 0\n-2 4 0\n-4 0\n"
KB_H_TEXT = "p cnf 5 2\n-3 0\n5 0\n"


@pytest.fixture
def worked(tmp_path):
    kb_a = tmp_path / "kb_a.cnf"
    kb_h = tmp_path / "kb_h.cnf"
    query = tmp_path / "query.txt"
    kb_a.write_text(KB_A_TEXT)
    kb_h.write_text(KB_H_TEXT)
    query.write_text("1\n")
    return kb_a, kb_h, query


def run(capsys, *argv) -> tuple[int, str]:
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    return code, capsys.readouterr().out


def stable(output: str) -> list[str]:
    """Records with wall-clock lines dropped, for determinism comparisons."""
    return [l for l in output.splitlines() if not l.startswith("time ")]


class TestReconcileCommand:
    def test_worked_example(self, worked, capsys):
        kb_a, kb_h, query = worked
        code, out = run(capsys, "reconcile", kb_a, kb_h, "--query", query,
                        "--format", "records")
        assert code == EXIT_OK
        assert "stat support_size=3 update_size=2 removed_size=0" in out
        assert "clause role=update lits=-2,3" in out
        assert "clause role=update lits=1,2" in out
        assert "verify entailed=true minimal=true consistent=true ok=true" in out

    def test_text_format(self, worked, capsys):
        kb_a, kb_h, query = worked
        code, out = run(capsys, "reconcile", kb_a, kb_h, "--query", query)
        assert code == EXIT_OK
        assert "support size 3, update size 2" in out

    def test_entailed_query_empty_update(self, worked, capsys):
        kb_a, kb_h, query = worked
        query.write_text("-3\n")
        code, out = run(capsys, "reconcile", kb_a, kb_h, "--query", query,
                        "--format", "records")
        assert code == EXIT_OK
        assert "stat support_size=1 update_size=0" in out

    def test_premise_violation(self, worked, capsys):
        kb_a, kb_h, query = worked
        query.write_text("5\n")  # kb_a says nothing about variable 5
        code, out = run(capsys, "reconcile", kb_a, kb_h, "--query", query,
                        "--format", "records")
        assert code == EXIT_PREMISE
        assert "error kind=premise" in out

    def test_parse_error(self, worked, capsys):
        kb_a, kb_h, query = worked
        kb_a.write_text("p cnf nonsense\n")
        code, _ = run(capsys, "reconcile", kb_a, kb_h, "--query", query)
        assert code == EXIT_PARSE

    def test_missing_file(self, worked, capsys):
        kb_a, kb_h, query = worked
        code, _ = run(capsys, "reconcile", kb_a.parent / "absent.cnf", kb_h,
                      "--query", query)
        assert code == EXIT_PARSE

    def test_timeout_partial_stats(self, tmp_path, capsys):
        code, _ = run(capsys, "encode-plan", BLOCKS, SUSSMAN, "--horizon", "3",
                      "--out", tmp_path / "kb.cnf")
        assert code == EXIT_OK
        code, _ = run(capsys, "tweak-cnf", tmp_path / "kb.cnf", "--scenario",
                      "9", "--seed", "5", "--out", tmp_path / "kb_h.cnf")
        assert code == EXIT_OK
        query = tmp_path / "query.txt"
        query.write_text("4\n")
        code, out = run(capsys, "reconcile", tmp_path / "kb.cnf",
                        tmp_path / "kb_h.cnf", "--query", query,
                        "--timeout", "1e-9", "--format", "records")
        assert code == EXIT_TIMEOUT
        assert "error kind=timeout" in out
        assert any(l.startswith("stat iterations=") for l in out.splitlines())

    def test_rejects_nonpositive_timeout(self, worked, capsys):
        kb_a, kb_h, query = worked
        code, _ = run(capsys, "reconcile", kb_a, kb_h, "--query", query,
                      "--timeout", "0")
        assert code == 2

    def test_records_deterministic(self, worked, capsys):
        kb_a, kb_h, query = worked
        args = ("reconcile", kb_a, kb_h, "--query", query, "--format", "records")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert stable(first) == stable(second)
        assert any(l.startswith("time ") for l in first.splitlines())


class TestVerifyCommand:
    def test_round_trip(self, worked, tmp_path, capsys):
        kb_a, kb_h, query = worked
        out_file = tmp_path / "expl.records"
        code, _ = run(capsys, "reconcile", kb_a, kb_h, "--query", query,
                      "--out", out_file)
        assert code == EXIT_OK
        code, out = run(capsys, "verify", kb_h, out_file, "--query", query,
                        "--format", "records")
        assert code == EXIT_OK
        assert "verify entailed=true minimal=true consistent=true ok=true" in out

    def test_dropped_clause_fails_entailment(self, worked, tmp_path, capsys):
        kb_a, kb_h, query = worked
        out_file = tmp_path / "expl.records"
        run(capsys, "reconcile", kb_a, kb_h, "--query", query, "--out", out_file)
        lines = [l for l in out_file.read_text().splitlines()
                 if l != "clause role=support lits=1,2"]
        corrupted = tmp_path / "corrupted.records"
        corrupted.write_text("\n".join(lines) + "\n")
        code, out = run(capsys, "verify", kb_h, corrupted, "--query", query,
                        "--format", "records")
        assert code == EXIT_VERIFY
        assert "entailed=false" in out

    def test_padded_explanation_fails_minimality(self, worked, tmp_path, capsys):
        kb_a, kb_h, query = worked
        out_file = tmp_path / "expl.records"
        run(capsys, "reconcile", kb_a, kb_h, "--query", query, "--out", out_file)
        padded = tmp_path / "padded.records"
        padded.write_text(out_file.read_text()
                          + "clause role=support lits=-2,4\n")
        code, out = run(capsys, "verify", kb_h, padded, "--query", query,
                        "--format", "records")
        assert code == EXIT_VERIFY
        assert "minimal=false" in out


class TestBackboneCommand:
    def test_all_literals(self, worked, capsys):
        kb_a, _, _ = worked
        code, out = run(capsys, "backbone", kb_a, "--format", "records")
        assert code == EXIT_OK
        assert "stat backbone_size=4 sampled=4" in out
        values = [l.split("value=")[1] for l in out.splitlines()
                  if l.startswith("literal ")]
        assert values == ["1", "-2", "-3", "-4"]

    def test_sample_and_query_file(self, worked, tmp_path, capsys):
        kb_a, _, _ = worked
        out_file = tmp_path / "query.txt"
        code, out = run(capsys, "backbone", kb_a, "--k", "2", "--seed", "3",
                        "--out", out_file, "--format", "records")
        assert code == EXIT_OK
        assert "sampled=2" in out
        lits = [int(l) for l in out_file.read_text().split()]
        assert len(lits) == 2 and set(lits) <= {1, -2, -3, -4}
        assert (tmp_path / "query.txt.log").exists()

    def test_k_larger_than_backbone_warns(self, worked, capsys):
        kb_a, _, _ = worked
        code, out = run(capsys, "backbone", kb_a, "--k", "99",
                        "--format", "records")
        assert code == EXIT_OK
        assert "warn msg=k exceeds backbone size" in out
        assert "sampled=4" in out

    def test_unsat_kb_rejected(self, tmp_path, capsys):
        kb = tmp_path / "kb.cnf"
        kb.write_text("p cnf 1 2\n1 0\n-1 0\n")
        code, out = run(capsys, "backbone", kb, "--format", "records")
        assert code == EXIT_PREMISE

    def test_empty_backbone_rejected(self, tmp_path, capsys):
        kb = tmp_path / "kb.cnf"
        kb.write_text("p cnf 2 2\n1 2 0\n-1 -2 0\n")
        code, out = run(capsys, "backbone", kb, "--format", "records")
        assert code == EXIT_PREMISE
        assert "no backbone query derivable" in out


class TestTweakCnfCommand:
    def _kb(self, tmp_path) -> Path:
        clauses = [f"{i} {i + 1} {i + 2} 0" for i in range(1, 11)]
        kb = tmp_path / "kb.cnf"
        kb.write_text("p cnf 12 10\n" + "\n".join(clauses) + "\n")
        return kb

    def test_scenario9_counts(self, tmp_path, capsys):
        kb = self._kb(tmp_path)
        out_file = tmp_path / "kb_h.cnf"
        code, out = run(capsys, "tweak-cnf", kb, "--scenario", "9",
                        "--seed", "1", "--out", out_file, "--format", "records")
        assert code == EXIT_OK
        assert "removed=1 trimmed=1 skipped=0" in out
        assert out_file.exists() and (tmp_path / "kb_h.cnf.log").exists()
        assert "clauses_after=9" in out

    def test_same_seed_identical_output(self, tmp_path, capsys):
        kb = self._kb(tmp_path)
        a, b = tmp_path / "a.cnf", tmp_path / "b.cnf"
        run(capsys, "tweak-cnf", kb, "--scenario", "10", "--seed", "7",
            "--out", a)
        run(capsys, "tweak-cnf", kb, "--scenario", "10", "--seed", "7",
            "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_unit_clauses_skipped(self, tmp_path, capsys):
        kb = tmp_path / "kb.cnf"
        kb.write_text("p cnf 3 3\n1 0\n2 0\n3 0\n")
        code, out = run(capsys, "tweak-cnf", kb, "--scenario", "12",
                        "--seed", "0", "--format", "records")
        assert code == EXIT_OK
        assert "trimmed=0" in out and "skipped=" in out
        assert "skip" in out

    def test_scenario_out_of_range(self, tmp_path, capsys):
        kb = self._kb(tmp_path)
        code, _ = run(capsys, "tweak-cnf", kb, "--scenario", "13")
        assert code == 2


class TestExplainPlanCommand:
    def test_chain_missing_precondition(self, capsys):
        code, out = run(capsys, "explain-plan", CHAIN_DOMAIN, CHAIN_PROBLEM,
                        "--scenario", "1", "--seed", "0", "--format", "records")
        assert code == EXIT_OK
        assert "plan source=search length=2" in out
        assert "tweak scenario=1 kind=pre action=finish atom=p" in out
        assert "stat support_size=" in out and "update_size=1" in out
        assert "clause role=update lits=" in out
        assert "names=holding" not in out  # chain domain has its own fluents
        assert "names=p@0;-finish@0" in out or "names=-finish@0;p@0" in out
        assert "verify entailed=true minimal=true consistent=true ok=true" in out

    def test_artifacts_written_and_verifiable(self, tmp_path, capsys):
        outdir = tmp_path / "run"
        code, _ = run(capsys, "explain-plan", CHAIN_DOMAIN, CHAIN_PROBLEM,
                      "--scenario", "8", "--seed", "0", "--out", outdir)
        assert code == EXIT_OK
        for name in ("kb_a.cnf", "kb_h.cnf", "kb_a.cnf.map", "kb_a.cnf.log",
                     "kb_h.cnf.log", "plan.txt", "query.txt",
                     "explanation.records"):
            assert (outdir / name).exists(), name
        code, out = run(capsys, "verify", outdir / "kb_h.cnf",
                        outdir / "explanation.records",
                        "--query", outdir / "query.txt", "--format", "records")
        assert code == EXIT_OK

    def test_repair_clauses_reported(self, capsys):
        code, out = run(capsys, "explain-plan", CHAIN_DOMAIN, CHAIN_PROBLEM,
                        "--scenario", "8", "--seed", "0", "--format", "records")
        assert code == EXIT_OK
        repair = [l for l in out.splitlines() if "role=repair" in l]
        assert len(repair) == 3  # set-p's add, finish's pre and add
        assert "feasibility feasible=false missing=3" in out

    def test_goal_already_satisfied(self, capsys):
        code, out = run(capsys, "explain-plan", BLOCKS, TRIVIAL,
                        "--scenario", "1", "--seed", "0", "--format", "records")
        assert code == EXIT_OK
        assert "plan source=search length=0" in out
        assert "update_size=0" in out

    def test_unreachable_goal(self, tmp_path, capsys):
        problem = tmp_path / "impossible.pddl"
        problem.write_text(
            "(define (problem impossible) (:domain blocksworld)\n"
            "  (:objects a)\n"
            "  (:init (on-table a) (clear a) (arm-empty))\n"
            "  (:goal (on a a)))\n"
        )
        code, _ = run(capsys, "explain-plan", BLOCKS, problem,
                      "--scenario", "1", "--seed", "0")
        assert code == EXIT_CAP

    def test_provided_plan(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("(pick-up a)\n(stack a b)\n")
        code, out = run(capsys, "explain-plan", BLOCKS, TWO_BLOCKS,
                        "--scenario", "1", "--seed", "3", "--plan", plan,
                        "--format", "records")
        assert code == EXIT_OK
        assert "plan source=file length=2" in out

    def test_invalid_provided_plan(self, tmp_path, capsys):
        plan = tmp_path / "plan.txt"
        plan.write_text("(pick-up a)\n(put-down a)\n")
        code, _ = run(capsys, "explain-plan", BLOCKS, TWO_BLOCKS,
                      "--scenario", "1", "--seed", "3", "--plan", plan)
        assert code == EXIT_PARSE

    def test_bad_pddl(self, tmp_path, capsys):
        bad = tmp_path / "bad.pddl"
        bad.write_text("(define (domain broken)")
        code, _ = run(capsys, "explain-plan", bad, CHAIN_PROBLEM,
                      "--scenario", "1", "--seed", "0")
        assert code == EXIT_PARSE

    def test_records_deterministic(self, capsys):
        args = ("explain-plan", CHAIN_DOMAIN, CHAIN_PROBLEM, "--scenario", "8",
                "--seed", "2", "--format", "records")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert stable(first) == stable(second)

    def test_general_mode_allowed(self, capsys):
        code, out = run(capsys, "explain-plan", CHAIN_DOMAIN, CHAIN_PROBLEM,
                        "--scenario", "1", "--seed", "0", "--mode", "general",
                        "--format", "records")
        assert code == EXIT_OK
        assert "explanation mode=general" in out


class TestTweakModelCommand:
    def test_sussman_scenario1(self, tmp_path, capsys):
        out_file = tmp_path / "model.txt"
        code, out = run(capsys, "tweak-model", BLOCKS, SUSSMAN,
                        "--scenario", "1", "--seed", "4", "--out", out_file,
                        "--format", "records")
        assert code == EXIT_OK
        tweaks = [l for l in out.splitlines() if l.startswith("tweak ")]
        assert len(tweaks) == 18 and all("kind=pre" in l for l in tweaks)
        assert out_file.exists() and (tmp_path / "model.txt.log").exists()
        assert "action stack(a,b)" in out_file.read_text()


class TestEncodePlanCommand:
    def test_writes_cnf_map_log(self, tmp_path, capsys):
        out_file = tmp_path / "enc.cnf"
        code, out = run(capsys, "encode-plan", BLOCKS, TWO_BLOCKS,
                        "--horizon", "2", "--include-goal", "--out", out_file,
                        "--format", "records")
        assert code == EXIT_OK
        assert "encode horizon=2" in out and "include_goal=true" in out
        assert out_file.exists()
        assert (tmp_path / "enc.cnf.map").exists()
        assert (tmp_path / "enc.cnf.log").exists()
        map_lines = (tmp_path / "enc.cnf.map").read_text().splitlines()
        assert any(line.endswith("on(a,b)@2") for line in map_lines)
