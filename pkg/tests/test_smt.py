"""SMT-LIB2 emission and solver driving (via the bundled shim)."""

import json
from pathlib import Path

import pytest

from conftest import GOLDEN, OR_TABLE, SMT_SHIM, compile_text
from fgsynth.execute.results import SynthStatus
from fgsynth.ir.instance import IOExamples, bind_examples
from fgsynth.smt.emit import emit_smtlib, param_symbol
from fgsynth.smt.solve import parse_model, solve
from fgsynth.solvers import SolverConfig, SolverRun, run_solver


@pytest.fixture(scope="module")
def one_param():
    g = compile_text("p = Param(3)\nout = Output(3)\nout.set_to(p)\n",
                     name="one_param")
    io = IOExamples.from_json(json.dumps({"examples": [
        {"inputs": {}, "outputs": {"out": 2}},
    ]}))
    return g, io


def shim_cfg(timeout_s=60.0):
    return SolverConfig.from_command(SMT_SHIM, timeout_s=timeout_s)


def test_golden_script(one_param):
    g, io = one_param
    script = emit_smtlib(bind_examples(g, io))
    assert script.text == (GOLDEN / "one_param.smt2").read_text()
    assert script.logic == "QF_LIA"
    assert script.param_symbols == {0: "p_p"}


def test_emit_structure(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    script = emit_smtlib(ig)
    lines = script.text.splitlines()
    assert lines[0] == "(set-logic QF_LIA)"
    assert lines[-2] == "(check-sat)"
    assert lines[-1].startswith("(get-value (p_table_0")
    # one symbol per param cell, each range-asserted
    for cell in automaton_graph.param_cells():
        sym = param_symbol(automaton_graph, cell)
        assert f"(declare-const {sym} Int)" in script.text
        assert f"(and (<= 0 {sym}) (< {sym} 2))" in script.text
    # gated writes become guarded implications
    assert "(=>" in script.text
    # 4 examples get separate cell variables
    for e in range(len(automaton_io.examples)):
        assert f"; example {e}" in script.text


def test_emit_deterministic(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    assert emit_smtlib(ig).text == emit_smtlib(ig).text


def test_parse_model_variants(one_param):
    g, io = one_param
    script = emit_smtlib(bind_examples(g, io))
    assert parse_model("sat\n((p_p 2))\n", script) == {0: 2}
    assert parse_model("sat\n((p_p (- 1)))\n", script) == {0: -1}
    assert parse_model("unsat\n", script) == "unsat"
    assert parse_model("unknown\n", script) == "unknown"
    assert parse_model("", script) == "empty solver output"
    assert "verdict" in parse_model("garbage\n", script)
    assert "missing" in parse_model("sat\n((q 1))\n", script)
    assert "malformed" in parse_model("sat\n", script)


def test_solve_automaton_via_shim(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    res = solve(ig, shim_cfg())
    assert res.status == SynthStatus.SUCCESS
    assert res.assignment.to_named(automaton_graph) == {"table": OR_TABLE}


def test_solve_unsat_via_shim(automaton_graph):
    io = IOExamples.from_json(json.dumps({"examples": [
        {"inputs": {"initial": [1, 1]}, "outputs": {"final": 0}},
        {"inputs": {"initial": [1, 1]}, "outputs": {"final": 1}},
    ]}))
    res = solve(bind_examples(automaton_graph, io), shim_cfg())
    assert res.status == SynthStatus.UNSAT
    assert res.assignment is None


def test_solve_missing_solver(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    cfg = SolverConfig("/nonexistent/solver-binary", timeout_s=5.0)
    res = solve(ig, cfg)
    assert res.status == SynthStatus.SOLVER_ERROR
    assert "cannot run" in res.message


def test_solver_config_from_command():
    cfg = SolverConfig.from_command("z3 -smt2 -in", timeout_s=10.0)
    assert cfg.executable == "z3"
    assert cfg.args == ("-smt2", "-in")
    with pytest.raises(ValueError):
        SolverConfig.from_command("")
    with pytest.raises(ValueError):
        SolverConfig.from_command("z3", timeout_s=0)


def test_run_solver_captures_failure(tmp_path):
    cfg = SolverConfig.from_command(
        f"{SMT_SHIM.split()[0]} -c 'import sys; sys.exit(3)'")
    run = run_solver(cfg, [])
    assert isinstance(run, SolverRun)
    assert not run.ok and not run.timed_out
    assert "exited 3" in run.detail


def test_shim_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.smt2"
    bad.write_text("(assert (= x y))\n(check-sat)\n")
    run = run_solver(shim_cfg(), [str(bad)])
    assert not run.ok or "error" in run.output
