"""Lowering output, the structural validator, and instance binding."""

import dataclasses

import pytest

from conftest import AUTOMATON, GOLDEN, compile_text, or_examples
from fgsynth.diagnostics import (
    CompileError,
    E_CYCLE,
    E_DOUBLE_WRITE,
    E_MISSING_WRITE,
    E_SIZE_BUDGET,
)
from fgsynth.frontend.syntax import VarKind
from fgsynth.ir.dump import dump
from fgsynth.ir.graph import ConstFactor, CopyFactor
from fgsynth.ir.instance import IOExamples, bind_examples
from fgsynth.ir.validate import validate_ssa

GATED = """\
c = Input(2)
x = Var(2)
y = Var(2)
out = Output(2)
with c as v:
    if v == 0:
        x.set_to(0)
        y.set_to(1)
    if v == 1:
        x.set_to(1)
        y.set_to(0)
out.set_to(x)
"""


def test_automaton_census(automaton_graph):
    s = automaton_graph.stats()
    assert s == {"vars": 12, "factors": 15, "tables": 0, "gates": 9,
                 "blocks": 19}
    assert automaton_graph.param_space_size() == 16
    assert abs(automaton_graph.log10_param_space() - 1.2041) < 1e-3


def test_dump_matches_golden(automaton_graph):
    assert dump(automaton_graph) == (GOLDEN / "automaton.ir").read_text()


def test_dump_deterministic():
    assert dump(compile_text(AUTOMATON)) == dump(compile_text(AUTOMATON))


def test_validator_accepts_lowered_graphs(automaton_graph):
    assert validate_ssa(automaton_graph) == []


def test_validator_rejects_double_write():
    g = compile_text(AUTOMATON)
    x = g.cell_id("tape", (0,))
    g.factors.append(ConstFactor(dst=x, value=0))
    g.factor_block.append(0)
    g.blocks[0].items.append(("factor", len(g.factors) - 1))
    codes = [d.code for d in validate_ssa(g)]
    assert E_DOUBLE_WRITE in codes


def test_validator_rejects_branch_missing_write():
    g = compile_text(GATED)
    x, y = g.cell_id("x"), g.cell_id("y")
    # Redirect branch 1's write of x onto y: x loses a branch, y gains
    # a second writer on the same path.
    idx = next(i for i, f in enumerate(g.factors)
               if isinstance(f, ConstFactor) and f.dst == x and f.value == 1)
    g.factors[idx] = dataclasses.replace(g.factors[idx], dst=y)
    codes = [d.code for d in validate_ssa(g)]
    assert E_MISSING_WRITE in codes
    assert E_DOUBLE_WRITE in codes


def test_validator_rejects_cycle():
    g = compile_text("p = Param(3)\nx = Var(3)\nout = Output(3)\n"
                     "x.set_to(p)\nout.set_to(x)\n")
    x, out = g.cell_id("x"), g.cell_id("out")
    idx = next(i for i, f in enumerate(g.factors)
               if isinstance(f, CopyFactor) and f.dst == x)
    g.factors[idx] = CopyFactor(dst=x, src=out)
    codes = [d.code for d in validate_ssa(g)]
    assert E_CYCLE in codes


def test_gated_writes_cover_all_branches():
    g = compile_text(GATED)
    assert validate_ssa(g) == []
    assert g.stats()["gates"] == 1


def test_instance_numbering_shares_params(automaton_graph):
    ig = bind_examples(automaton_graph, or_examples())
    params = automaton_graph.param_cells()
    assert ig.param_cells == params
    # Params occupy the first ids in every example.
    for e in range(ig.n_examples):
        for rank, c in enumerate(params):
            assert ig.instance_cell(e, c) == rank
    # Non-param cells never collide across examples.
    seen = set()
    for e in range(ig.n_examples):
        for v in automaton_graph.vars:
            if v.kind != VarKind.PARAM:
                i = ig.instance_cell(e, v.id)
                assert i not in seen
                seen.add(i)
    assert ig.total_cells == len(params) + len(seen)


def test_bind_requires_total_examples(automaton_graph):
    io = IOExamples.from_json(
        '{"examples": [{"inputs": {"initial": [0, 1]}, "outputs": {}}]}')
    with pytest.raises(CompileError):
        bind_examples(automaton_graph, io)


def test_bind_checks_domains(automaton_graph):
    io = IOExamples.from_json(
        '{"examples": [{"inputs": {"initial": [0, 7]},'
        ' "outputs": {"final": 0}}]}')
    with pytest.raises(CompileError):
        bind_examples(automaton_graph, io)


def test_instance_budgets_enforced(automaton_graph, monkeypatch):
    io = or_examples()
    monkeypatch.setattr("fgsynth.ir.instance.MAX_VAR_CELLS", 10)
    with pytest.raises(CompileError) as exc:
        bind_examples(automaton_graph, io)
    assert E_SIZE_BUDGET in exc.value.codes
    monkeypatch.setattr("fgsynth.ir.instance.MAX_VAR_CELLS", 200_000)
    monkeypatch.setattr("fgsynth.ir.instance.MAX_FACTORS", 5)
    with pytest.raises(CompileError) as exc:
        bind_examples(automaton_graph, io)
    assert E_SIZE_BUDGET in exc.value.codes
