"""Concrete execution, consistency checking, enumeration, rendering."""

import itertools
import json

import pytest

from conftest import AUTOMATON, OR_TABLE, compile_text, or_examples
from fgsynth.execute.enumerate import EnumBudget, enumerate_assignments
from fgsynth.execute.machine import (
    ParamAssignment,
    check_consistency,
    execute,
)
from fgsynth.execute.render import render_program
from fgsynth.execute.results import SynthesisResult, SynthStatus
from fgsynth.ir.instance import IOExamples, bind_examples

XOR = [[0, 1], [1, 0]]


def table_assignment(g, table):
    return ParamAssignment.from_named(g, {"table": table})


def test_xor_trace(automaton_graph):
    tr = execute(automaton_graph, table_assignment(automaton_graph, XOR),
                 {"initial": [1, 0]})
    tape = [tr.value_of(automaton_graph, "tape", (t,)) for t in range(5)]
    assert tape == [1, 0, 1, 1, 0]
    assert tr.outputs(automaton_graph) == {"final": 0}
    # Every taken gate resolved to the branch of its condition's value.
    for gate_id, branch in tr.gate_branch.items():
        cond = automaton_graph.gates[gate_id].cond
        assert tr.values[cond] == branch


def test_all_16_tables_sweep(automaton_graph, automaton_io):
    consistent = []
    for bits in itertools.product((0, 1), repeat=4):
        table = [[bits[0], bits[1]], [bits[2], bits[3]]]
        if check_consistency(automaton_graph,
                             table_assignment(automaton_graph, table),
                             automaton_io):
            consistent.append(table)
    assert consistent == [OR_TABLE]


def test_missing_input_raises(automaton_graph):
    with pytest.raises(KeyError):
        execute(automaton_graph, table_assignment(automaton_graph, XOR), {})


def test_named_assignment_round_trip(automaton_graph):
    p = table_assignment(automaton_graph, OR_TABLE)
    named = p.to_named(automaton_graph)
    assert named == {"table": OR_TABLE}
    assert ParamAssignment.from_named(automaton_graph, named) == p
    assert p.as_tuple(automaton_graph) == (0, 1, 1, 1)


def test_enumeration_finds_or(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    res = enumerate_assignments(ig)
    assert res.status == SynthStatus.SUCCESS
    assert res.assignment.to_named(automaton_graph) == {"table": OR_TABLE}
    assert res.stats["candidates_tested"] >= 1


def test_enumeration_exhausts_on_contradiction(automaton_graph):
    io = IOExamples.from_json(json.dumps({"examples": [
        {"inputs": {"initial": [0, 0]}, "outputs": {"final": 0}},
        {"inputs": {"initial": [0, 0]}, "outputs": {"final": 1}},
    ]}))
    res = enumerate_assignments(bind_examples(automaton_graph, io))
    assert res.status == SynthStatus.EXHAUSTED
    assert res.stats["candidates_tested"] == 16


def test_enumeration_budget(automaton_graph, automaton_io):
    ig = bind_examples(automaton_graph, automaton_io)
    res = enumerate_assignments(ig, EnumBudget(max_candidates=2))
    assert res.status == SynthStatus.TIMEOUT
    assert res.stats["candidates_tested"] == 2


def test_success_result_verifies(automaton_graph, automaton_io):
    with pytest.raises(ValueError):
        SynthesisResult.success(
            automaton_graph, automaton_io,
            table_assignment(automaton_graph, XOR), "enum")


def test_render_program(automaton_graph):
    text = render_program(automaton_graph,
                          table_assignment(automaton_graph, OR_TABLE))
    assert text == "table = [[0, 1], [1, 1]]\n"


def test_unwritten_cells_stay_none():
    g = compile_text("""\
c = Input(2)
x = Var(2)
a = Var(3)
out = Output(2)
with c as v:
    if v == 0:
        x.set_to(0)
        a.set_to(2)
    if v == 1:
        x.set_to(1)
        a.set_to(1)
out.set_to(x)
""")
    tr = execute(g, ParamAssignment({}), {"c": 1})
    assert tr.value_of(g, "a") == 1
    assert tr.value_of(g, "out") == 1
    # Gates on the untaken branch never ran.
    assert list(tr.gate_branch.values()) == [1]
