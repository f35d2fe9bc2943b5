"""Shared fixtures: the small chain model and solver shim commands."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from fgsynth.frontend.syntax import ModelSource
from fgsynth.ir.instance import IOExamples
from fgsynth.pipeline import compile_source

TOOLS = Path(__file__).resolve().parent.parent / "tools"
SMT_SHIM = f"{sys.executable} {TOOLS / 'smt_shim.py'}"
MILP_SHIM = f"{sys.executable} {TOOLS / 'milp_shim.py'}"
GOLDEN = Path(__file__).resolve().parent / "golden"

# The running example everywhere: a binary tape where each cell is a
# learned function of the previous two, observed at the end.
AUTOMATON = """\
T = 5
table = Param(2)[2, 2]
tape = Var(2)[T]
initial = Input(2)[2]
final = Output(2)

tape[0].set_to(initial[0])
tape[1].set_to(initial[1])

for t in range(2, T):
    with tape[t - 2] as a:
        with tape[t - 1] as b:
            tape[t].set_to(table[a, b])

final.set_to(tape[T - 1])
"""

OR_TABLE = [[0, 1], [1, 1]]


def compile_text(text: str, name: str = "m", **consts):
    return compile_source(ModelSource(name, text, dict(consts)))


def or_examples() -> IOExamples:
    examples = []
    for i0 in (0, 1):
        for i1 in (0, 1):
            tape = [i0, i1]
            for t in range(2, 5):
                tape.append(OR_TABLE[tape[t - 2]][tape[t - 1]])
            examples.append({"inputs": {"initial": [i0, i1]},
                             "outputs": {"final": tape[4]}})
    return IOExamples.from_json(json.dumps({"examples": examples}))


@pytest.fixture(scope="session")
def automaton_graph():
    return compile_text(AUTOMATON, name="automaton")


@pytest.fixture(scope="session")
def automaton_io():
    return or_examples()
