"""Gated factor-graph intermediate representation."""

from .graph import (
    Block,
    CellArg,
    ConstFactor,
    CopyFactor,
    Factor,
    FunctionTable,
    Gate,
    Graph,
    Lit,
    TableFactor,
    VarNode,
)
from .lower import lower
from .validate import validate_ssa
from .instance import Example, IOExamples, InstanceGraph, bind_examples
from .dump import dump

__all__ = [
    "Block",
    "CellArg",
    "ConstFactor",
    "CopyFactor",
    "Example",
    "Factor",
    "FunctionTable",
    "Gate",
    "Graph",
    "IOExamples",
    "InstanceGraph",
    "Lit",
    "TableFactor",
    "VarNode",
    "bind_examples",
    "dump",
    "lower",
    "validate_ssa",
]
