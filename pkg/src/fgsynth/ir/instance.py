"""Binding input/output examples to a graph.

An InstanceGraph is conceptually N replicas of the base graph sharing
the Param cells: replica e clamps its Input cells to example e's inputs
and observes its Output cells at example e's outputs.  Replication is
kept implicit; backends iterate the base factors once per example and
translate cell ids through `instance_cell`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ..diagnostics import (
    CompileError,
    E_DOMAIN,
    E_SHAPE,
    E_SIZE_BUDGET,
    E_UNKNOWN_NAME,
    error,
)
from ..frontend.check import MAX_FACTORS, MAX_VAR_CELLS
from ..frontend.syntax import VarKind
from .graph import Graph


@dataclass(frozen=True, slots=True)
class Example:
    """One observation: every Input and every Output cell has a value."""

    inputs: dict[str, Any]
    outputs: dict[str, Any]


@dataclass(frozen=True, slots=True)
class IOExamples:
    examples: tuple[Example, ...]

    @staticmethod
    def from_json(text: str) -> "IOExamples":
        data = json.loads(text)
        return IOExamples(tuple(
            Example(dict(ex["inputs"]), dict(ex["outputs"]))
            for ex in data["examples"]))

    def to_json(self) -> str:
        return json.dumps(
            {"examples": [{"inputs": ex.inputs, "outputs": ex.outputs}
                          for ex in self.examples]},
            indent=2) + "\n"


def _flatten(name: str, value: Any, shape: tuple[int, ...],
             domain: int, diags: list, what: str) -> list[int] | None:
    """Row-major flatten of a nested list against `shape`."""
    if not shape:
        if not isinstance(value, int) or isinstance(value, bool):
            diags.append(error(
                E_SHAPE, f"{what} {name!r} must be an integer"))
            return None
        if not 0 <= value < domain:
            diags.append(error(
                E_DOMAIN,
                f"{what} {name!r} value {value} outside [0, {domain})"))
            return None
        return [value]
    if not isinstance(value, list) or len(value) != shape[0]:
        diags.append(error(
            E_SHAPE,
            f"{what} {name!r} must be a list of length {shape[0]}"))
        return None
    out: list[int] = []
    for v in value:
        flat = _flatten(name, v, shape[1:], domain, diags, what)
        if flat is None:
            return None
        out.extend(flat)
    return out


@dataclass(slots=True)
class InstanceGraph:
    """N example replicas of a graph sharing its Param cells."""

    graph: Graph
    io: IOExamples
    n_examples: int
    # Per example: (input cell id, clamped value) pairs, in cell order.
    clamps: list[list[tuple[int, int]]]
    # Per example: (output cell id, observed value) pairs, in cell order.
    observations: list[list[tuple[int, int]]]
    param_cells: list[int] = field(default_factory=list)
    _param_rank: dict[int, int] = field(default_factory=dict)
    _nonparam_rank: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.param_cells = self.graph.param_cells()
        self._param_rank = {c: i for i, c in enumerate(self.param_cells)}
        rank = 0
        for v in self.graph.vars:
            if v.id not in self._param_rank:
                self._nonparam_rank[v.id] = rank
                rank += 1

    @property
    def nonparam_count(self) -> int:
        return len(self.graph.vars) - len(self.param_cells)

    @property
    def total_cells(self) -> int:
        return len(self.param_cells) + self.n_examples * self.nonparam_count

    def instance_cell(self, example: int, base_cell: int) -> int:
        """Dense instance numbering: params first, then per-example cells."""
        rank = self._nonparam_rank.get(base_cell)
        if rank is None:  # a param cell: shared across examples
            return self._param_rank[base_cell]
        return len(self.param_cells) + example * self.nonparam_count + rank

    def param_space_size(self) -> int:
        return self.graph.param_space_size()


def bind_examples(g: Graph, io: IOExamples) -> InstanceGraph:
    """Validate examples against the graph's declarations and bind them."""
    diags: list = []
    if not io.examples:
        raise CompileError(
            [error(E_SHAPE, "need at least one example")], g.name)

    inputs = [d for d in g.decls if d.kind == VarKind.INPUT]
    outputs = [d for d in g.decls if d.kind == VarKind.OUTPUT]

    clamps: list[list[tuple[int, int]]] = []
    observations: list[list[tuple[int, int]]] = []
    for i, ex in enumerate(io.examples):
        where = f"example {i}"
        for given, decls, what in ((ex.inputs, inputs, "input"),
                                   (ex.outputs, outputs, "output")):
            names = {d.name for d in decls}
            for name in given:
                if name not in names:
                    diags.append(error(
                        E_UNKNOWN_NAME,
                        f"{where}: {what} {name!r} is not declared"))
            for d in decls:
                if d.name not in given:
                    diags.append(error(
                        E_SHAPE,
                        f"{where}: missing {what} {d.name!r}; observations"
                        " must be total"))
        if diags:
            continue
        pairs: list[list[tuple[int, int]]] = [[], []]
        for j, (decls, what) in enumerate(((inputs, "input"),
                                           (outputs, "output"))):
            for d in decls:
                given = ex.inputs if j == 0 else ex.outputs
                flat = _flatten(d.name, given[d.name], d.shape, d.domain,
                                diags, f"{where}: {what}")
                if flat is None:
                    continue
                base = g.cell_base[d.name]
                pairs[j].extend((base + k, v) for k, v in enumerate(flat))
        clamps.append(pairs[0])
        observations.append(pairs[1])

    if diags:
        raise CompileError(diags, g.name)

    n = len(io.examples)
    p = len(g.param_cells())
    total_cells = p + n * (len(g.vars) - p)
    total_factors = n * len(g.factors) + sum(map(len, clamps))
    if total_cells > MAX_VAR_CELLS:
        raise CompileError(
            [error(E_SIZE_BUDGET,
                   f"instance graph has {total_cells} cells, over the"
                   f" {MAX_VAR_CELLS} budget")], g.name)
    if total_factors > MAX_FACTORS:
        raise CompileError(
            [error(E_SIZE_BUDGET,
                   f"instance graph has {total_factors} factors, over the"
                   f" {MAX_FACTORS} budget")], g.name)
    return InstanceGraph(g, io, n, clamps, observations)
