"""Concrete worklist executor over factor graphs.

Execution fires a factor once its block is active and all of its input
cells are known; a gate activates exactly the branch selected by its
condition cell.  A reusable ExecPlan (per-factor reads, per-cell reader
lists) is computed once per graph and cached, which keeps repeated
execution cheap during enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from ..frontend.syntax import VarKind
from ..ir.graph import (
    CellArg,
    ConstFactor,
    CopyFactor,
    Graph,
    Lit,
    TableFactor,
)
from ..ir.instance import IOExamples, _flatten


@dataclass(frozen=True, slots=True)
class ParamAssignment:
    """A concrete value for every Param cell, keyed by base cell id."""

    values: dict[int, int]

    @staticmethod
    def from_named(g: Graph, named: dict[str, Any]) -> "ParamAssignment":
        values: dict[int, int] = {}
        for d in g.decls:
            if d.kind != VarKind.PARAM:
                continue
            if d.name not in named:
                raise KeyError(f"missing parameter {d.name!r}")
            diags: list = []
            flat = _flatten(d.name, named[d.name], d.shape, d.domain, diags,
                            "parameter")
            if flat is None:
                raise ValueError(diags[0].message)
            base = g.cell_base[d.name]
            for k, v in enumerate(flat):
                values[base + k] = v
        return ParamAssignment(values)

    def to_named(self, g: Graph) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for d in g.decls:
            if d.kind != VarKind.PARAM:
                continue
            base = g.cell_base[d.name]
            flat = [self.values[base + k] for k in range(d.cell_count)]
            out[d.name] = _nest(flat, d.shape)
        return out

    def as_tuple(self, g: Graph) -> tuple[int, ...]:
        return tuple(self.values[c] for c in g.param_cells())


def _nest(flat: list[int], shape: tuple[int, ...]) -> Any:
    if not shape:
        return flat[0]
    step = 1
    for s in shape[1:]:
        step *= s
    return [_nest(flat[i * step:(i + 1) * step], shape[1:])
            for i in range(shape[0])]


@dataclass(frozen=True, slots=True)
class ExecutionTrace:
    """Values per base cell (None = never computed on the taken path),
    plus which branch each gate took (gates in inactive blocks absent)."""

    values: tuple[int | None, ...]
    gate_branch: dict[int, int]

    def value_of(self, g: Graph, name: str, index: tuple[int, ...] = ()):
        return self.values[g.cell_id(name, index)]

    def outputs(self, g: Graph) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for d in g.decls:
            if d.kind != VarKind.OUTPUT:
                continue
            base = g.cell_base[d.name]
            flat = [self.values[base + k] for k in range(d.cell_count)]
            out[d.name] = _nest(flat, d.shape)
        return out


@dataclass(slots=True)
class ExecPlan:
    n_cells: int
    n_blocks: int
    # Per factor: (dst, input cell ids with multiplicity, evaluator)
    factor_dst: list[int]
    factor_reads: list[tuple[int, ...]]
    factor_eval: list[Any]  # closure(values) -> int
    factor_block: list[int]
    # Per cell: readers as (kind, idx): kind 0 = factor, 1 = gate
    readers: list[list[tuple[int, int]]]
    gate_cond: list[int]
    gate_block: list[int]
    gate_branches: list[tuple[int, ...]]
    block_items: list[list[tuple[str, int]]]


def _build_plan(g: Graph) -> ExecPlan:
    factor_dst: list[int] = []
    factor_reads: list[tuple[int, ...]] = []
    factor_eval: list[Any] = []
    readers: list[list[tuple[int, int]]] = [[] for _ in g.vars]
    for i, f in enumerate(g.factors):
        factor_dst.append(f.dst)
        if isinstance(f, CopyFactor):
            reads: tuple[int, ...] = (f.src,)
            src = f.src
            factor_eval.append(lambda vals, src=src: vals[src])
        elif isinstance(f, ConstFactor):
            reads = ()
            value = f.value
            factor_eval.append(lambda vals, value=value: value)
        else:
            assert isinstance(f, TableFactor)
            reads = tuple(a.cell for a in f.args if isinstance(a, CellArg))
            table = g.tables[f.table]
            args = f.args

            def table_eval(vals, table=table, args=args):
                idx = 0
                for a, d in zip(args, table.arg_domains):
                    v = a.value if isinstance(a, Lit) else vals[a.cell]
                    idx = idx * d + v
                return table.entries[idx]

            factor_eval.append(table_eval)
        factor_reads.append(reads)
        for c in reads:
            readers[c].append((0, i))
    for gt in g.gates:
        readers[gt.cond].append((1, gt.id))
    return ExecPlan(
        n_cells=len(g.vars),
        n_blocks=len(g.blocks),
        factor_dst=factor_dst,
        factor_reads=factor_reads,
        factor_eval=factor_eval,
        factor_block=list(g.factor_block),
        readers=readers,
        gate_cond=[gt.cond for gt in g.gates],
        gate_block=[gt.block for gt in g.gates],
        gate_branches=[gt.branches for gt in g.gates],
        block_items=[b.items for b in g.blocks],
    )


def get_plan(g: Graph) -> ExecPlan:
    plan = getattr(g, "_exec_plan", None)
    if plan is None:
        plan = _build_plan(g)
        g._exec_plan = plan  # type: ignore[attr-defined]
    return plan


def _run(plan: ExecPlan, known: list[tuple[int, int]],
         gate_branch: dict[int, int] | None = None) -> list[int | None]:
    """Propagate from the initially known cells to quiescence."""
    values: list[int | None] = [None] * plan.n_cells
    pending = [len(r) for r in plan.factor_reads]
    active = [False] * plan.n_blocks
    fired = [False] * len(plan.factor_dst)

    def set_cell(cell: int, value: int) -> None:
        stack = [(cell, value)]
        while stack:
            c, v = stack.pop()
            if values[c] is not None:
                continue
            values[c] = v
            for kind, idx in plan.readers[c]:
                if kind == 0:
                    pending[idx] -= 1
                    if pending[idx] == 0 and active[plan.factor_block[idx]] \
                            and not fired[idx]:
                        fired[idx] = True
                        stack.append((plan.factor_dst[idx],
                                      plan.factor_eval[idx](values)))
                else:
                    if active[plan.gate_block[idx]]:
                        activate(plan.gate_branches[idx][v], stack)
                        if gate_branch is not None:
                            gate_branch[idx] = v

    def activate(block: int, stack: list[tuple[int, int]]) -> None:
        active[block] = True
        for kind, idx in plan.block_items[block]:
            if kind == "factor":
                if pending[idx] == 0 and not fired[idx]:
                    fired[idx] = True
                    stack.append((plan.factor_dst[idx],
                                  plan.factor_eval[idx](values)))
            else:
                cond = values[plan.gate_cond[idx]]
                if cond is not None:
                    activate(plan.gate_branches[idx][cond], stack)
                    if gate_branch is not None:
                        gate_branch[idx] = cond

    # Root block first, then seed the known cells.
    seed: list[tuple[int, int]] = []
    active[0] = True
    for kind, idx in plan.block_items[0]:
        if kind == "factor" and pending[idx] == 0:
            fired[idx] = True
            seed.append((plan.factor_dst[idx], plan.factor_eval[idx](values)))
    for c, v in known:
        set_cell(c, v)
    for c, v in seed:
        set_cell(c, v)
    return values


def execute(g: Graph, p: ParamAssignment,
            inputs: dict[str, Any]) -> ExecutionTrace:
    """Run the graph concretely.  `inputs` maps input names to values."""
    plan = get_plan(g)
    known: list[tuple[int, int]] = list(p.values.items())
    for d in g.decls:
        if d.kind != VarKind.INPUT:
            continue
        if d.name not in inputs:
            raise KeyError(f"missing input {d.name!r}")
        diags: list = []
        flat = _flatten(d.name, inputs[d.name], d.shape, d.domain, diags,
                        "input")
        if flat is None:
            raise ValueError(diags[0].message)
        base = g.cell_base[d.name]
        known.extend((base + k, v) for k, v in enumerate(flat))
    gate_branch: dict[int, int] = {}
    values = _run(plan, known, gate_branch)
    for d in g.decls:
        if d.kind == VarKind.OUTPUT:
            base = g.cell_base[d.name]
            for k in range(d.cell_count):
                if values[base + k] is None:
                    raise RuntimeError(
                        f"output {d.name!r} not computed; graph was not"
                        " validated")
    return ExecutionTrace(tuple(values), gate_branch)


def check_consistency(g: Graph, p: ParamAssignment, io: IOExamples) -> bool:
    """True iff the graph reproduces every example's outputs under p."""
    from ..ir.instance import bind_examples

    ig = bind_examples(g, io)
    plan = get_plan(g)
    base = list(p.values.items())
    for clamp, obs in zip(ig.clamps, ig.observations):
        values = _run(plan, base + clamp)
        for cell, want in obs:
            if values[cell] != want:
                return False
    return True
