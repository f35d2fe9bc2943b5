"""Relaxation: build a DiffProgram from an InstanceGraph.

Each example replica is walked block by block.  Copies alias slots,
constants and input clamps become one-hot vectors, table factors become
sum-product ops, and each gate closes with one mixture per cell its
branches wrote.  Within a block, items are reordered by a stable
topological sort on (reads, writes) so that textual order never forces a
slot to be consumed before it exists.
"""

from __future__ import annotations

import numpy as np

from ..ir.graph import (
    CellArg,
    ConstFactor,
    CopyFactor,
    Graph,
    Lit,
    TableFactor,
)
from ..ir.instance import InstanceGraph
from ..ir.validate import factor_reads
from ..frontend.syntax import VarKind
from .tape import DiffProgram, MixOp, OneHotOp, SoftmaxOp, TableOp


def relax(ig: InstanceGraph) -> DiffProgram:
    g = ig.graph
    ops: list = []
    n_slots = 0

    def new_slot() -> int:
        nonlocal n_slots
        n_slots += 1
        return n_slots - 1

    param_cells = g.param_cells()
    param_domains = [g.vars[c].domain for c in param_cells]
    softmax_slots: list[tuple[int, int]] = []
    param_slot: dict[int, int] = {}
    for i, c in enumerate(param_cells):
        slot = new_slot()
        ops.append(SoftmaxOp(i, slot))
        softmax_slots.append((i, slot))
        param_slot[c] = slot

    order = _block_orders(g)

    observations: list[tuple[int, int]] = []
    slot_of: list[dict[int, int]] = []
    for e in range(ig.n_examples):
        slots = dict(param_slot)
        for cell, value in ig.clamps[e]:
            slot = new_slot()
            ops.append(OneHotOp(slot, g.vars[cell].domain, value))
            slots[cell] = slot
        _walk_block(g, 0, slots, ops, new_slot, order)
        for cell, value in ig.observations[e]:
            observations.append((slots[cell], value))
        slot_of.append(slots)

    return DiffProgram(
        graph=g, io=ig.io, param_cells=param_cells,
        param_domains=param_domains, ops=ops, n_slots=n_slots,
        observations=observations, slot_of=slot_of,
        softmax_slots=softmax_slots)


def _walk_block(g: Graph, block_id: int, slots: dict[int, int], ops: list,
                new_slot, order: dict[int, list[tuple[str, int]]]) -> None:
    for kind, idx in order[block_id]:
        if kind == "factor":
            _emit_factor(g, g.factors[idx], slots, ops, new_slot)
        else:
            _emit_gate(g, idx, slots, ops, new_slot, order)


def _emit_factor(g: Graph, f, slots: dict[int, int], ops: list,
                 new_slot) -> None:
    if isinstance(f, CopyFactor):
        slots[f.dst] = slots[f.src]
        return
    if isinstance(f, ConstFactor):
        slot = new_slot()
        ops.append(OneHotOp(slot, g.vars[f.dst].domain, f.value))
        slots[f.dst] = slot
        return
    assert isinstance(f, TableFactor)
    table = g.tables[f.table]
    entries = np.asarray(table.entries, dtype=np.int64).reshape(
        table.arg_domains)
    # Slice literal arguments out of the table, keep cell axes.
    index: list = []
    in_slots: list[int] = []
    for a in f.args:
        if isinstance(a, Lit):
            index.append(a.value)
        else:
            index.append(slice(None))
            in_slots.append(slots[a.cell])
    entries = entries[tuple(index)]
    slot = new_slot()
    ops.append(TableOp(slot, tuple(in_slots), entries,
                       table.out_domain))
    slots[f.dst] = slot


def _emit_gate(g: Graph, gate_id: int, slots: dict[int, int], ops: list,
               new_slot, order) -> None:
    gate = g.gates[gate_id]
    cond_slot = slots[gate.cond]
    branch_maps: list[dict[int, int]] = []
    for blk in gate.branches:
        child = dict(slots)
        _walk_block(g, blk, child, ops, new_slot, order)
        branch_maps.append(child)
    written: set[int] = set()
    for child in branch_maps:
        for cell in child:
            if cell not in slots or child[cell] != slots[cell]:
                written.add(cell)
    for cell in sorted(written):
        out = new_slot()
        branch_slots = tuple(
            child[cell] if cell in child and
            (cell not in slots or child[cell] != slots[cell]) else -1
            for child in branch_maps)
        # Branches that did not write fall back to the pre-gate marginal
        # (or uniform if the cell did not exist before the gate).
        fallback = slots.get(cell, -1)
        ops.append(MixOp(out, cond_slot, branch_slots, fallback,
                         g.vars[cell].domain))
        slots[cell] = out


def _item_rw(g: Graph):
    """(reads, writes) sets of base cells per block and per gate."""
    block_rw: dict[int, tuple[set[int], set[int]]] = {}
    gate_rw: dict[int, tuple[set[int], set[int]]] = {}

    def visit_block(block_id: int) -> tuple[set[int], set[int]]:
        if block_id in block_rw:
            return block_rw[block_id]
        reads: set[int] = set()
        writes: set[int] = set()
        for kind, idx in g.blocks[block_id].items:
            if kind == "factor":
                r, w = set(factor_reads(g.factors[idx])), {g.factors[idx].dst}
            else:
                r, w = visit_gate(idx)
            reads |= r
            writes |= w
        reads -= writes
        block_rw[block_id] = (reads, writes)
        return block_rw[block_id]

    def visit_gate(gate_id: int) -> tuple[set[int], set[int]]:
        if gate_id in gate_rw:
            return gate_rw[gate_id]
        gate = g.gates[gate_id]
        reads: set[int] = {gate.cond}
        writes: set[int] = set()
        for blk in gate.branches:
            r, w = visit_block(blk)
            reads |= r
            writes |= w
        gate_rw[gate_id] = (reads, writes)
        return gate_rw[gate_id]

    visit_block(0)
    return block_rw, gate_rw


def _block_orders(g: Graph) -> dict[int, list[tuple[str, int]]]:
    """Stable topological order of each block's items by data flow."""
    block_rw, gate_rw = _item_rw(g)

    def item_rw(item: tuple[str, int]) -> tuple[set[int], set[int]]:
        kind, idx = item
        if kind == "factor":
            return set(factor_reads(g.factors[idx])), {g.factors[idx].dst}
        return gate_rw[idx]

    orders: dict[int, list[tuple[str, int]]] = {}
    for block in g.blocks:
        items = block.items
        n = len(items)
        if n <= 1:
            orders[block.id] = list(items)
            continue
        rws = [item_rw(it) for it in items]
        placed = [False] * n
        produced: set[int] = set()
        remaining_writes: dict[int, int] = {}
        for _, w in rws:
            for c in w:
                remaining_writes[c] = remaining_writes.get(c, 0) + 1
        out: list[tuple[str, int]] = []
        for _ in range(n):
            chosen = -1
            for i in range(n):
                if placed[i]:
                    continue
                reads = rws[i][0]
                # Ready when no unplaced sibling still writes a read cell.
                if all(remaining_writes.get(c, 0) == 0 or c in produced
                       for c in reads):
                    chosen = i
                    break
            if chosen < 0:  # cycle: validated graphs cannot reach this
                chosen = next(i for i in range(n) if not placed[i])
            placed[chosen] = True
            out.append(items[chosen])
            for c in rws[chosen][1]:
                remaining_writes[c] -= 1
                produced.add(c)
        orders[block.id] = out
    return orders
