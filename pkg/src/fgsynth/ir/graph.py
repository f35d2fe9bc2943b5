"""Factor-graph data structures.

A Graph holds one var node per declared cell (dense ids in declaration
order, row-major within each array), factors grouped into a tree of
blocks, and gates that switch entire blocks on the value of a condition
cell.  Factors are Copy (dst := src), Const (dst := literal), and Table
(dst := table[args]); table arguments are either cells or literals that
were fixed by gate branch substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..frontend.check import DeclInfo
from ..frontend.syntax import VarKind


@dataclass(frozen=True, slots=True)
class VarNode:
    id: int
    name: str
    index: tuple[int, ...]
    domain: int
    kind: VarKind

    def label(self) -> str:
        if not self.index:
            return self.name
        return f"{self.name}[{','.join(map(str, self.index))}]"


@dataclass(frozen=True, slots=True)
class Lit:
    value: int


@dataclass(frozen=True, slots=True)
class CellArg:
    cell: int


Arg = Lit | CellArg


@dataclass(frozen=True, slots=True)
class CopyFactor:
    dst: int
    src: int


@dataclass(frozen=True, slots=True)
class ConstFactor:
    dst: int
    value: int


@dataclass(frozen=True, slots=True)
class TableFactor:
    dst: int
    table: int
    args: tuple[Arg, ...]


Factor = CopyFactor | ConstFactor | TableFactor


@dataclass(frozen=True, slots=True)
class FunctionTable:
    """A tabulated pure function, shared by every factor that applies it."""

    id: int
    name: str
    arg_domains: tuple[int, ...]
    out_domain: int
    entries: tuple[int, ...]  # row-major over the argument domains

    def lookup(self, args: tuple[int, ...] | list[int]) -> int:
        idx = 0
        for v, d in zip(args, self.arg_domains):
            idx = idx * d + v
        return self.entries[idx]


@dataclass(frozen=True, slots=True)
class Gate:
    """Selects one branch block according to the condition cell's value."""

    id: int
    cond: int
    block: int  # containing block
    branches: tuple[int, ...]  # one block per condition domain value


@dataclass(slots=True)
class Block:
    id: int
    parent: tuple[int, int] | None  # (gate id, branch value), None at root
    items: list[tuple[str, int]] = field(default_factory=list)
    # items are ("factor", factor index) or ("gate", gate id), in order


@dataclass(slots=True)
class Graph:
    name: str
    vars: list[VarNode]
    factors: list[Factor]
    tables: list[FunctionTable]
    gates: list[Gate]
    blocks: list[Block]  # blocks[0] is the root
    decls: tuple[DeclInfo, ...]
    cell_base: dict[str, int]  # decl name -> first cell id
    factor_block: list[int]  # block id of each factor
    # Cached execution plan; built lazily by the executor.
    _exec_plan: object = field(default=None, repr=False, compare=False)

    def cell_id(self, name: str, index: tuple[int, ...] = ()) -> int:
        base = self.cell_base[name]
        decl = next(d for d in self.decls if d.name == name)
        idx = 0
        for v, s in zip(index, decl.shape):
            idx = idx * s + v
        return base + idx

    def param_cells(self) -> list[int]:
        return [v.id for v in self.vars if v.kind == VarKind.PARAM]

    def param_space_size(self) -> int:
        size = 1
        for v in self.vars:
            if v.kind == VarKind.PARAM:
                size *= v.domain
        return size

    def log10_param_space(self) -> float:
        return sum(math.log10(v.domain) for v in self.vars
                   if v.kind == VarKind.PARAM)

    def cells_of_kind(self, kind: VarKind) -> list[int]:
        return [v.id for v in self.vars if v.kind == kind]

    def block_chain(self, block_id: int) -> dict[int, int]:
        """Gate constraints (gate id -> branch) active inside a block."""
        chain: dict[int, int] = {}
        b = self.blocks[block_id]
        while b.parent is not None:
            gate_id, branch = b.parent
            chain[gate_id] = branch
            b = self.blocks[self.gates[gate_id].block]
        return chain

    def stats(self) -> dict[str, int]:
        return {
            "vars": len(self.vars),
            "factors": len(self.factors),
            "tables": len(self.tables),
            "gates": len(self.gates),
            "blocks": len(self.blocks),
        }
