"""Lowering: unroll a checked model into a factor graph.

Loops are fully unrolled, compile-time conditionals resolved, and gate
bodies replicated once per branch with the bound name substituted by the
branch value.  Function applications whose arguments are all literals
fold to Const factors; everything else becomes Copy/Const/Table factors.

check() has already validated everything this walk does, so failures
here other than the size budget indicate a pipeline bug.
"""

from __future__ import annotations

import itertools

from ..diagnostics import CompileError, E_SIZE_BUDGET, error
from ..frontend.check import MAX_FACTORS, MAX_VAR_CELLS, TypedModel
from ..frontend.resolve import eval_expr
from ..frontend.syntax import (
    Call,
    Expr,
    ForLoop,
    GateStmt,
    IfStmt,
    IndexRef,
    IntLit,
    NameRef,
    Ref,
    SetTo,
    Stmt,
    VarKind,
)
from .graph import (
    Arg,
    Block,
    CellArg,
    ConstFactor,
    CopyFactor,
    FunctionTable,
    Gate,
    Graph,
    Lit,
    TableFactor,
    VarNode,
)


def lower(tm: TypedModel) -> Graph:
    """Unroll a TypedModel into a Graph.  Deterministic."""
    vars_: list[VarNode] = []
    cell_base: dict[str, int] = {}
    for di in tm.decls.values():
        cell_base[di.name] = len(vars_)
        for index in itertools.product(*(range(s) for s in di.shape)):
            vars_.append(VarNode(len(vars_), di.name, index, di.domain,
                                 di.kind))
    if len(vars_) > MAX_VAR_CELLS:
        raise CompileError(
            [error(E_SIZE_BUDGET,
                   f"model declares {len(vars_)} cells, over the"
                   f" {MAX_VAR_CELLS} budget")], tm.name)

    tables = [
        FunctionTable(i, fi.name, fi.arg_domains, fi.out_domain, fi.table)
        for i, fi in enumerate(tm.fns.values())
    ]
    table_ids = {t.name: t.id for t in tables}

    g = Graph(tm.name, vars_, [], tables, [], [Block(0, None)],
              tuple(tm.decls.values()), cell_base, [])
    _Lowerer(tm, g, table_ids).walk_body(tm.ast.body, {}, 0)
    return g


class _Lowerer:
    def __init__(self, tm: TypedModel, g: Graph, table_ids: dict[str, int]):
        self.tm = tm
        self.g = g
        self.table_ids = table_ids

    def cell(self, ref: Ref, env: dict[str, int]) -> int:
        index = tuple(
            eval_expr(ix, env, self.tm.fns)
            for ix in (ref.indices if isinstance(ref, IndexRef) else ()))
        return self.g.cell_id(ref.name, index)

    def walk_body(self, body: tuple[Stmt, ...], env: dict[str, int],
                  block: int) -> None:
        for s in body:
            self.walk_stmt(s, env, block)

    def walk_stmt(self, s: Stmt, env: dict[str, int], block: int) -> None:
        match s:
            case SetTo(target=t, rhs=r):
                self.emit(self.cell(t, env), r, env, block)
            case ForLoop(var=v, lo=lo, hi=hi, body=body):
                lo_v = eval_expr(lo, env, self.tm.fns)
                hi_v = eval_expr(hi, env, self.tm.fns)
                for i in range(lo_v, hi_v):
                    self.walk_body(body, {**env, v: i}, block)
            case IfStmt(cond=c, then_body=tb, else_body=eb):
                cond = eval_expr(c, env, self.tm.fns)
                self.walk_body(tb if cond else eb, env, block)
            case GateStmt(scrutinee=sc, alias=a, body=body):
                cond_cell = self.cell(sc, env)
                domain = self.g.vars[cond_cell].domain
                gate_id = len(self.g.gates)
                branch_blocks = []
                for b in range(domain):
                    blk = Block(len(self.g.blocks), (gate_id, b))
                    self.g.blocks.append(blk)
                    branch_blocks.append(blk.id)
                self.g.gates.append(
                    Gate(gate_id, cond_cell, block, tuple(branch_blocks)))
                self.g.blocks[block].items.append(("gate", gate_id))
                for b in range(domain):
                    self.walk_body(body, {**env, a: b}, branch_blocks[b])

    def emit(self, dst: int, rhs: Expr, env: dict[str, int],
             block: int) -> None:
        factor = self.build_factor(dst, rhs, env)
        idx = len(self.g.factors)
        if idx >= MAX_FACTORS:
            raise CompileError(
                [error(E_SIZE_BUDGET,
                       f"unrolled model exceeds the {MAX_FACTORS} factor"
                       " budget")], self.tm.name)
        self.g.factors.append(factor)
        self.g.factor_block.append(block)
        self.g.blocks[block].items.append(("factor", idx))

    def build_factor(self, dst: int, rhs: Expr, env: dict[str, int]):
        def as_arg(e: Expr) -> Arg:
            if isinstance(e, (NameRef, IndexRef)) and e.name in self.tm.decls:
                return CellArg(self.cell(e, env))
            return Lit(eval_expr(e, env, self.tm.fns))

        if isinstance(rhs, Call):
            table = self.g.tables[self.table_ids[rhs.name]]
            args = tuple(as_arg(a) for a in rhs.args)
            if all(isinstance(a, Lit) for a in args):
                return ConstFactor(dst, table.lookup(
                    tuple(a.value for a in args)))  # type: ignore[union-attr]
            return TableFactor(dst, table.id, args)
        arg = as_arg(rhs)
        if isinstance(arg, Lit):
            return ConstFactor(dst, arg.value)
        return CopyFactor(dst, arg.cell)
