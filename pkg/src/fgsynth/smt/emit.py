"""Encode an instance graph as an SMT-LIB2 script (QF_LIA).

Every cell becomes an Int constant with range assertions.  Param cells
are shared across example replicas and named `p_<decl>_<indices>`; all
other cells are per-example, named `v_<example>_<cellid>`.  Factors
inside gate branches are guarded by implications over the path
conditions.  The script is deterministic: identical instance graphs
produce byte-identical text.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..frontend.syntax import VarKind
from ..ir.graph import (
    CellArg,
    ConstFactor,
    CopyFactor,
    Graph,
    Lit,
    TableFactor,
)
from ..ir.instance import InstanceGraph

LOGIC = "QF_LIA"
# Effective tables at or under this many rows use an ite chain; larger
# ones get one implication per row.
ITE_THRESHOLD = 16


@dataclass(frozen=True, slots=True)
class SmtScript:
    text: str
    param_symbols: dict[int, str]  # base param cell id -> symbol
    logic: str = LOGIC


def param_symbol(g: Graph, cell: int) -> str:
    v = g.vars[cell]
    return "_".join(["p", v.name, *map(str, v.index)])


def _conj(terms: list[str]) -> str:
    if len(terms) == 1:
        return terms[0]
    return f"(and {' '.join(terms)})"


def _assert(lines: list[str], guard: list[str], body: str) -> None:
    if guard:
        lines.append(f"(assert (=> {_conj(guard)} {body}))")
    else:
        lines.append(f"(assert {body})")


class _Emitter:
    def __init__(self, ig: InstanceGraph) -> None:
        self.ig = ig
        self.g = ig.graph
        self.lines: list[str] = []
        self.param_symbols = {c: param_symbol(self.g, c)
                              for c in ig.param_cells}
        self.example = 0

    def sym(self, cell: int) -> str:
        s = self.param_symbols.get(cell)
        if s is not None:
            return s
        return f"v_{self.example}_{cell}"

    def emit(self) -> SmtScript:
        g, lines = self.g, self.lines
        lines.append(f"(set-logic {LOGIC})")
        for c in self.ig.param_cells:
            self._declare(self.param_symbols[c], g.vars[c].domain)
        for e in range(self.ig.n_examples):
            self.example = e
            lines.append(f"; example {e}")
            for v in g.vars:
                if v.kind != VarKind.PARAM:
                    self._declare(self.sym(v.id), v.domain)
            self._walk(0, [])
            for cell, value in self.ig.clamps[e]:
                _assert(lines, [], f"(= {self.sym(cell)} {value})")
            for cell, value in self.ig.observations[e]:
                _assert(lines, [], f"(= {self.sym(cell)} {value})")
        lines.append("(check-sat)")
        syms = [self.param_symbols[c] for c in self.ig.param_cells]
        lines.append(f"(get-value ({' '.join(syms)}))")
        return SmtScript("\n".join(lines) + "\n", dict(self.param_symbols))

    def _declare(self, name: str, domain: int) -> None:
        self.lines.append(f"(declare-const {name} Int)")
        self.lines.append(
            f"(assert (and (<= 0 {name}) (< {name} {domain})))")

    def _walk(self, block_id: int, guard: list[str]) -> None:
        for kind, idx in self.g.blocks[block_id].items:
            if kind == "factor":
                self._factor(self.g.factors[idx], guard)
            else:
                gate = self.g.gates[idx]
                cond = self.sym(gate.cond)
                for b, branch_block in enumerate(gate.branches):
                    self._walk(branch_block, guard + [f"(= {cond} {b})"])

    def _factor(self, f, guard: list[str]) -> None:
        if isinstance(f, CopyFactor):
            _assert(self.lines, guard,
                    f"(= {self.sym(f.dst)} {self.sym(f.src)})")
        elif isinstance(f, ConstFactor):
            _assert(self.lines, guard, f"(= {self.sym(f.dst)} {f.value})")
        else:
            self._table(f, guard)

    def _table(self, f: TableFactor, guard: list[str]) -> None:
        table = self.g.tables[f.table]
        cell_axes = [i for i, a in enumerate(f.args)
                     if isinstance(a, CellArg)]
        fixed = [a.value if isinstance(a, Lit) else 0 for a in f.args]
        domains = [table.arg_domains[i] for i in cell_axes]
        syms = [self.sym(f.args[i].cell) for i in cell_axes]
        dst = self.sym(f.dst)
        rows: list[tuple[tuple[int, ...], int]] = []
        for tup in itertools.product(*(range(d) for d in domains)):
            full = list(fixed)
            for i, v in zip(cell_axes, tup):
                full[i] = v
            rows.append((tup, table.lookup(full)))
        if len(rows) <= ITE_THRESHOLD:
            expr = str(rows[-1][1])
            for tup, out in reversed(rows[:-1]):
                cond = _conj([f"(= {s} {v})" for s, v in zip(syms, tup)])
                expr = f"(ite {cond} {out} {expr})"
            _assert(self.lines, guard, f"(= {dst} {expr})")
        else:
            for tup, out in rows:
                eqs = [f"(= {s} {v})" for s, v in zip(syms, tup)]
                _assert(self.lines, guard + eqs, f"(= {dst} {out})")


def emit_smtlib(ig: InstanceGraph) -> SmtScript:
    return _Emitter(ig).emit()
