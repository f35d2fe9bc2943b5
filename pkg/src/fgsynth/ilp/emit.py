"""Encode an instance graph as a 0/1 integer linear program.

Every cell gets a one-hot indicator block; factors become equality rows
between indicators, with Table factors mediated by joint tuple
variables (the local marginal polytope).  A factor inside gate branches
has its equality rows slackened so they bind exactly when every gate on
the path takes the required branch: since all terms lie in [0, 1],
    lhs - rhs <= sum_path (1 - b_cond_branch)
in both directions is a valid big-M relaxation with M = 1.
"""

from __future__ import annotations

import itertools

from ..frontend.syntax import VarKind
from ..ir.graph import CellArg, ConstFactor, CopyFactor, Lit, TableFactor
from ..ir.instance import InstanceGraph
from .model import IlpModel, LpRow, LpVar

INTEGRALITY_TOL = 1e-6

Term = tuple[float, str]


class _Emitter:
    def __init__(self, ig: InstanceGraph, relaxed: bool) -> None:
        self.ig = ig
        self.g = ig.graph
        self.relaxed = relaxed
        self.m = IlpModel(ig.graph.name, integral=not relaxed)
        self.example = 0
        self._fixed: dict[str, float] = {}

    def indicator(self, cell: int, value: int) -> str:
        v = self.g.vars[cell]
        if v.kind == VarKind.PARAM:
            return "_".join(["bp", v.name, *map(str, v.index), str(value)])
        return f"b_{self.example}_{cell}_{value}"

    def _add_cell(self, cell: int) -> None:
        v = self.g.vars[cell]
        names = []
        for val in range(v.domain):
            name = self.indicator(cell, val)
            names.append(name)
            self.m.variables.append(
                LpVar(name, 0.0, 1.0, not self.relaxed))
            icell = self.ig.instance_cell(self.example, cell)
            self.m.symbols[name] = (icell, val)
        self._row("=", 1.0, [(1.0, n) for n in names])

    def _row(self, sense: str, rhs: float, terms: list[Term]) -> None:
        self.m.rows.append(
            LpRow(f"c{len(self.m.rows)}", tuple(terms), sense, rhs))

    def _eq(self, lhs: list[Term], rhs: float,
            path: list[tuple[int, int]]) -> None:
        """lhs = rhs, required only when every (cond, branch) on the
        gate path is taken."""
        if not path:
            self._row("=", rhs, lhs)
            return
        acts = [(1.0, self.indicator(c, b)) for c, b in path]
        k = len(path)
        self._row("<=", rhs + k, lhs + acts)
        neg = [(-t, n) for t, n in lhs]
        self._row("<=", k - rhs, neg + acts)

    def emit(self) -> IlpModel:
        g = self.m
        for cell in self.ig.param_cells:
            self._add_cell(cell)
            v = self.g.vars[cell]
            g.param_symbols[cell] = {
                val: self.indicator(cell, val) for val in range(v.domain)}
        for e in range(self.ig.n_examples):
            self.example = e
            for v in self.g.vars:
                if v.kind != VarKind.PARAM:
                    self._add_cell(v.id)
            self._walk(0, [])
            for cell, value in (*self.ig.clamps[e],
                                *self.ig.observations[e]):
                self._fixed[self.indicator(cell, value)] = 1.0
        if self._fixed:
            g.variables = [
                LpVar(v.name, 1.0, 1.0, v.integral)
                if v.name in self._fixed else v
                for v in g.variables]
        return g

    def _walk(self, block_id: int, path: list[tuple[int, int]]) -> None:
        for kind, idx in self.g.blocks[block_id].items:
            if kind == "factor":
                self._factor(idx, self.g.factors[idx], path)
            else:
                gate = self.g.gates[idx]
                for b, branch_block in enumerate(gate.branches):
                    self._walk(branch_block, path + [(gate.cond, b)])

    def _factor(self, idx: int, f, path: list[tuple[int, int]]) -> None:
        if isinstance(f, CopyFactor):
            dom = self.g.vars[f.dst].domain
            for v in range(dom):
                self._eq([(1.0, self.indicator(f.dst, v)),
                          (-1.0, self.indicator(f.src, v))], 0.0, path)
        elif isinstance(f, ConstFactor):
            self._eq([(1.0, self.indicator(f.dst, f.value))], 1.0, path)
        else:
            self._table(idx, f, path)

    def _table(self, idx: int, f: TableFactor,
               path: list[tuple[int, int]]) -> None:
        table = self.g.tables[f.table]
        cell_axes = [i for i, a in enumerate(f.args)
                     if isinstance(a, CellArg)]
        fixed = [a.value if isinstance(a, Lit) else 0 for a in f.args]
        domains = [table.arg_domains[i] for i in cell_axes]
        cells = [f.args[i].cell for i in cell_axes]
        joint: list[tuple[tuple[int, ...], str, int]] = []
        for tup in itertools.product(*(range(d) for d in domains)):
            jname = "_".join(
                ["j", str(self.example), str(idx), *map(str, tup)])
            self.m.variables.append(LpVar(jname, 0.0, 1.0, False))
            full = list(fixed)
            for i, v in zip(cell_axes, tup):
                full[i] = v
            joint.append((tup, jname, table.lookup(full)))
            for cell, v in zip(cells, tup):
                self._row("<=", 0.0,
                          [(1.0, jname), (-1.0, self.indicator(cell, v))])
        self._eq([(1.0, jname) for _, jname, _ in joint], 1.0, path)
        for v in range(self.g.vars[f.dst].domain):
            terms: list[Term] = [(1.0, self.indicator(f.dst, v))]
            terms += [(-1.0, jname) for _, jname, out in joint if out == v]
            self._eq(terms, 0.0, path)


def emit_ilp(ig: InstanceGraph, mode: str = "integral") -> IlpModel:
    if mode not in ("integral", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    return _Emitter(ig, relaxed=(mode == "relaxed")).emit()
