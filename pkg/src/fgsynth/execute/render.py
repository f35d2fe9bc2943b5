"""Human-readable rendering of a solved parameter assignment.

Consecutive Param declarations that share a shape render as one mapping
table, one row per index tuple: `(idx...) -> (value per param)`.  That
turns rule tables like (state, symbol) -> (write, move, next state) into
the natural transition listing.  Everything else renders as literals.
"""

from __future__ import annotations

import itertools

from ..frontend.syntax import VarKind
from ..ir.graph import Graph
from .machine import ParamAssignment, _nest


def render_program(g: Graph, p: ParamAssignment) -> str:
    params = [d for d in g.decls if d.kind == VarKind.PARAM]
    if not params:
        return "(constant program)\n"
    lines: list[str] = []
    i = 0
    while i < len(params):
        run = [params[i]]
        j = i + 1
        while j < len(params) and params[j].shape == params[i].shape:
            run.append(params[j])
            j += 1
        if len(run) >= 2 and params[i].shape:
            names = ", ".join(d.name for d in run)
            dims = ", ".join(map(str, params[i].shape))
            lines.append(f"{names} over [{dims}]:")
            for index in itertools.product(*(range(s)
                                             for s in params[i].shape)):
                values = ", ".join(
                    str(p.values[g.cell_id(d.name, index)]) for d in run)
                idx = ", ".join(map(str, index))
                lines.append(f"  ({idx}) -> ({values})")
        else:
            for d in run:
                base = g.cell_base[d.name]
                flat = [p.values[base + k] for k in range(d.cell_count)]
                lines.append(f"{d.name} = {_nest(flat, d.shape)}")
        i = j
    return "\n".join(lines) + "\n"
