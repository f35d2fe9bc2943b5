"""Deterministic textual rendering of a factor graph.

The format is stable across runs and platforms: listing order follows
cell/factor/gate ids, which lowering assigns deterministically.  Golden
tests pin this format.
"""

from __future__ import annotations

from .graph import (
    CellArg,
    ConstFactor,
    CopyFactor,
    Graph,
    Lit,
    TableFactor,
)


def _arg_str(g: Graph, a) -> str:
    if isinstance(a, Lit):
        return f"lit {a.value}"
    return f"v{a.cell}"


def _factor_line(g: Graph, idx: int) -> str:
    f = g.factors[idx]
    if isinstance(f, CopyFactor):
        return f"f{idx}: v{f.dst} := copy(v{f.src})"
    if isinstance(f, ConstFactor):
        return f"f{idx}: v{f.dst} := const({f.value})"
    assert isinstance(f, TableFactor)
    args = ", ".join(_arg_str(g, a) for a in f.args)
    return f"f{idx}: v{f.dst} := t{f.table}({args})"


def dump(g: Graph) -> str:
    """Render the graph as text; deterministic for a given graph."""
    lines: list[str] = []
    s = g.stats()
    lines.append(f"graph {g.name}")
    lines.append(
        f"counts vars={s['vars']} factors={s['factors']}"
        f" tables={s['tables']} gates={s['gates']} blocks={s['blocks']}")
    lines.append(f"param_space {g.param_space_size()}")
    for v in g.vars:
        lines.append(f"var v{v.id} {v.label()} {v.kind.value} d{v.domain}")
    for t in g.tables:
        doms = ", ".join(map(str, t.arg_domains))
        entries = ", ".join(map(str, t.entries))
        lines.append(
            f"table t{t.id} {t.name} ({doms}) -> {t.out_domain}"
            f" = [{entries}]")

    def emit_block(block_id: int, indent: int) -> None:
        pad = "  " * indent
        for kind, idx in g.blocks[block_id].items:
            if kind == "factor":
                lines.append(pad + _factor_line(g, idx))
            else:
                gate = g.gates[idx]
                lines.append(pad + f"g{gate.id}: gate on v{gate.cond}")
                for b, blk in enumerate(gate.branches):
                    lines.append(pad + f"  branch {b} (b{blk}):")
                    emit_block(blk, indent + 2)

    lines.append("block b0:")
    emit_block(0, 1)
    return "\n".join(lines) + "\n"
