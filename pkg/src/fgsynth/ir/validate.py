"""Structural validation of a factor graph.

Independent of the frontend's own analysis: works purely on the Graph.
Two factors are co-activatable when no gate forces them onto different
branches; per-path write discipline and acyclic data dependence are
stated over co-activatable sets.
"""

from __future__ import annotations

from collections import deque

from ..diagnostics import (
    Diagnostic,
    E_CYCLE,
    E_DOUBLE_WRITE,
    E_MISSING_WRITE,
    E_WRITE_INPUT,
    E_WRITE_PARAM,
    error,
)
from ..frontend.syntax import VarKind
from .graph import CellArg, ConstFactor, CopyFactor, Gate, Graph, TableFactor


def factor_reads(f) -> list[int]:
    if isinstance(f, CopyFactor):
        return [f.src]
    if isinstance(f, TableFactor):
        return [a.cell for a in f.args if isinstance(a, CellArg)]
    return []


def validate_ssa(g: Graph) -> list[Diagnostic]:
    """Check write discipline, coverage, and acyclicity.  Returns
    diagnostics; an empty list means the graph is well-formed."""
    diags: list[Diagnostic] = []
    chains = [g.block_chain(b.id) for b in g.blocks]

    writers: dict[int, list[int]] = {}
    for i, f in enumerate(g.factors):
        writers.setdefault(f.dst, []).append(i)
        kind = g.vars[f.dst].kind
        if kind == VarKind.INPUT:
            diags.append(error(
                E_WRITE_INPUT,
                f"factor f{i} writes input cell {g.vars[f.dst].label()}"))
        elif kind == VarKind.PARAM:
            diags.append(error(
                E_WRITE_PARAM,
                f"factor f{i} writes parameter cell {g.vars[f.dst].label()}"))

    # Double writes: two co-activatable writers of the same cell.
    for cell, ws in writers.items():
        pair = _conflicting_pair(
            [tuple(sorted(chains[g.factor_block[w]].items())) for w in ws])
        if pair is not None:
            i, j = pair
            diags.append(error(
                E_DOUBLE_WRITE,
                f"cell {g.vars[cell].label()} is written by both"
                f" f{ws[i]} and f{ws[j]} on a shared control path"))

    # Coverage: every cell that is read anywhere, or is an Output, must be
    # written exactly once on every control path that can observe it.
    demands: dict[int, set[frozenset]] = {}
    for i, f in enumerate(g.factors):
        for c in factor_reads(f):
            demands.setdefault(c, set()).add(
                frozenset(chains[g.factor_block[i]].items()))
    for gate in g.gates:
        demands.setdefault(gate.cond, set()).add(
            frozenset(chains[g.blocks[gate.block].id].items()))
    for v in g.vars:
        if v.kind == VarKind.OUTPUT:
            demands.setdefault(v.id, set()).add(frozenset())

    gate_domain = {gt.id: len(gt.branches) for gt in g.gates}
    for cell, paths in sorted(demands.items()):
        v = g.vars[cell]
        if v.kind in (VarKind.INPUT, VarKind.PARAM):
            continue
        wchains = [chains[g.factor_block[w]] for w in writers.get(cell, [])]
        # The covering recursion only ever inspects gates that some writer
        # chain mentions, so demand paths can be projected onto that set
        # and deduplicated; readers nested under unrelated gates (e.g. the
        # next timestep's) otherwise multiply the work by their count.
        wgates = {k for w in wchains for k in w}
        projected = sorted({frozenset((k, b) for k, b in p if k in wgates)
                            for p in paths}, key=sorted)
        for path_items in projected:
            path = dict(path_items)
            witness = _find_uncovered(path, wchains, gate_domain)
            if witness is None:
                continue
            if not wchains:
                diags.append(error(
                    E_MISSING_WRITE,
                    f"cell {v.label()} is demanded but never written"))
            else:
                extra = {k: b for k, b in witness.items() if k not in path}
                if extra:
                    gate_id, branch = next(iter(extra.items()))
                    diags.append(error(
                        E_MISSING_WRITE,
                        f"cell {v.label()} is not written on branch"
                        f" {branch} of gate g{gate_id}"))
                else:
                    diags.append(error(
                        E_MISSING_WRITE,
                        f"cell {v.label()} is demanded on a control path"
                        " where it is never written"))
            break

    diags.extend(_check_acyclic(g, chains, writers))
    return diags


def _conflicting_pair(chains: list[tuple]) -> tuple[int, int] | None:
    """Find two co-activatable chains among sorted (gate, branch) tuples.

    Chains are root paths in the gate tree, so once a group agrees on
    every gate split so far, a chain that lacks the next split gate can
    share no further gate with any chain that has it (the other chain's
    remainder lies inside that gate's subtree) — the two are compatible.
    This keeps the scan linear instead of pairwise.
    """

    def rec(items: list[tuple[tuple, int, int]]) -> tuple[int, int] | None:
        if len(items) < 2:
            return None
        nexts = [c[cur][0] if cur < len(c) else None for c, cur, _ in items]
        for k, n in enumerate(nexts):
            if n is None:  # exhausted: compatible with every other member
                other = items[1] if k == 0 else items[0]
                return (items[k][2], other[2])
        gate = min(nexts)
        lacking = [it for it, n in zip(items, nexts) if n != gate]
        if lacking:
            having = next(it for it, n in zip(items, nexts) if n == gate)
            return (lacking[0][2], having[2])
        groups: dict[int, list[tuple[tuple, int, int]]] = {}
        for c, cur, i in items:
            groups.setdefault(c[cur][1], []).append((c, cur + 1, i))
        for sub in groups.values():
            found = rec(sub)
            if found is not None:
                return found
        return None

    return rec([(c, 0, i) for i, c in enumerate(chains)])


def _find_uncovered(path: dict[int, int], wchains: list[dict[int, int]],
                    gate_domain: dict[int, int]) -> dict[int, int] | None:
    compatible = [w for w in wchains
                  if all(path.get(k, b) == b for k, b in w.items())]
    if not compatible:
        return dict(path)
    for w in compatible:
        if all(k in path for k in w):
            return None
    # Split on the outermost undetermined gate (parents get smaller ids
    # than their children); splitting inner gates first would leave the
    # sibling subtrees' writers compatible and blow up the recursion.
    gate_id = min(k for w in compatible for k in w if k not in path)
    for b in range(gate_domain[gate_id]):
        sub = _find_uncovered({**path, gate_id: b}, compatible, gate_domain)
        if sub is not None:
            return sub
    return None


def _check_acyclic(g: Graph, chains: list[dict[int, int]],
                   writers: dict[int, list[int]]) -> list[Diagnostic]:
    """Acyclicity of data dependence over co-activatable factor pairs.

    Data edges run from a cell's writers to its co-activatable readers;
    structural edges run from each gate to everything its branches
    contain, since branch factors only execute once the condition value
    has selected a branch.

    Materializing writer x reader edges per cell is quadratic, so Kahn's
    algorithm first runs on an overapproximation that routes every data
    edge through a per-cell hub node (writer -> hub -> reader, dropping
    the compatibility test).  Every true edge survives the rerouting, so
    an acyclic hub graph proves the exact graph acyclic.  Any exact
    cycle maps to a closed walk in the hub graph, so its nodes are never
    peeled; the exact pairwise check then runs only on the unpeeled
    core, which is empty for well-formed graphs.
    """
    n_factors = len(g.factors)
    n_gates = len(g.gates)

    def gate_node(gate_id: int) -> int:
        return n_factors + gate_id

    readers: dict[int, list[tuple[int, dict[int, int]]]] = {}
    for i, f in enumerate(g.factors):
        for c in factor_reads(f):
            readers.setdefault(c, []).append((i, chains[g.factor_block[i]]))
    for gate in g.gates:
        readers.setdefault(gate.cond, []).append(
            (gate_node(gate.id), chains[g.blocks[gate.block].id]))

    structural: list[list[int]] = [[] for _ in range(n_gates)]

    def add_structural(gate: Gate) -> None:
        stack = list(gate.branches)
        while stack:
            blk = g.blocks[stack.pop()]
            for kind, idx in blk.items:
                if kind == "factor":
                    structural[gate.id].append(idx)
                else:
                    structural[gate.id].append(gate_node(idx))
                    stack.extend(g.gates[idx].branches)

    for gate in g.gates:
        add_structural(gate)

    # Hub graph: factors, gates, then one hub per cell with both writers
    # and readers.
    hub_of = {}
    for cell, ws in writers.items():
        if cell in readers:
            hub_of[cell] = n_factors + n_gates + len(hub_of)
    n_hub = n_factors + n_gates + len(hub_of)
    succs: list[list[int]] = [[] for _ in range(n_hub)]
    for gid in range(n_gates):
        succs[gate_node(gid)] = list(structural[gid])
    for cell, hub in hub_of.items():
        for w in writers[cell]:
            succs[w].append(hub)
        succs[hub] = [node for node, _ in readers[cell]]

    indeg = [0] * n_hub
    for vs in succs:
        for v in vs:
            indeg[v] += 1
    queue = deque(u for u, d in enumerate(indeg) if d == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen == n_hub:
        return []

    # Exact check on the unpeeled core.
    core = {u for u, d in enumerate(indeg) if d > 0 and u < n_factors + n_gates}

    def compatible(c1: dict[int, int], c2: dict[int, int]) -> bool:
        small, big = (c1, c2) if len(c1) <= len(c2) else (c2, c1)
        return all(big.get(k, v) == v for k, v in small.items())

    core_succs: dict[int, set[int]] = {u: set() for u in core}
    for cell, ws in writers.items():
        rs = [r for r in readers.get(cell, []) if r[0] in core]
        if not rs:
            continue
        for w in ws:
            if w not in core:
                continue
            wc = chains[g.factor_block[w]]
            for node, rc in rs:
                if node != w and compatible(wc, rc):
                    core_succs[w].add(node)
    for gid in range(n_gates):
        u = gate_node(gid)
        if u in core:
            core_succs[u].update(v for v in structural[gid] if v in core)

    core_indeg = {u: 0 for u in core}
    for u, vs in core_succs.items():
        for v in vs:
            core_indeg[v] += 1
    queue = deque(u for u, d in core_indeg.items() if d == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in core_succs[u]:
            core_indeg[v] -= 1
            if core_indeg[v] == 0:
                queue.append(v)
    if seen != len(core):
        stuck = [u for u, d in core_indeg.items() if d > 0]
        cells = sorted({g.vars[g.factors[u].dst].label()
                        for u in stuck if u < n_factors})
        return [error(
            E_CYCLE,
            "cyclic data dependence among factors writing: "
            + ", ".join(cells[:8]))]
    return []
