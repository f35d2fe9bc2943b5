"""Drive an external SMT-LIB2 solver and decode its model."""

from __future__ import annotations

import os
import tempfile

from ..execute.machine import ParamAssignment
from ..execute.results import SynthesisResult, SynthStatus
from ..ir.instance import InstanceGraph
from ..solvers import SolverConfig, run_solver, _digest
from .emit import SmtScript, emit_smtlib


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in "()":
            out.append(c)
            i += 1
        elif c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def _parse_sexpr(tokens: list[str], pos: int) -> tuple[object, int]:
    if tokens[pos] == "(":
        items = []
        pos += 1
        while tokens[pos] != ")":
            item, pos = _parse_sexpr(tokens, pos)
            items.append(item)
        return items, pos + 1
    return tokens[pos], pos + 1


def _atom_int(node: object) -> int:
    # Negative integers print as (- 5) in SMT-LIB2.
    if isinstance(node, list) and len(node) == 2 and node[0] == "-":
        return -int(node[1])
    if isinstance(node, str):
        return int(node)
    raise ValueError(f"not an integer term: {node!r}")


def parse_model(output: str, script: SmtScript) -> dict[int, int] | str:
    """Extract param values from solver output; a string is an error."""
    tokens = _tokenize(output)
    if not tokens:
        return "empty solver output"
    verdicts = [t for t in tokens if t in ("sat", "unsat", "unknown")]
    if not verdicts:
        return "no sat/unsat/unknown verdict in output"
    if verdicts[0] != "sat":
        return verdicts[0]
    try:
        start = tokens.index("(")
        pairs, _ = _parse_sexpr(tokens, start)
    except (ValueError, IndexError):
        return "malformed get-value response"
    by_symbol = {}
    for entry in pairs:
        if isinstance(entry, list) and len(entry) == 2:
            try:
                by_symbol[entry[0]] = _atom_int(entry[1])
            except ValueError:
                return f"non-integer binding for {entry[0]!r}"
    values: dict[int, int] = {}
    for cell, symbol in script.param_symbols.items():
        if symbol not in by_symbol:
            return f"solver model is missing {symbol}"
        values[cell] = by_symbol[symbol]
    return values


def solve(ig: InstanceGraph, cfg: SolverConfig,
          script: SmtScript | None = None) -> SynthesisResult:
    """Run the solver on the instance's script; Sat is verified against
    the executor before being reported as success."""
    if script is None:
        script = emit_smtlib(ig)
    with tempfile.TemporaryDirectory(prefix="fgsynth_smt_") as tmp:
        path = os.path.join(tmp, "problem.smt2")
        with open(path, "w") as fh:
            fh.write(script.text)
        run = run_solver(cfg, [path])
    stats = {"solver": cfg.executable}
    if run.timed_out:
        return SynthesisResult(SynthStatus.UNKNOWN, "smt", stats=stats,
                               message=run.detail)
    if not run.ok:
        return SynthesisResult(SynthStatus.SOLVER_ERROR, "smt", stats=stats,
                               message=run.detail)
    parsed = parse_model(run.output, script)
    if parsed == "unsat":
        return SynthesisResult(SynthStatus.UNSAT, "smt", stats=stats)
    if parsed == "unknown":
        return SynthesisResult(SynthStatus.UNKNOWN, "smt", stats=stats,
                               message=run.detail)
    if isinstance(parsed, str):
        return SynthesisResult(
            SynthStatus.SOLVER_ERROR, "smt", stats=stats,
            message=f"{parsed}; output: {_digest(run.output)}")
    assignment = ParamAssignment(parsed)
    try:
        return SynthesisResult.success(ig.graph, ig.io, assignment, "smt",
                                       stats)
    except ValueError:
        return SynthesisResult(
            SynthStatus.SOLVER_ERROR, "smt", stats=stats,
            message="solver model fails execution check (encoding bug)")
