"""Drive an external MILP solver over an LP file and decode solutions.

The solver is invoked as `<executable> <args...> <lpfile> <solfile>`
and must leave a solution file behind.  Two solution layouts are
understood: "pairs" (optional `status:` header then `name value` per
line) and "cbc" (status line then `index name value ...` rows).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

from ..execute.machine import ParamAssignment
from ..execute.results import SynthesisResult, SynthStatus
from ..ir.instance import InstanceGraph
from ..solvers import SolverConfig, run_solver
from .emit import INTEGRALITY_TOL, emit_ilp
from .lpfile import write_lp_file
from .model import IlpModel


def parse_solution(text: str, fmt: str) -> tuple[str, dict[str, float]]:
    """Returns (status word, variable values)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        return "empty", {}
    values: dict[str, float] = {}
    if fmt == "pairs":
        status = "optimal"
        for ln in lines:
            if ln.lower().startswith("status:"):
                status = ln.split(":", 1)[1].strip().lower()
                continue
            parts = ln.split()
            if len(parts) == 2:
                values[parts[0]] = float(parts[1])
        return status, values
    if fmt == "cbc":
        head = lines[0].lower()
        if "infeasible" in head:
            return "infeasible", {}
        status = "optimal" if "optimal" in head else head.split()[0]
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) >= 3:
                values[parts[1]] = float(parts[2])
        return status, values
    raise ValueError(f"unknown solution format {fmt!r}")


def _run(m: IlpModel, cfg: SolverConfig) -> tuple[str, dict[str, float], str]:
    with tempfile.TemporaryDirectory(prefix="fgsynth_ilp_") as tmp:
        lp_path = os.path.join(tmp, "problem.lp")
        sol_path = os.path.join(tmp, "problem.sol")
        with open(lp_path, "w") as fh:
            fh.write(write_lp_file(m))
        run = run_solver(cfg, [lp_path, sol_path])
        if run.timed_out:
            return "timeout", {}, run.detail
        if not run.ok:
            return "error", {}, run.detail
        if not os.path.exists(sol_path):
            return "error", {}, "solver wrote no solution file"
        with open(sol_path) as fh:
            status, values = parse_solution(fh.read(), cfg.solution_format)
        return status, values, ""


def solve_ilp(ig: InstanceGraph, cfg: SolverConfig,
              m: IlpModel | None = None) -> SynthesisResult:
    if m is None:
        m = emit_ilp(ig, "integral")
    status, values, detail = _run(m, cfg)
    stats = {"solver": cfg.executable, "variables": len(m.variables),
             "rows": len(m.rows)}
    if status == "timeout":
        return SynthesisResult(SynthStatus.UNKNOWN, "ilp", stats=stats,
                               message=detail)
    if status == "infeasible":
        return SynthesisResult(SynthStatus.UNSAT, "ilp", stats=stats)
    if status != "optimal":
        return SynthesisResult(SynthStatus.SOLVER_ERROR, "ilp", stats=stats,
                               message=detail or f"solver status {status!r}")
    for v in m.variables:
        if v.integral:
            x = values.get(v.name, 0.0)
            if abs(x - round(x)) > INTEGRALITY_TOL:
                return SynthesisResult(
                    SynthStatus.SOLVER_ERROR, "ilp", stats=stats,
                    message=f"fractional value {x} for integer"
                    f" variable {v.name} (encoding bug)")
    assignment = decode(m, values)
    if assignment is None:
        return SynthesisResult(
            SynthStatus.SOLVER_ERROR, "ilp", stats=stats,
            message="no indicator set on some Param cell")
    try:
        return SynthesisResult.success(ig.graph, ig.io, assignment, "ilp",
                                       stats)
    except ValueError:
        return SynthesisResult(
            SynthStatus.SOLVER_ERROR, "ilp", stats=stats,
            message="solution fails execution check (encoding bug)")


def decode(m: IlpModel, values: dict[str, float]) -> ParamAssignment | None:
    out: dict[int, int] = {}
    for cell, by_value in m.param_symbols.items():
        chosen = None
        for val, name in by_value.items():
            if values.get(name, 0.0) >= 1.0 - INTEGRALITY_TOL:
                chosen = val
                break
        if chosen is None:
            return None
        out[cell] = chosen
    return ParamAssignment(out)


@dataclass(frozen=True, slots=True)
class LpReport:
    feasible: bool
    fractionality: float  # share of indicators off {0,1} by > tolerance
    n_indicators: int
    message: str = ""


def lp_bound_report(ig: InstanceGraph, cfg: SolverConfig) -> LpReport:
    """Solve the LP relaxation and report how fractional it is."""
    m = emit_ilp(ig, "relaxed")
    status, values, detail = _run(m, cfg)
    if status == "infeasible":
        return LpReport(False, 0.0, 0)
    if status != "optimal":
        return LpReport(False, 0.0, 0, detail or f"status {status!r}")
    indicators = [v.name for v in m.variables if v.name in m.symbols]
    off = sum(1 for n in indicators
              if min(values.get(n, 0.0), 1.0 - values.get(n, 0.0))
              > INTEGRALITY_TOL)
    return LpReport(True, off / len(indicators) if indicators else 0.0,
                    len(indicators))
