"""Exhaustive enumeration backend.

Candidates are visited in lexicographic order over the Param cells (the
rightmost cell varies fastest).  Each candidate is rejected at the first
failing example; a candidate that survives every example is re-verified
through the shared Success constructor.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from ..ir.instance import InstanceGraph
from .machine import ParamAssignment, _run, get_plan
from .results import SynthesisResult, SynthStatus

_DEADLINE_STRIDE = 1024  # check the clock every this many candidates


@dataclass(frozen=True, slots=True)
class EnumBudget:
    max_candidates: int | None = None
    deadline_s: float | None = None  # wall-clock seconds from call


def enumerate_assignments(ig: InstanceGraph,
                          budget: EnumBudget = EnumBudget()
                          ) -> SynthesisResult:
    g = ig.graph
    plan = get_plan(g)
    cells = g.param_cells()
    domains = [g.vars[c].domain for c in cells]
    start = time.monotonic()
    deadline = None if budget.deadline_s is None else start + budget.deadline_s

    examples = list(zip(ig.clamps, ig.observations))
    tested = 0
    for candidate in itertools.product(*(range(d) for d in domains)):
        if budget.max_candidates is not None and \
                tested >= budget.max_candidates:
            return SynthesisResult(
                SynthStatus.TIMEOUT, "enum",
                stats=_stats(tested, start),
                message=f"candidate budget {budget.max_candidates} reached")
        if deadline is not None and tested % _DEADLINE_STRIDE == 0 and \
                time.monotonic() > deadline:
            return SynthesisResult(
                SynthStatus.TIMEOUT, "enum",
                stats=_stats(tested, start), message="deadline reached")
        tested += 1
        pairs = list(zip(cells, candidate))
        ok = True
        for clamp, obs in examples:
            values = _run(plan, pairs + clamp)
            if any(values[cell] != want for cell, want in obs):
                ok = False
                break
        if ok:
            assignment = ParamAssignment(dict(pairs))
            return SynthesisResult.success(
                g, ig.io, assignment, "enum", _stats(tested, start))
    return SynthesisResult(SynthStatus.EXHAUSTED, "enum",
                           stats=_stats(tested, start),
                           message="no consistent assignment exists")


def _stats(tested: int, start: float) -> dict:
    return {"candidates_tested": tested,
            "elapsed_s": round(time.monotonic() - start, 6)}
