"""Common result type returned by every synthesis backend."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from ..ir.graph import Graph
from ..ir.instance import IOExamples
from .machine import ParamAssignment, check_consistency


class SynthStatus(enum.Enum):
    SUCCESS = "success"        # verified solution found
    FAILURE = "failure"        # backend finished without a solution
    EXHAUSTED = "exhausted"    # whole space searched, nothing consistent
    TIMEOUT = "timeout"        # budget or deadline hit
    UNSAT = "unsat"            # solver proved no solution exists
    UNKNOWN = "unknown"        # solver gave up
    SOLVER_ERROR = "solver_error"


@dataclass(frozen=True, slots=True)
class SynthesisResult:
    status: SynthStatus
    backend: str
    assignment: ParamAssignment | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    message: str = ""

    @staticmethod
    def success(g: Graph, io: IOExamples, assignment: ParamAssignment,
                backend: str,
                stats: dict[str, Any] | None = None) -> "SynthesisResult":
        """The only way to build a SUCCESS result: re-verifies the
        assignment against every example first."""
        if not check_consistency(g, assignment, io):
            raise ValueError(
                f"backend {backend!r} reported a solution that fails"
                " verification")
        return SynthesisResult(SynthStatus.SUCCESS, backend, assignment,
                               dict(stats or {}))

    @property
    def ok(self) -> bool:
        return self.status == SynthStatus.SUCCESS
