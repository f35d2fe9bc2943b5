"""Concrete execution, verification, enumeration, and rendering."""

from .machine import (
    ExecutionTrace,
    ParamAssignment,
    check_consistency,
    execute,
)
from .enumerate import EnumBudget, enumerate_assignments
from .render import render_program
from .results import SynthesisResult, SynthStatus

__all__ = [
    "EnumBudget",
    "ExecutionTrace",
    "ParamAssignment",
    "SynthStatus",
    "SynthesisResult",
    "check_consistency",
    "enumerate_assignments",
    "execute",
    "render_program",
]
