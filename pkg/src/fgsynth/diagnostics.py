"""Shared diagnostic vocabulary for the compile pipeline.

Every stage (parse, resolve, check, lower, validate) reports problems as
Diagnostic values carrying a stable machine-readable code, a source span,
and a human-readable message.  Stages that cannot continue raise
CompileError, which aggregates one or more diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Stable diagnostic codes.  Tests match on these, not on message text.
E_SYNTAX = "E_SYNTAX"
E_UNSUPPORTED = "E_UNSUPPORTED"
E_DUPLICATE_NAME = "E_DUPLICATE_NAME"
E_UNKNOWN_NAME = "E_UNKNOWN_NAME"
E_CONST_UNRESOLVED = "E_CONST_UNRESOLVED"
E_NEG_RANGE = "E_NEG_RANGE"
E_DOMAIN_SIZE = "E_DOMAIN_SIZE"
E_SHAPE = "E_SHAPE"
E_DOMAIN = "E_DOMAIN"
E_INDEX = "E_INDEX"
E_RUNTIME_INDEX = "E_RUNTIME_INDEX"
E_WRITE_INPUT = "E_WRITE_INPUT"
E_WRITE_PARAM = "E_WRITE_PARAM"
E_DOUBLE_WRITE = "E_DOUBLE_WRITE"
E_MISSING_WRITE = "E_MISSING_WRITE"
E_FN_RANGE = "E_FN_RANGE"
E_FN_TOTAL = "E_FN_TOTAL"
E_GATE_SCRUTINEE = "E_GATE_SCRUTINEE"
E_ARITY = "E_ARITY"
E_SET_TO_FORM = "E_SET_TO_FORM"
E_CYCLE = "E_CYCLE"
E_SIZE_BUDGET = "E_SIZE_BUDGET"
E_OVERRIDE = "E_OVERRIDE"
W_EMPTY_RANGE = "W_EMPTY_RANGE"


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open source region, 1-based lines and columns."""

    line: int
    col: int
    end_line: int
    end_col: int

    @staticmethod
    def point(line: int, col: int) -> "Span":
        return Span(line, col, line, col + 1)

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


UNKNOWN_SPAN = Span(0, 0, 0, 0)


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    message: str
    span: Span = UNKNOWN_SPAN
    severity: Severity = Severity.ERROR

    def render(self, filename: str | None = None) -> str:
        where = f"{filename}:{self.span}" if filename else str(self.span)
        return f"{where}: {self.severity.value}: {self.message} [{self.code}]"


class CompileError(Exception):
    """Raised when a pipeline stage produced at least one error diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic], filename: str | None = None):
        self.diagnostics = list(diagnostics)
        self.filename = filename
        super().__init__("\n".join(d.render(filename) for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]


def error(code: str, message: str, span: Span = UNKNOWN_SPAN) -> Diagnostic:
    return Diagnostic(code, message, span, Severity.ERROR)


def warning(code: str, message: str, span: Span = UNKNOWN_SPAN) -> Diagnostic:
    return Diagnostic(code, message, span, Severity.WARNING)
