"""One-call compilation: source text to validated factor graph."""

from __future__ import annotations

from .diagnostics import CompileError, Diagnostic
from .frontend.check import TypedModel, check
from .frontend.parser import parse
from .frontend.resolve import resolve_constants
from .frontend.syntax import ModelSource
from .ir.graph import Graph
from .ir.lower import lower
from .ir.validate import validate_ssa


def check_source(source: ModelSource,
                 warnings_out: list[Diagnostic] | None = None) -> TypedModel:
    ast = parse(source)
    ast = resolve_constants(ast, source.const_overrides, warnings_out)
    return check(ast)


def compile_source(source: ModelSource,
                   warnings_out: list[Diagnostic] | None = None) -> Graph:
    """Raises CompileError on any error diagnostic from any stage."""
    g = lower(check_source(source, warnings_out))
    diags = validate_ssa(g)
    if diags:
        raise CompileError(diags, source.name)
    return g
