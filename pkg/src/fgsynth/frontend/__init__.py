"""Language frontend: lexing, parsing, constant resolution, checking."""

from .syntax import (
    Ast,
    BinOp,
    BoolOp,
    Call,
    ConstDef,
    Decl,
    FnDef,
    ForLoop,
    GateStmt,
    IfExpr,
    IfStmt,
    IndexRef,
    IntLit,
    ModelSource,
    NameRef,
    NotOp,
    Neg,
    SetTo,
    VarKind,
    pretty,
)
from .parser import parse
from .resolve import resolve_constants
from .check import DeclInfo, FnInfo, TypedModel, check

__all__ = [
    "Ast",
    "BinOp",
    "BoolOp",
    "Call",
    "ConstDef",
    "Decl",
    "DeclInfo",
    "FnDef",
    "FnInfo",
    "ForLoop",
    "GateStmt",
    "IfExpr",
    "IfStmt",
    "IndexRef",
    "IntLit",
    "ModelSource",
    "NameRef",
    "Neg",
    "NotOp",
    "SetTo",
    "TypedModel",
    "VarKind",
    "check",
    "parse",
    "pretty",
    "resolve_constants",
]
