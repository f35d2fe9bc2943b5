"""Abstract syntax for the modelling language, plus a pretty-printer.

Spans never participate in equality: `parse(pretty(ast)) == ast` must hold
structurally even though the printed layout differs from the original
source.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..diagnostics import UNKNOWN_SPAN, Span


class VarKind(enum.Enum):
    PARAM = "Param"
    VAR = "Var"
    INPUT = "Input"
    OUTPUT = "Output"


@dataclass(frozen=True, slots=True)
class ModelSource:
    """A model text plus the constant overrides to apply during resolve."""

    name: str
    text: str
    const_overrides: dict[str, int] = field(default_factory=dict)


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True, slots=True)
class IntLit:
    value: int
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class NameRef:
    name: str
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class IndexRef:
    name: str
    indices: tuple["Expr", ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple["Expr", ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class BinOp:
    """Arithmetic or comparison operator: + - * // % == != < <="""

    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class BoolOp:
    """Short-circuit 'and' / 'or' with operand-value semantics."""

    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class NotOp:
    operand: "Expr"
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class Neg:
    operand: "Expr"
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class IfExpr:
    """`then if cond else orelse`"""

    then: "Expr"
    cond: "Expr"
    orelse: "Expr"
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


Expr = IntLit | NameRef | IndexRef | Call | BinOp | BoolOp | NotOp | Neg | IfExpr

# A reference usable as a set_to target or gate scrutinee.
Ref = NameRef | IndexRef


# --------------------------------------------------------------------------
# Statements and top-level items


@dataclass(frozen=True, slots=True)
class SetTo:
    target: Ref
    rhs: Expr
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class ForLoop:
    var: str
    lo: Expr
    hi: Expr
    body: tuple["Stmt", ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class IfStmt:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class GateStmt:
    scrutinee: Ref
    alias: str
    body: tuple["Stmt", ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


Stmt = SetTo | ForLoop | IfStmt | GateStmt


@dataclass(frozen=True, slots=True)
class ConstDef:
    name: str
    value: Expr
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class Decl:
    name: str
    kind: VarKind
    domain: Expr
    shape: tuple[Expr, ...]
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class FnDef:
    name: str
    args: tuple[str, ...]
    arg_domains: tuple[Expr, ...]
    out_domain: Expr
    body: Expr
    span: Span = field(default=UNKNOWN_SPAN, compare=False)


@dataclass(frozen=True, slots=True)
class Ast:
    name: str
    constants: tuple[ConstDef, ...]
    decls: tuple[Decl, ...]
    functions: tuple[FnDef, ...]
    body: tuple[Stmt, ...]


# --------------------------------------------------------------------------
# Pretty-printer

_BINOP_LEVEL = {
    "==": 4, "!=": 4, "<": 4, "<=": 4,
    "+": 5, "-": 5,
    "*": 6, "//": 6, "%": 6,
}


def _level(e: Expr) -> int:
    match e:
        case IfExpr():
            return 0
        case BoolOp(op="or"):
            return 1
        case BoolOp(op="and"):
            return 2
        case NotOp():
            return 3
        case BinOp(op=op):
            return _BINOP_LEVEL[op]
        case Neg():
            return 7
        case _:
            return 8


def _fmt(e: Expr, parent_level: int = 0) -> str:
    lvl = _level(e)
    match e:
        case IntLit(value=v):
            s = str(v)
        case NameRef(name=n):
            s = n
        case IndexRef(name=n, indices=ix):
            s = f"{n}[{', '.join(_fmt(i) for i in ix)}]"
        case Call(name=n, args=args):
            s = f"{n}({', '.join(_fmt(a) for a in args)})"
        case BinOp(op=op, lhs=l, rhs=r):
            s = f"{_fmt(l, lvl)} {op} {_fmt(r, lvl + 1)}"
        case BoolOp(op=op, lhs=l, rhs=r):
            s = f"{_fmt(l, lvl)} {op} {_fmt(r, lvl + 1)}"
        case NotOp(operand=x):
            s = f"not {_fmt(x, lvl)}"
        case Neg(operand=x):
            s = f"-{_fmt(x, lvl)}"
        case IfExpr(then=t, cond=c, orelse=o):
            s = f"{_fmt(t, 1)} if {_fmt(c, 1)} else {_fmt(o, 0)}"
        case _:
            raise TypeError(f"not an expression: {e!r}")
    if lvl < parent_level:
        return f"({s})"
    return s


def _fmt_stmt(s: Stmt, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    match s:
        case SetTo(target=t, rhs=r):
            out.append(f"{pad}{_fmt(t)}.set_to({_fmt(r)})")
        case ForLoop(var=v, lo=lo, hi=hi, body=body):
            out.append(f"{pad}for {v} in range({_fmt(lo)}, {_fmt(hi)}):")
            for b in body:
                _fmt_stmt(b, indent + 1, out)
        case IfStmt(cond=c, then_body=tb, else_body=eb):
            out.append(f"{pad}if {_fmt(c)}:")
            for b in tb:
                _fmt_stmt(b, indent + 1, out)
            if eb:
                out.append(f"{pad}else:")
                for b in eb:
                    _fmt_stmt(b, indent + 1, out)
        case GateStmt(scrutinee=sc, alias=a, body=body):
            out.append(f"{pad}with {_fmt(sc)} as {a}:")
            for b in body:
                _fmt_stmt(b, indent + 1, out)
        case _:
            raise TypeError(f"not a statement: {s!r}")


def pretty(ast: Ast) -> str:
    """Deterministic source rendering; parse(pretty(ast)) == ast."""
    out: list[str] = []
    for c in ast.constants:
        out.append(f"{c.name} = {_fmt(c.value)}")
    if ast.constants and (ast.decls or ast.functions or ast.body):
        out.append("")
    for d in ast.decls:
        dims = f"[{', '.join(_fmt(e) for e in d.shape)}]" if d.shape else ""
        out.append(f"{d.name} = {d.kind.value}({_fmt(d.domain)}){dims}")
    if ast.decls and (ast.functions or ast.body):
        out.append("")
    for f in ast.functions:
        doms = ", ".join(_fmt(e) for e in f.arg_domains)
        out.append(
            f"def {f.name}({', '.join(f.args)}) -> {_fmt(f.out_domain)}"
            f" over ({doms}): return {_fmt(f.body)}"
        )
    if ast.functions and ast.body:
        out.append("")
    for s in ast.body:
        _fmt_stmt(s, 0, out)
    return "\n".join(out) + "\n"
