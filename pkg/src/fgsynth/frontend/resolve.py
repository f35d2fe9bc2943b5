"""Constant resolution: substitute constants, fold closed expressions.

After this stage every domain, shape, and function signature expression
is an integer literal.  Loop bounds, if-conditions, and indices are
folded where closed; expressions that depend on loop variables or gate
aliases stay symbolic until the unrolling walk.
"""

from __future__ import annotations

from dataclasses import replace

from ..diagnostics import (
    CompileError,
    Diagnostic,
    E_CONST_UNRESOLVED,
    E_DOMAIN_SIZE,
    E_NEG_RANGE,
    E_OVERRIDE,
    E_RUNTIME_INDEX,
    E_SHAPE,
    W_EMPTY_RANGE,
    error,
    warning,
)
from .syntax import (
    Ast,
    BinOp,
    BoolOp,
    Call,
    ConstDef,
    Decl,
    Expr,
    FnDef,
    ForLoop,
    GateStmt,
    IfExpr,
    IfStmt,
    IndexRef,
    IntLit,
    NameRef,
    Neg,
    NotOp,
    SetTo,
    Stmt,
)


class EvalError(Exception):
    """Internal: expression evaluation failed; callers attach code/span.

    kind is 'runtime' when the expression needed a model variable's value,
    'arith' for arithmetic/arity failures.
    """

    def __init__(self, message: str, kind: str = "arith"):
        self.message = message
        self.kind = kind
        super().__init__(message)


def eval_expr(e: Expr, env: dict[str, int],
              fns: dict[str, "object"] | None = None) -> int:
    """Evaluate a closed expression over an integer environment.

    `fns` maps function names to objects with `arg_domains`, `out_domain`
    and `lookup(args) -> int`.  Comparison operators yield 0/1; `and`/`or`
    short-circuit and yield an operand value, as in the host language.
    """
    match e:
        case IntLit(value=v):
            return v
        case NameRef(name=n):
            if n not in env:
                raise EvalError(
                    f"name {n!r} is not a compile-time value here", "runtime")
            return env[n]
        case IndexRef(name=n):
            raise EvalError(
                f"{n!r} is a model variable; its value is not known at"
                " compile time", "runtime")
        case Neg(operand=x):
            return -eval_expr(x, env, fns)
        case NotOp(operand=x):
            return int(not eval_expr(x, env, fns))
        case BoolOp(op="and", lhs=l, rhs=r):
            lv = eval_expr(l, env, fns)
            return lv if not lv else eval_expr(r, env, fns)
        case BoolOp(op="or", lhs=l, rhs=r):
            lv = eval_expr(l, env, fns)
            return lv if lv else eval_expr(r, env, fns)
        case IfExpr(then=t, cond=c, orelse=o):
            return eval_expr(t if eval_expr(c, env, fns) else o, env, fns)
        case BinOp(op=op, lhs=l, rhs=r):
            lv, rv = eval_expr(l, env, fns), eval_expr(r, env, fns)
            return _apply_binop(op, lv, rv)
        case Call(name=n, args=args):
            if fns is None or n not in fns:
                raise EvalError(f"function {n!r} is not available here")
            fn = fns[n]
            values = [eval_expr(a, env, fns) for a in args]
            if len(values) != len(fn.arg_domains):
                raise EvalError(
                    f"function {n!r} expects {len(fn.arg_domains)}"
                    f" argument(s), got {len(values)}")
            for i, (v, d) in enumerate(zip(values, fn.arg_domains)):
                if not 0 <= v < d:
                    raise EvalError(
                        f"argument {i} of {n!r} is {v}, outside [0, {d})")
            return fn.lookup(values)
        case _:
            raise EvalError(f"cannot evaluate {type(e).__name__}")


def _apply_binop(op: str, lv: int, rv: int) -> int:
    if op == "+":
        return lv + rv
    if op == "-":
        return lv - rv
    if op == "*":
        return lv * rv
    if op == "//":
        if rv == 0:
            raise EvalError("integer division by zero")
        return lv // rv
    if op == "%":
        if rv == 0:
            raise EvalError("modulo by zero")
        return lv % rv
    if op == "==":
        return int(lv == rv)
    if op == "!=":
        return int(lv != rv)
    if op == "<":
        return int(lv < rv)
    if op == "<=":
        return int(lv <= rv)
    raise EvalError(f"unknown operator {op!r}")


def subst_fold(e: Expr, env: dict[str, int]) -> Expr:
    """Substitute environment names and fold closed subexpressions.

    Calls and model-variable references are left in place; folding never
    crosses them except through short-circuit selection.
    """
    match e:
        case IntLit():
            return e
        case NameRef(name=n) if n in env:
            return IntLit(env[n], e.span)
        case NameRef():
            return e
        case IndexRef(name=n, indices=ix):
            return replace(e, indices=tuple(subst_fold(i, env) for i in ix))
        case Call(args=args):
            return replace(e, args=tuple(subst_fold(a, env) for a in args))
        case Neg(operand=x):
            xf = subst_fold(x, env)
            if isinstance(xf, IntLit):
                return IntLit(-xf.value, e.span)
            return replace(e, operand=xf)
        case NotOp(operand=x):
            xf = subst_fold(x, env)
            if isinstance(xf, IntLit):
                return IntLit(int(not xf.value), e.span)
            return replace(e, operand=xf)
        case BoolOp(op=op, lhs=l, rhs=r):
            lf = subst_fold(l, env)
            if isinstance(lf, IntLit):
                take_lhs = (op == "or") == bool(lf.value)
                return lf if take_lhs else subst_fold(r, env)
            return replace(e, lhs=lf, rhs=subst_fold(r, env))
        case IfExpr(then=t, cond=c, orelse=o):
            cf = subst_fold(c, env)
            if isinstance(cf, IntLit):
                return subst_fold(t if cf.value else o, env)
            return replace(e, then=subst_fold(t, env), cond=cf,
                           orelse=subst_fold(o, env))
        case BinOp(op=op, lhs=l, rhs=r):
            lf, rf = subst_fold(l, env), subst_fold(r, env)
            if isinstance(lf, IntLit) and isinstance(rf, IntLit):
                try:
                    return IntLit(_apply_binop(op, lf.value, rf.value), e.span)
                except EvalError as exc:
                    raise _FoldError(exc.message, e) from exc
            return replace(e, lhs=lf, rhs=rf)
        case _:
            raise TypeError(f"not an expression: {e!r}")


class _FoldError(Exception):
    def __init__(self, message: str, expr: Expr):
        self.message = message
        self.expr = expr
        super().__init__(message)


def resolve_constants(ast: Ast, overrides: dict[str, int] | None = None,
                      warnings_out: list[Diagnostic] | None = None) -> Ast:
    """Return a new Ast with constants substituted everywhere.

    Overrides replace the in-file value of the named constants.  Domains,
    shapes, and function signatures must fold to literals here; loop
    bounds and conditions fold only where closed.
    """
    overrides = dict(overrides or {})
    diags: list[Diagnostic] = []
    warns: list[Diagnostic] = warnings_out if warnings_out is not None else []

    const_names = {c.name for c in ast.constants}
    for name, value in overrides.items():
        if name not in const_names:
            diags.append(error(
                E_OVERRIDE, f"override for undeclared constant {name!r}"))
        elif not isinstance(value, int) or isinstance(value, bool) or value < 0:
            diags.append(error(
                E_OVERRIDE,
                f"override for {name!r} must be a non-negative integer,"
                f" got {value!r}"))
    if diags:
        raise CompileError(diags, ast.name)

    env: dict[str, int] = {}
    new_constants: list[ConstDef] = []
    for c in ast.constants:
        if c.name in overrides:
            value = overrides[c.name]
        else:
            try:
                value = eval_expr(c.value, env)
            except EvalError as exc:
                raise CompileError(
                    [error(E_CONST_UNRESOLVED,
                           f"constant {c.name!r}: {exc.message}", c.span)],
                    ast.name) from exc
        env[c.name] = value
        new_constants.append(ConstDef(c.name, IntLit(value, c.span), c.span))

    def literal(e: Expr, what: str, span, code: str) -> IntLit:
        try:
            folded = subst_fold(e, env)
        except _FoldError as exc:
            raise CompileError(
                [error(code, f"{what}: {exc.message}", span)], ast.name)
        if not isinstance(folded, IntLit):
            raise CompileError(
                [error(code, f"{what} must resolve to an integer constant",
                       span)], ast.name)
        return folded

    new_decls: list[Decl] = []
    for d in ast.decls:
        domain = literal(d.domain, f"domain of {d.name!r}", d.span,
                         E_CONST_UNRESOLVED)
        if domain.value < 1:
            raise CompileError(
                [error(E_DOMAIN_SIZE,
                       f"domain of {d.name!r} must be >= 1, got {domain.value}",
                       d.span)], ast.name)
        shape = tuple(
            literal(s, f"shape of {d.name!r}", d.span, E_CONST_UNRESOLVED)
            for s in d.shape)
        for s in shape:
            if s.value < 1:
                raise CompileError(
                    [error(E_SHAPE,
                           f"shape entries of {d.name!r} must be >= 1,"
                           f" got {s.value}", d.span)], ast.name)
        new_decls.append(Decl(d.name, d.kind, domain, shape, d.span))

    new_fns: list[FnDef] = []
    for f in ast.functions:
        out_domain = literal(f.out_domain, f"output domain of {f.name!r}",
                             f.span, E_CONST_UNRESOLVED)
        arg_domains = tuple(
            literal(a, f"argument domain of {f.name!r}", f.span,
                    E_CONST_UNRESOLVED)
            for a in f.arg_domains)
        for a in (out_domain, *arg_domains):
            if a.value < 1:
                raise CompileError(
                    [error(E_DOMAIN_SIZE,
                           f"domains of {f.name!r} must be >= 1, got {a.value}",
                           f.span)], ast.name)
        body_env = {k: v for k, v in env.items() if k not in f.args}
        try:
            body = subst_fold(f.body, body_env)
        except _FoldError as exc:
            raise CompileError(
                [error(E_CONST_UNRESOLVED,
                       f"body of {f.name!r}: {exc.message}", f.span)],
                ast.name)
        new_fns.append(FnDef(f.name, f.args, arg_domains, out_domain, body,
                             f.span))

    def resolve_stmt(s: Stmt) -> Stmt | None:
        match s:
            case SetTo(target=t, rhs=r):
                return SetTo(_resolve_ref(t), _fold(r, s.span), s.span)
            case ForLoop(var=v, lo=lo, hi=hi, body=body):
                lo_f = _fold(lo, s.span)
                hi_f = _fold(hi, s.span)
                if isinstance(lo_f, IntLit) and isinstance(hi_f, IntLit):
                    if lo_f.value < 0 or hi_f.value < lo_f.value:
                        raise CompileError(
                            [error(E_NEG_RANGE,
                                   f"loop over {v!r} has invalid range"
                                   f" ({lo_f.value}, {hi_f.value})", s.span)],
                            ast.name)
                    if lo_f.value == hi_f.value:
                        warns.append(warning(
                            W_EMPTY_RANGE,
                            f"loop over {v!r} has empty range"
                            f" ({lo_f.value}, {hi_f.value}); body dropped",
                            s.span))
                        return None
                return ForLoop(v, lo_f, hi_f, resolve_body(body), s.span)
            case IfStmt(cond=c, then_body=tb, else_body=eb):
                return IfStmt(_fold(c, s.span), resolve_body(tb),
                              resolve_body(eb), s.span)
            case GateStmt(scrutinee=sc, alias=a, body=body):
                return GateStmt(_resolve_ref(sc), a, resolve_body(body),
                                s.span)
            case _:
                raise TypeError(f"not a statement: {s!r}")

    def _resolve_ref(ref):
        if isinstance(ref, IndexRef):
            return replace(ref, indices=tuple(
                _fold(i, ref.span) for i in ref.indices))
        return ref

    def _fold(e: Expr, span) -> Expr:
        try:
            return subst_fold(e, env)
        except _FoldError as exc:
            raise CompileError(
                [error(E_CONST_UNRESOLVED, exc.message, span)], ast.name)

    def resolve_body(body: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        out = []
        for s in body:
            rs = resolve_stmt(s)
            if rs is not None:
                out.append(rs)
        return tuple(out)

    return Ast(ast.name, tuple(new_constants), tuple(new_decls),
               tuple(new_fns), resolve_body(ast.body))
