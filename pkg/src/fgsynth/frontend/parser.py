"""Recursive-descent parser producing Ast values.

The grammar is deliberately small: constant bindings, variable
declarations, pure function definitions, `ref.set_to(rhs)` statements,
compile-time `for`/`if`, and `with ref as name:` gate blocks.  Anything
else is rejected by name where possible.
"""

from __future__ import annotations

from typing import NoReturn

from ..diagnostics import (
    CompileError,
    E_ARITY,
    E_DOMAIN_SIZE,
    E_DUPLICATE_NAME,
    E_SET_TO_FORM,
    E_SYNTAX,
    E_UNKNOWN_NAME,
    E_UNSUPPORTED,
    Span,
    error,
)
from .lexer import Token, tokenize
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
    ModelSource,
    NameRef,
    Neg,
    NotOp,
    Ref,
    SetTo,
    Stmt,
    VarKind,
)

_DECL_KEYWORDS = {k.value: k for k in VarKind}

_UNSUPPORTED_NAMES = frozenset(
    ["while", "elif", "import", "from", "class", "try", "raise", "global",
     "del", "lambda", "pass", "assert", "break", "continue", "print"]
)

_COMPARISON_OPS = frozenset(["==", "!=", "<", "<="])


def parse(source: ModelSource) -> Ast:
    """Parse a model source into an Ast.

    Raises CompileError on the first syntax error; also enforces that
    every identifier is declared before use and that top-level names are
    unique.
    """
    return _Parser(source).parse_model()


class _Parser:
    def __init__(self, source: ModelSource):
        self.source = source
        self.toks = tokenize(source.text, source.name)
        self.pos = 0
        # name -> one of 'const', 'decl', 'fn', 'loop', 'alias'
        self.scope: dict[str, str] = {}

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind.lower()
            got = tok.value or tok.kind.lower()
            self.fail(f"expected {want!r}, found {got!r}", tok.span)
        return self.advance()

    def fail(self, message: str, span: Span, code: str = E_SYNTAX) -> NoReturn:
        raise CompileError([error(code, message, span)], self.source.name)

    # -- model ------------------------------------------------------------

    def parse_model(self) -> Ast:
        constants: list[ConstDef] = []
        decls: list[Decl] = []
        functions: list[FnDef] = []
        body: list[Stmt] = []
        while not self.at("EOF"):
            tok = self.peek()
            if tok.kind == "KEYWORD" and tok.value == "def":
                functions.append(self.parse_fndef())
            elif tok.kind == "KEYWORD" and tok.value == "return":
                self.fail("'return' outside a function definition", tok.span)
            elif tok.kind == "NAME" and self.peek(1).kind == "OP" \
                    and self.peek(1).value == "=":
                item = self.parse_binding()
                if isinstance(item, ConstDef):
                    constants.append(item)
                else:
                    decls.append(item)
            elif tok.kind == "NAME" and tok.value in _UNSUPPORTED_NAMES:
                self.fail(f"unsupported construct {tok.value!r}", tok.span,
                          E_UNSUPPORTED)
            else:
                body.append(self.parse_stmt())
        return Ast(self.source.name, tuple(constants), tuple(decls),
                   tuple(functions), tuple(body))

    def declare(self, name: str, cls: str, span: Span) -> None:
        if name in self.scope:
            self.fail(f"name {name!r} is already defined", span,
                      E_DUPLICATE_NAME)
        self.scope[name] = cls

    def parse_binding(self) -> ConstDef | Decl:
        name_tok = self.expect("NAME")
        self.expect("OP", "=")
        tok = self.peek()
        if tok.kind == "NAME" and tok.value in _DECL_KEYWORDS \
                and self.peek(1).kind == "OP" and self.peek(1).value == "(":
            kind = _DECL_KEYWORDS[self.advance().value]
            self.expect("OP", "(")
            domain = self.parse_expr()
            self.expect("OP", ")")
            shape: list[Expr] = []
            while self.at("OP", "["):
                self.advance()
                shape.append(self.parse_expr())
                while self.at("OP", ","):
                    self.advance()
                    shape.append(self.parse_expr())
                self.expect("OP", "]")
            self.expect("NEWLINE")
            if isinstance(domain, IntLit) and domain.value < 1:
                self.fail("domain size must be >= 1", name_tok.span,
                          E_DOMAIN_SIZE)
            self.declare(name_tok.value, "decl", name_tok.span)
            return Decl(name_tok.value, kind, domain, tuple(shape),
                        name_tok.span)
        value = self.parse_expr()
        self.expect("NEWLINE")
        self.declare(name_tok.value, "const", name_tok.span)
        return ConstDef(name_tok.value, value, name_tok.span)

    def parse_fndef(self) -> FnDef:
        def_tok = self.expect("KEYWORD", "def")
        name_tok = self.expect("NAME")
        self.expect("OP", "(")
        args: list[str] = []
        if not self.at("OP", ")"):
            args.append(self.expect("NAME").value)
            while self.at("OP", ","):
                self.advance()
                args.append(self.expect("NAME").value)
        self.expect("OP", ")")
        self.expect("OP", "->")
        out_domain = self.parse_expr()
        self.expect("KEYWORD", "over")
        self.expect("OP", "(")
        arg_domains = [self.parse_expr()]
        while self.at("OP", ","):
            self.advance()
            arg_domains.append(self.parse_expr())
        self.expect("OP", ")")
        self.expect("OP", ":")
        if len(args) != len(arg_domains):
            self.fail(
                f"function {name_tok.value!r} declares {len(args)} argument(s)"
                f" but {len(arg_domains)} domain(s)", def_tok.span, E_ARITY)
        if len(set(args)) != len(args):
            self.fail(f"duplicate argument name in {name_tok.value!r}",
                      def_tok.span, E_DUPLICATE_NAME)
        # Function bodies see constants, earlier functions, and arguments.
        saved = dict(self.scope)
        for a in args:
            if a in self.scope and self.scope[a] in ("const", "decl", "fn"):
                self.fail(f"argument {a!r} shadows a top-level name",
                          def_tok.span, E_DUPLICATE_NAME)
            self.scope[a] = "loop"
        if self.at("KEYWORD", "return"):
            self.advance()
            body = self.parse_expr()
            self.expect("NEWLINE")
        else:
            self.expect("NEWLINE")
            self.expect("INDENT")
            self.expect("KEYWORD", "return")
            body = self.parse_expr()
            self.expect("NEWLINE")
            self.expect("DEDENT")
        self.scope = saved
        self.declare(name_tok.value, "fn", name_tok.span)
        return FnDef(name_tok.value, tuple(args), tuple(arg_domains),
                     out_domain, body, def_tok.span)

    # -- statements -------------------------------------------------------

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            if tok.value == "for":
                return self.parse_for()
            if tok.value == "if":
                return self.parse_if()
            if tok.value == "with":
                return self.parse_gate()
            if tok.value == "return":
                self.fail("'return' outside a function definition", tok.span)
            if tok.value == "def":
                self.fail("function definitions must appear at top level",
                          tok.span)
        if tok.kind == "NAME":
            if tok.value in _UNSUPPORTED_NAMES:
                self.fail(f"unsupported construct {tok.value!r}", tok.span,
                          E_UNSUPPORTED)
            if self.peek(1).kind == "OP" and self.peek(1).value == "=":
                nxt = self.peek(2)
                if nxt.kind == "NAME" and nxt.value in _DECL_KEYWORDS:
                    self.fail("declarations must appear at top level",
                              tok.span)
                self.fail("constant bindings must appear at top level",
                          tok.span)
            return self.parse_set_to()
        self.fail(f"expected a statement, found {tok.value or tok.kind.lower()!r}",
                  tok.span)

    def parse_block(self) -> tuple[Stmt, ...]:
        self.expect("OP", ":")
        self.expect("NEWLINE")
        self.expect("INDENT")
        stmts = [self.parse_stmt()]
        while not self.at("DEDENT"):
            stmts.append(self.parse_stmt())
        self.expect("DEDENT")
        return tuple(stmts)

    def parse_for(self) -> ForLoop:
        for_tok = self.expect("KEYWORD", "for")
        var_tok = self.expect("NAME")
        self.expect("KEYWORD", "in")
        self.expect("KEYWORD", "range")
        self.expect("OP", "(")
        first = self.parse_expr()
        if self.at("OP", ","):
            self.advance()
            lo, hi = first, self.parse_expr()
        else:
            lo, hi = IntLit(0, for_tok.span), first
        self.expect("OP", ")")
        if var_tok.value in self.scope:
            self.fail(f"loop variable {var_tok.value!r} shadows an existing name",
                      var_tok.span, E_DUPLICATE_NAME)
        self.scope[var_tok.value] = "loop"
        body = self.parse_block()
        del self.scope[var_tok.value]
        return ForLoop(var_tok.value, lo, hi, body, for_tok.span)

    def parse_if(self) -> IfStmt:
        if_tok = self.expect("KEYWORD", "if")
        cond = self.parse_expr()
        then_body = self.parse_block()
        else_body: tuple[Stmt, ...] = ()
        if self.at("KEYWORD", "else"):
            self.advance()
            else_body = self.parse_block()
        return IfStmt(cond, then_body, else_body, if_tok.span)

    def parse_gate(self) -> GateStmt:
        with_tok = self.expect("KEYWORD", "with")
        scrutinee = self.parse_ref()
        self.expect("KEYWORD", "as")
        alias_tok = self.expect("NAME")
        if alias_tok.value in self.scope:
            self.fail(f"gate alias {alias_tok.value!r} shadows an existing name",
                      alias_tok.span, E_DUPLICATE_NAME)
        self.scope[alias_tok.value] = "alias"
        body = self.parse_block()
        del self.scope[alias_tok.value]
        return GateStmt(scrutinee, alias_tok.value, body, with_tok.span)

    def parse_set_to(self) -> SetTo:
        target = self.parse_ref()
        self.expect("OP", ".")
        method = self.expect("NAME")
        if method.value != "set_to":
            self.fail(f"unsupported method {method.value!r} (only set_to)",
                      method.span, E_UNSUPPORTED)
        self.expect("OP", "(")
        rhs = self.parse_expr()
        self.expect("OP", ")")
        self.expect("NEWLINE")
        self._validate_set_to_rhs(rhs)
        return SetTo(target, rhs, method.span)

    def _validate_set_to_rhs(self, rhs: Expr) -> None:
        def is_simple(e: Expr) -> bool:
            return isinstance(e, (IntLit, NameRef, IndexRef))

        if is_simple(rhs):
            return
        if isinstance(rhs, Call) and all(is_simple(a) for a in rhs.args):
            return
        self.fail(
            "set_to expects an integer literal, a reference, or a function"
            " applied to literals and references",
            getattr(rhs, "span", Span.point(0, 0)), E_SET_TO_FORM)

    def parse_ref(self) -> Ref:
        name_tok = self.expect("NAME")
        self.check_known(name_tok)
        if self.at("OP", "["):
            self.advance()
            indices = [self.parse_expr()]
            while self.at("OP", ","):
                self.advance()
                indices.append(self.parse_expr())
            self.expect("OP", "]")
            return IndexRef(name_tok.value, tuple(indices), name_tok.span)
        return NameRef(name_tok.value, name_tok.span)

    def check_known(self, tok: Token) -> None:
        if tok.value not in self.scope:
            self.fail(f"unknown name {tok.value!r}", tok.span, E_UNKNOWN_NAME)

    # -- expressions --------------------------------------------------------
    # Precedence (low to high): ternary, or, and, not, comparison,
    # additive, multiplicative, unary minus, atom.

    def parse_expr(self) -> Expr:
        return self.parse_ternary()

    def parse_ternary(self) -> Expr:
        then = self.parse_or()
        if self.at("KEYWORD", "if"):
            span = self.advance().span
            cond = self.parse_or()
            self.expect("KEYWORD", "else")
            orelse = self.parse_ternary()
            return IfExpr(then, cond, orelse, span)
        return then

    def parse_or(self) -> Expr:
        e = self.parse_and()
        while self.at("KEYWORD", "or"):
            span = self.advance().span
            e = BoolOp("or", e, self.parse_and(), span)
        return e

    def parse_and(self) -> Expr:
        e = self.parse_not()
        while self.at("KEYWORD", "and"):
            span = self.advance().span
            e = BoolOp("and", e, self.parse_not(), span)
        return e

    def parse_not(self) -> Expr:
        if self.at("KEYWORD", "not"):
            span = self.advance().span
            return NotOp(self.parse_not(), span)
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        e = self.parse_additive()
        tok = self.peek()
        if tok.kind == "OP" and tok.value in (">", ">="):
            self.fail(f"unsupported comparison operator {tok.value!r};"
                      " rewrite with '<' or '<='", tok.span)
        if tok.kind == "OP" and tok.value in _COMPARISON_OPS:
            self.advance()
            rhs = self.parse_additive()
            after = self.peek()
            if after.kind == "OP" and after.value in _COMPARISON_OPS | {">", ">="}:
                self.fail("comparison chaining is not supported", after.span)
            return BinOp(tok.value, e, rhs, tok.span)
        return e

    def parse_additive(self) -> Expr:
        e = self.parse_multiplicative()
        while self.at("OP", "+") or self.at("OP", "-"):
            tok = self.advance()
            e = BinOp(tok.value, e, self.parse_multiplicative(), tok.span)
        return e

    def parse_multiplicative(self) -> Expr:
        e = self.parse_unary()
        while self.at("OP", "*") or self.at("OP", "//") or self.at("OP", "%"):
            tok = self.advance()
            e = BinOp(tok.value, e, self.parse_unary(), tok.span)
        return e

    def parse_unary(self) -> Expr:
        if self.at("OP", "-"):
            span = self.advance().span
            operand = self.parse_unary()
            if isinstance(operand, IntLit):
                return IntLit(-operand.value, span)
            return Neg(operand, span)
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return IntLit(int(tok.value), tok.span)
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            e = self.parse_expr()
            self.expect("OP", ")")
            return e
        if tok.kind == "NAME":
            self.advance()
            if self.at("OP", "("):
                self.check_known(tok)
                self.advance()
                args: list[Expr] = []
                if not self.at("OP", ")"):
                    args.append(self.parse_expr())
                    while self.at("OP", ","):
                        self.advance()
                        args.append(self.parse_expr())
                self.expect("OP", ")")
                return Call(tok.value, tuple(args), tok.span)
            if self.at("OP", "["):
                self.check_known(tok)
                self.advance()
                indices = [self.parse_expr()]
                while self.at("OP", ","):
                    self.advance()
                    indices.append(self.parse_expr())
                self.expect("OP", "]")
                return IndexRef(tok.value, tuple(indices), tok.span)
            self.check_known(tok)
            return NameRef(tok.value, tok.span)
        if tok.kind == "OP" and tok.value in (">", ">="):
            self.fail(f"unsupported operator {tok.value!r}", tok.span)
        self.fail(f"expected an expression, found "
                  f"{tok.value or tok.kind.lower()!r}", tok.span)
