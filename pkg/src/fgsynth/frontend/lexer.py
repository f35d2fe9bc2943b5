"""Indentation-aware lexer for the modelling language.

The language is line-oriented: statements end at newline, blocks are
introduced by a trailing ':' and a deeper indent.  Indentation must use
spaces.  '#' starts a comment that runs to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import CompileError, E_SYNTAX, Span, error

KEYWORDS = frozenset(
    ["def", "return", "for", "in", "range", "if", "else", "with", "as",
     "and", "or", "not", "over"]
)

# Longest match first.
_OPERATORS = ["->", "//", "<=", "==", "!=", ">=", "=", "(", ")", "[", "]",
              ",", ":", "+", "-", "*", "%", "<", ">", "."]


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # NAME INT OP KEYWORD NEWLINE INDENT DEDENT EOF
    value: str
    span: Span


def tokenize(text: str, filename: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        # Strip comments outside of any string context (no strings exist).
        hash_pos = raw.find("#")
        line = raw if hash_pos < 0 else raw[:hash_pos]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip(" "))
        if "\t" in line[:indent] or line.lstrip(" ").startswith("\t"):
            raise CompileError(
                [error(E_SYNTAX, "tab indentation is not supported; use spaces",
                       Span.point(lineno, indent + 1))], filename)
        if indent > indents[-1]:
            indents.append(indent)
            tokens.append(Token("INDENT", "", Span.point(lineno, 1)))
        else:
            while indent < indents[-1]:
                indents.pop()
                tokens.append(Token("DEDENT", "", Span.point(lineno, 1)))
            if indent != indents[-1]:
                raise CompileError(
                    [error(E_SYNTAX, "unindent does not match an outer level",
                           Span.point(lineno, indent + 1))], filename)
        _lex_line(line, lineno, tokens, filename)
        tokens.append(Token("NEWLINE", "", Span.point(lineno, len(line) + 1)))
    final = len(lines) + 1
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token("DEDENT", "", Span.point(final, 1)))
    tokens.append(Token("EOF", "", Span.point(final, 1)))
    return tokens


def _lex_line(line: str, lineno: int, out: list[Token], filename: str | None) -> None:
    i = len(line) - len(line.lstrip(" "))
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == " ":
            i += 1
            continue
        start = i
        if ch.isdigit():
            while i < n and line[i].isdigit():
                i += 1
            if i < n and (line[i] == "." or line[i].isalpha()):
                if line[i] == ".":
                    raise CompileError(
                        [error(E_SYNTAX, "floating-point literals are not supported",
                               Span.point(lineno, start + 1))], filename)
                raise CompileError(
                    [error(E_SYNTAX, f"invalid number literal {line[start:i + 1]!r}",
                           Span.point(lineno, start + 1))], filename)
            out.append(Token("INT", line[start:i],
                             Span(lineno, start + 1, lineno, i + 1)))
            continue
        if ch.isalpha() or ch == "_":
            while i < n and (line[i].isalnum() or line[i] == "_"):
                i += 1
            word = line[start:i]
            kind = "KEYWORD" if word in KEYWORDS else "NAME"
            out.append(Token(kind, word, Span(lineno, start + 1, lineno, i + 1)))
            continue
        for op in _OPERATORS:
            if line.startswith(op, i):
                i += len(op)
                out.append(Token("OP", op, Span(lineno, start + 1, lineno, i + 1)))
                break
        else:
            raise CompileError(
                [error(E_SYNTAX, f"unexpected character {ch!r}",
                       Span.point(lineno, start + 1))], filename)
