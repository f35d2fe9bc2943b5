"""Static checking via a full abstract unroll.

check() walks every loop iteration and every gate branch with concrete
compile-time values, so everything the lowering walk would do is
exercised here first: a TypedModel that passed check always lowers.

Write discipline is per control path (a path picks one branch for every
dynamically distinct gate): a cell that is read anywhere, or is an
Output, must be written exactly once on every path that can observe it;
double writes are rejected outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..diagnostics import (
    CompileError,
    Diagnostic,
    E_ARITY,
    E_CONST_UNRESOLVED,
    E_DOMAIN,
    E_DOUBLE_WRITE,
    E_FN_RANGE,
    E_FN_TOTAL,
    E_GATE_SCRUTINEE,
    E_INDEX,
    E_MISSING_WRITE,
    E_NEG_RANGE,
    E_RUNTIME_INDEX,
    E_SET_TO_FORM,
    E_SIZE_BUDGET,
    E_UNKNOWN_NAME,
    E_WRITE_INPUT,
    E_WRITE_PARAM,
    Span,
    error,
)
from .resolve import EvalError, eval_expr
from .syntax import (
    Ast,
    Call,
    Expr,
    ForLoop,
    GateStmt,
    IfStmt,
    IndexRef,
    IntLit,
    NameRef,
    Ref,
    SetTo,
    Stmt,
    VarKind,
)

# Hard size budget shared with lowering: a model may not unroll to more
# than this many var cells / factors.
MAX_VAR_CELLS = 200_000
MAX_FACTORS = 1_000_000
MAX_FN_TABLE = 1_000_000

Cell = tuple[str, tuple[int, ...]]
# A control path maps dynamic gate sites to the chosen branch.
Path = dict[int, int]


@dataclass(frozen=True, slots=True)
class FnInfo:
    """A tabulated pure function."""

    name: str
    arg_domains: tuple[int, ...]
    out_domain: int
    table: tuple[int, ...]  # row-major over the argument domain product

    def lookup(self, args: list[int] | tuple[int, ...]) -> int:
        idx = 0
        for v, d in zip(args, self.arg_domains):
            idx = idx * d + v
        return self.table[idx]


@dataclass(frozen=True, slots=True)
class DeclInfo:
    name: str
    kind: VarKind
    domain: int
    shape: tuple[int, ...]

    @property
    def cell_count(self) -> int:
        n = 1
        for s in self.shape:
            n *= s
        return n


@dataclass(frozen=True, slots=True)
class TypedModel:
    """A checked, resolved model: guaranteed to lower within budget."""

    name: str
    ast: Ast
    decls: dict[str, DeclInfo]
    fns: dict[str, FnInfo]
    var_cell_count: int
    factor_count: int


@dataclass(slots=True)
class _GateSite:
    site_id: int
    span: Span
    domain: int


@dataclass(slots=True)
class _State:
    diags: list[Diagnostic] = field(default_factory=list)
    # cells currently written on the path under construction
    live: dict[Cell, Span] = field(default_factory=dict)
    writes: dict[Cell, list[tuple[Path, Span]]] = field(default_factory=dict)
    reads: dict[Cell, list[tuple[Path, Span]]] = field(default_factory=dict)
    sites: dict[int, _GateSite] = field(default_factory=dict)
    factor_count: int = 0
    next_site: int = 0
    budget_hit: bool = False


def check(ast: Ast) -> TypedModel:
    """Validate a resolved Ast; returns the TypedModel or raises."""
    decls: dict[str, DeclInfo] = {}
    diags: list[Diagnostic] = []
    for d in ast.decls:
        if not isinstance(d.domain, IntLit) or \
                not all(isinstance(s, IntLit) for s in d.shape):
            raise CompileError(
                [error(E_CONST_UNRESOLVED,
                       f"declaration {d.name!r} is not resolved; run"
                       " resolve_constants first", d.span)], ast.name)
        decls[d.name] = DeclInfo(d.name, d.kind, d.domain.value,
                                 tuple(s.value for s in d.shape))

    var_cells = sum(di.cell_count for di in decls.values())
    if var_cells > MAX_VAR_CELLS:
        raise CompileError(
            [error(E_SIZE_BUDGET,
                   f"model declares {var_cells} cells, over the"
                   f" {MAX_VAR_CELLS} budget")], ast.name)

    fns = _tabulate_functions(ast, diags)
    if diags:
        raise CompileError(diags, ast.name)

    st = _State()
    _walk_body(ast.body, {}, st, decls, fns)
    if not st.budget_hit:
        _analyze_coverage(st, decls)
    errors = [d for d in st.diags if d.severity.value == "error"]
    if errors:
        raise CompileError(_dedupe(errors), ast.name)
    return TypedModel(ast.name, ast, decls, fns, var_cells, st.factor_count)


def _dedupe(diags: list[Diagnostic]) -> list[Diagnostic]:
    seen: set[tuple] = set()
    out = []
    for d in diags:
        key = (d.code, d.message, d.span)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def _tabulate_functions(ast: Ast, diags: list[Diagnostic]) -> dict[str, FnInfo]:
    fns: dict[str, FnInfo] = {}
    for f in ast.functions:
        arg_domains = tuple(d.value for d in f.arg_domains)  # type: ignore
        out_domain = f.out_domain.value  # type: ignore
        size = 1
        for d in arg_domains:
            size *= d
        if size > MAX_FN_TABLE:
            diags.append(error(
                E_SIZE_BUDGET,
                f"function {f.name!r} table has {size} entries, over the"
                f" {MAX_FN_TABLE} budget", f.span))
            continue
        entries: list[int] = []
        ok = True
        for args in itertools.product(*(range(d) for d in arg_domains)):
            env = dict(zip(f.args, args))
            try:
                v = eval_expr(f.body, env, fns)
            except EvalError as exc:
                diags.append(error(
                    E_FN_TOTAL,
                    f"function {f.name!r} is not total at"
                    f" {tuple(args)}: {exc.message}", f.span))
                ok = False
                break
            if not 0 <= v < out_domain:
                diags.append(error(
                    E_FN_RANGE,
                    f"function {f.name!r} yields {v} at {tuple(args)},"
                    f" outside [0, {out_domain})", f.span))
                ok = False
                break
            entries.append(v)
        if ok:
            fns[f.name] = FnInfo(f.name, arg_domains, out_domain,
                                 tuple(entries))
    return fns


# --------------------------------------------------------------------------
# Abstract unroll


def _walk_body(body: tuple[Stmt, ...], env: dict[str, int], st: _State,
               decls: dict[str, DeclInfo], fns: dict[str, FnInfo],
               path: Path | None = None) -> None:
    if path is None:
        path = {}
    for s in body:
        if st.budget_hit:
            return
        _walk_stmt(s, env, st, decls, fns, path)


def _walk_stmt(s: Stmt, env: dict[str, int], st: _State,
               decls: dict[str, DeclInfo], fns: dict[str, FnInfo],
               path: Path) -> None:
    match s:
        case SetTo():
            _walk_set_to(s, env, st, decls, fns, path)
        case ForLoop(var=v, lo=lo, hi=hi, body=body):
            try:
                lo_v = eval_expr(lo, env, fns)
                hi_v = eval_expr(hi, env, fns)
            except EvalError as exc:
                st.diags.append(error(
                    _code_for(exc), f"loop bound: {exc.message}", s.span))
                return
            if lo_v < 0 or hi_v < lo_v:
                st.diags.append(error(
                    E_NEG_RANGE,
                    f"loop over {v!r} has invalid range ({lo_v}, {hi_v})",
                    s.span))
                return
            for i in range(lo_v, hi_v):
                _walk_body(body, {**env, v: i}, st, decls, fns, path)
                if st.budget_hit:
                    return
        case IfStmt(cond=c, then_body=tb, else_body=eb):
            try:
                cond = eval_expr(c, env, fns)
            except EvalError as exc:
                code = _code_for(exc)
                msg = exc.message
                if code == E_RUNTIME_INDEX:
                    msg += "; branch on runtime values with 'with ... as ...'"
                st.diags.append(error(code, f"if-condition: {msg}", s.span))
                return
            _walk_body(tb if cond else eb, env, st, decls, fns, path)
        case GateStmt():
            _walk_gate(s, env, st, decls, fns, path)


def _walk_set_to(s: SetTo, env: dict[str, int], st: _State,
                 decls: dict[str, DeclInfo], fns: dict[str, FnInfo],
                 path: Path) -> None:
    st.factor_count += 1
    if st.factor_count > MAX_FACTORS:
        st.diags.append(error(
            E_SIZE_BUDGET,
            f"unrolled model exceeds the {MAX_FACTORS} factor budget",
            s.span))
        st.budget_hit = True
        return
    cell = _resolve_target(s.target, env, st, decls, fns)
    if cell is None:
        return
    di = decls[cell[0]]
    if di.kind == VarKind.INPUT:
        st.diags.append(error(
            E_WRITE_INPUT, f"cannot write to input {_cell_str(cell)}",
            s.span))
        return
    if di.kind == VarKind.PARAM:
        st.diags.append(error(
            E_WRITE_PARAM, f"cannot write to parameter {_cell_str(cell)}",
            s.span))
        return
    # Validate the right-hand side against the target domain.
    _check_rhs(s.rhs, di.domain, env, st, decls, fns, path, s.span)
    # Per-path single-write discipline via the live set.
    if cell in st.live:
        prev = st.live[cell]
        st.diags.append(error(
            E_DOUBLE_WRITE,
            f"{_cell_str(cell)} is written more than once on a control"
            f" path (previous write at {prev})", s.span))
        return
    st.live[cell] = s.span
    st.writes.setdefault(cell, []).append((dict(path), s.span))


def _walk_gate(s: GateStmt, env: dict[str, int], st: _State,
               decls: dict[str, DeclInfo], fns: dict[str, FnInfo],
               path: Path) -> None:
    cell = _resolve_scrutinee(s.scrutinee, env, st, decls, fns)
    if cell is None:
        return
    domain = decls[cell[0]].domain
    site = _GateSite(st.next_site, s.span, domain)
    st.next_site += 1
    st.sites[site.site_id] = site
    st.reads.setdefault(cell, []).append((dict(path), s.span))
    saved = dict(st.live)
    merged: dict[Cell, Span] = {}
    for b in range(domain):
        st.live = dict(saved)
        branch_path = {**path, site.site_id: b}
        _walk_body(s.body, {**env, s.alias: b}, st, decls, fns, branch_path)
        for c, sp in st.live.items():
            if c not in saved:
                merged.setdefault(c, sp)
        if st.budget_hit:
            return
    st.live = {**saved, **merged}


def _resolve_target(ref: Ref, env: dict[str, int], st: _State,
                    decls: dict[str, DeclInfo],
                    fns: dict[str, FnInfo]) -> Cell | None:
    if ref.name not in decls:
        st.diags.append(error(
            E_SET_TO_FORM,
            f"set_to target {ref.name!r} is not a declared variable",
            ref.span))
        return None
    return _resolve_cell(ref, env, st, decls, fns)


def _resolve_scrutinee(ref: Ref, env: dict[str, int], st: _State,
                       decls: dict[str, DeclInfo],
                       fns: dict[str, FnInfo]) -> Cell | None:
    if ref.name not in decls:
        st.diags.append(error(
            E_GATE_SCRUTINEE,
            f"gate scrutinee {ref.name!r} must reference a declared"
            " variable", ref.span))
        return None
    return _resolve_cell(ref, env, st, decls, fns)


def _resolve_cell(ref: Ref, env: dict[str, int], st: _State,
                  decls: dict[str, DeclInfo],
                  fns: dict[str, FnInfo]) -> Cell | None:
    """Evaluate a reference's indices to a concrete cell."""
    di = decls[ref.name]
    indices: tuple[Expr, ...] = ()
    if isinstance(ref, IndexRef):
        indices = ref.indices
    if len(indices) != len(di.shape):
        st.diags.append(error(
            E_INDEX,
            f"{ref.name!r} expects {len(di.shape)} index(es),"
            f" got {len(indices)}", ref.span))
        return None
    concrete: list[int] = []
    for k, ix in enumerate(indices):
        try:
            v = eval_expr(ix, env, fns)
        except EvalError as exc:
            st.diags.append(error(
                _code_for(exc), f"index {k} of {ref.name!r}: {exc.message}",
                ref.span))
            return None
        if not 0 <= v < di.shape[k]:
            st.diags.append(error(
                E_INDEX,
                f"index {v} out of range for shape"
                f" [{', '.join(map(str, di.shape))}] of {ref.name!r}",
                ref.span))
            return None
        concrete.append(v)
    return (ref.name, tuple(concrete))


def _check_rhs(rhs: Expr, target_domain: int, env: dict[str, int],
               st: _State, decls: dict[str, DeclInfo],
               fns: dict[str, FnInfo], path: Path, span: Span) -> None:
    def check_value_arg(e: Expr, domain: int, what: str) -> None:
        """A literal (or compile-time name) must land inside `domain`;
        a reference must have exactly matching domain."""
        if isinstance(e, (NameRef, IndexRef)) and e.name in decls:
            cell = _resolve_cell(e, env, st, decls, fns)
            if cell is None:
                return
            src = decls[e.name]
            if src.domain != domain:
                st.diags.append(error(
                    E_DOMAIN,
                    f"{what}: {_cell_str(cell)} has domain {src.domain},"
                    f" expected {domain}", span))
            st.reads.setdefault(cell, []).append((dict(path), span))
            return
        try:
            v = eval_expr(e, env, fns)
        except EvalError as exc:
            st.diags.append(error(
                _code_for(exc), f"{what}: {exc.message}", span))
            return
        if not 0 <= v < domain:
            st.diags.append(error(
                E_DOMAIN, f"{what}: value {v} outside [0, {domain})", span))

    if isinstance(rhs, Call):
        if rhs.name not in fns:
            st.diags.append(error(
                E_UNKNOWN_NAME, f"unknown function {rhs.name!r}", span))
            return
        fn = fns[rhs.name]
        if len(rhs.args) != len(fn.arg_domains):
            st.diags.append(error(
                E_ARITY,
                f"function {rhs.name!r} expects {len(fn.arg_domains)}"
                f" argument(s), got {len(rhs.args)}", span))
            return
        if fn.out_domain != target_domain:
            st.diags.append(error(
                E_DOMAIN,
                f"function {rhs.name!r} yields domain {fn.out_domain},"
                f" target has domain {target_domain}", span))
        for i, a in enumerate(rhs.args):
            check_value_arg(a, fn.arg_domains[i],
                            f"argument {i} of {rhs.name!r}")
        return
    check_value_arg(rhs, target_domain, "set_to value")


def _code_for(exc: EvalError) -> str:
    return E_RUNTIME_INDEX if exc.kind == "runtime" else E_CONST_UNRESOLVED


def _cell_str(cell: Cell) -> str:
    name, idx = cell
    if not idx:
        return name
    return f"{name}[{', '.join(map(str, idx))}]"


# --------------------------------------------------------------------------
# Coverage: every read (and every Output cell) must see exactly one write
# on every control path that can reach it.


def _analyze_coverage(st: _State, decls: dict[str, DeclInfo]) -> None:
    demanded: dict[Cell, list[tuple[Path, Span]]] = {}
    for cell, rs in st.reads.items():
        demanded.setdefault(cell, []).extend(rs)
    for name, di in decls.items():
        if di.kind == VarKind.OUTPUT:
            for idx in itertools.product(*(range(s) for s in di.shape)):
                demanded.setdefault((name, idx), []).append(({}, Span.point(0, 0)))

    for cell, reads in demanded.items():
        di = decls[cell[0]]
        if di.kind in (VarKind.INPUT, VarKind.PARAM):
            continue  # always available, never written
        writes = [p for p, _ in st.writes.get(cell, [])]
        # Only the sites some write constrains can matter to coverage, so
        # read paths are projected onto that set before deduplication;
        # reads nested under unrelated gates would otherwise each repeat
        # the full analysis.
        wsites = {s for w in writes for s in w}
        checked: set[frozenset] = set()
        for full_path, read_span in reads:
            read_path = {s: b for s, b in full_path.items() if s in wsites}
            key = frozenset(read_path.items())
            if key in checked:
                continue
            checked.add(key)
            witness = _find_uncovered(read_path, writes, st)
            if witness is None:
                continue
            span = read_span if read_span.line else Span.point(0, 0)
            if not writes:
                what = "an output that is never written" \
                    if di.kind == VarKind.OUTPUT else "read but never written"
                st.diags.append(error(
                    E_MISSING_WRITE, f"{_cell_str(cell)} is {what}", span))
                break
            extra = {s: b for s, b in witness.items() if s not in read_path}
            if extra:
                site_id, branch = next(iter(extra.items()))
                site = st.sites[site_id]
                st.diags.append(error(
                    E_MISSING_WRITE,
                    f"{_cell_str(cell)} is not written on every control"
                    f" path: branch {branch} of the gate at {site.span}"
                    " has no write",
                    span if span.line else site.span))
            else:
                st.diags.append(error(
                    E_MISSING_WRITE,
                    f"{_cell_str(cell)} is used on a control path where"
                    " it is never written", span))


def _find_uncovered(path: Path, writes: list[Path],
                    st: _State) -> Path | None:
    """Return a completion of `path` with no write, or None if covered.

    A path is covered when some compatible write constrains no site beyond
    the path (it fires on all completions of the path), or when some
    undecided site splits the completions and every branch is covered.
    """
    compatible = [w for w in writes
                  if all(path.get(s, b) == b for s, b in w.items())]
    if not compatible:
        return dict(path)
    for w in compatible:
        if all(s in path for s in w):
            return None  # fires on every completion of `path`
    # Split on the outermost undecided site (sites are numbered in entry
    # order, so parents precede children); splitting an inner site first
    # leaves sibling subtrees' writes compatible and the recursion blows
    # up combinatorially.
    site_id = min(s for w in compatible for s in w if s not in path)
    domain = st.sites[site_id].domain
    for b in range(domain):
        sub = _find_uncovered({**path, site_id: b}, compatible, st)
        if sub is not None:
            return sub
    return None
