#!/usr/bin/env python3
"""Minimal finite-domain SMT-LIB2 solver.

Covers the fragment the toolkit emits (QF_LIA over bounded Int
constants): declare-const, assert over =, <=, <, >=, >, and, or, not,
=>, ite, +, -, *, check-sat, get-value.  Domains must be finite, i.e.
every constant needs a lower and upper bound among the assertions
(range assertions of the form (and (<= 0 x) (< x N)) are recognized
directly).  Search is backtracking with forward propagation (satisfied
constraints are cached, last-free-variable value pruning) and dom/deg
variable ordering.

Usage: smt_shim.py FILE.smt2   (prints sat + model, unsat, or unknown)
"""

import sys


def tokenize(text):
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in "()":
            out.append(c)
            i += 1
        elif c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "|":
            j = text.index("|", i + 1)
            out.append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse_all(tokens):
    exprs, pos = [], 0

    def one(pos):
        if tokens[pos] == "(":
            items, pos = [], pos + 1
            while tokens[pos] != ")":
                item, pos = one(pos)
                items.append(item)
            return items, pos + 1
        return tokens[pos], pos + 1

    while pos < len(tokens):
        e, pos = one(pos)
        exprs.append(e)
    return exprs


class Problem:
    def __init__(self):
        self.names = []
        self.index = {}
        self.lo = []
        self.hi = []  # exclusive
        self.constraints = []

    def declare(self, name):
        if name in self.index:
            raise ValueError(f"redeclared {name}")
        self.index[name] = len(self.names)
        self.names.append(name)
        self.lo.append(None)
        self.hi.append(None)

    def bound(self, name, lo=None, hi=None):
        i = self.index[name]
        if lo is not None:
            self.lo[i] = lo if self.lo[i] is None else max(self.lo[i], lo)
        if hi is not None:
            self.hi[i] = hi if self.hi[i] is None else min(self.hi[i], hi)


def is_int(tok):
    return isinstance(tok, str) and (tok.lstrip("-").isdigit())


def as_range(e):
    """Recognize (and (<= LIT x) (< x LIT)) and friends; return
    (name, lo, hi_exclusive) or None."""
    if not (isinstance(e, list) and len(e) == 3 and e[0] == "and"):
        return None
    lo = hi = name = None
    for part in e[1:3]:
        if not (isinstance(part, list) and len(part) == 3):
            return None
        op, a, b = part
        if op == "<=" and is_int(a) and isinstance(b, str) and not is_int(b):
            name, lo = b, int(a)
        elif (op == "<" and isinstance(a, str) and not is_int(a)
              and is_int(b)):
            if name is not None and a != name:
                return None
            name, hi = a, int(b)
        elif (op == "<=" and isinstance(a, str) and not is_int(a)
              and is_int(b)):
            if name is not None and a != name:
                return None
            name, hi = a, int(b) + 1
        else:
            return None
    if name is None or lo is None or hi is None:
        return None
    return name, lo, hi


def compile_expr(e, index):
    """Expression tree -> (code tuple, set of var ids). Codes are
    ('lit', v), ('var', i), (op, children...)."""
    if isinstance(e, str):
        if is_int(e):
            return ("lit", int(e)), set()
        if e == "true":
            return ("lit", True), set()
        if e == "false":
            return ("lit", False), set()
        i = index.get(e)
        if i is None:
            raise ValueError(f"unknown symbol {e}")
        return ("var", i), {i}
    op = e[0]
    if op == "-" and len(e) == 2:
        child, vs = compile_expr(e[1], index)
        return ("neg", child), vs
    kids, vs = [], set()
    for sub in e[1:]:
        k, v = compile_expr(sub, index)
        kids.append(k)
        vs |= v
    if op not in ("=", "<=", "<", ">=", ">", "and", "or", "not", "=>",
                  "ite", "+", "-", "*", "distinct"):
        raise ValueError(f"unsupported operator {op}")
    return (op, *kids), vs


def ev(code, env):
    """Three-valued eval: None = undetermined under partial env."""
    op = code[0]
    if op == "lit":
        return code[1]
    if op == "var":
        return env[code[1]]
    if op == "and":
        pending = False
        for k in code[1:]:
            v = ev(k, env)
            if v is False:
                return False
            if v is None:
                pending = True
        return None if pending else True
    if op == "or":
        pending = False
        for k in code[1:]:
            v = ev(k, env)
            if v is True:
                return True
            if v is None:
                pending = True
        return None if pending else False
    if op == "not":
        v = ev(code[1], env)
        return None if v is None else (not v)
    if op == "=>":
        a = ev(code[1], env)
        if a is False:
            return True
        b = ev(code[2], env)
        if b is True:
            return True
        if a is None or b is None:
            return None
        return b
    if op == "ite":
        c = ev(code[1], env)
        if c is None:
            return None
        return ev(code[2] if c else code[3], env)
    args = [ev(k, env) for k in code[1:]]
    if any(a is None for a in args):
        return None
    if op == "=":
        return all(a == args[0] for a in args[1:])
    if op == "distinct":
        return len(set(args)) == len(args)
    if op == "<=":
        return args[0] <= args[1]
    if op == "<":
        return args[0] < args[1]
    if op == ">=":
        return args[0] >= args[1]
    if op == ">":
        return args[0] > args[1]
    if op == "+":
        return sum(args)
    if op == "neg":
        return -args[0]
    if op == "-":
        r = args[0]
        for a in args[1:]:
            r -= a
        return r
    if op == "*":
        r = 1
        for a in args:
            r *= a
        return r
    raise AssertionError(op)


def solve(prob):
    n = len(prob.names)
    for i in range(n):
        if prob.lo[i] is None or prob.hi[i] is None:
            sys.stdout.write("unknown\n; unbounded constant "
                             f"{prob.names[i]}\n")
            return None
    domains = [list(range(prob.lo[i], prob.hi[i])) for i in range(n)]
    if any(not d for d in domains):
        return False
    env = [d[0] if len(d) == 1 else None for d in domains]
    ncons = len(prob.constraints)
    watchers = [[] for _ in range(n)]
    degree = [0] * n
    for ci, (code, vs) in enumerate(prob.constraints):
        for v in vs:
            watchers[v].append(ci)
            degree[v] += 1
    # Free-variable counters and a satisfied flag per constraint: a
    # constraint is re-evaluated only while undetermined, and value
    # pruning runs only once a single free variable remains.
    nfree = [sum(1 for u in vs if env[u] is None)
             for code, vs in prob.constraints]
    satisfied = [False] * ncons
    # Trail entries: ("env", u), ("dom", u, old), ("sat", ci), ("free", ci).
    trail = []

    def assign(u, val):
        env[u] = val
        trail.append(("env", u))
        for ci in watchers[u]:
            nfree[ci] -= 1
            trail.append(("free", ci))

    def undo(mark):
        while len(trail) > mark:
            entry = trail.pop()
            kind = entry[0]
            if kind == "env":
                env[entry[1]] = None
            elif kind == "dom":
                domains[entry[1]] = entry[2]
            elif kind == "sat":
                satisfied[entry[1]] = False
            else:
                nfree[entry[1]] += 1

    def propagate(queue):
        while queue:
            var = queue.pop()
            for ci in watchers[var]:
                if satisfied[ci]:
                    continue
                code, vs = prob.constraints[ci]
                v = ev(code, env)
                if v is False:
                    return False
                if v is True:
                    satisfied[ci] = True
                    trail.append(("sat", ci))
                    continue
                if nfree[ci] != 1:
                    continue
                u = next(w for w in vs if env[w] is None)
                keep = []
                for val in domains[u]:
                    env[u] = val
                    if ev(code, env) is not False:
                        keep.append(val)
                env[u] = None
                if not keep:
                    return False
                if len(keep) < len(domains[u]):
                    trail.append(("dom", u, domains[u]))
                    domains[u] = keep
                if len(keep) == 1:
                    assign(u, keep[0])
                    queue.append(u)
        return True

    if not propagate(list(range(n))):
        return False

    def search():
        # dom/deg ordering: high-degree variables (shared across many
        # constraints) with small live domains are decided first.
        best, best_key = -1, None
        for i in range(n):
            if env[i] is None:
                key = len(domains[i]) / (degree[i] or 1)
                if best_key is None or key < best_key:
                    best, best_key = i, key
        if best < 0:
            return True
        for val in list(domains[best]):
            mark = len(trail)
            assign(best, val)
            if propagate([best]) and search():
                return True
            undo(mark)
        return False

    return search() and env


def main():
    if len(sys.argv) != 2:
        sys.stderr.write(__doc__)
        return 2
    with open(sys.argv[1]) as fh:
        exprs = parse_all(tokenize(fh.read()))
    prob = Problem()
    get_value = []
    result = None
    for e in exprs:
        if not isinstance(e, list) or not e:
            continue
        head = e[0]
        if head in ("set-logic", "set-option", "set-info", "exit"):
            continue
        if head == "declare-const":
            if e[2] != "Int":
                sys.stdout.write("unknown\n; only Int sort supported\n")
                return 0
            prob.declare(e[1])
        elif head == "declare-fun":
            if e[2] != [] or e[3] != "Int":
                sys.stdout.write("unknown\n; only Int constants\n")
                return 0
            prob.declare(e[1])
        elif head == "assert":
            rng = as_range(e[1])
            if rng is not None:
                prob.bound(rng[0], rng[1], rng[2])
            else:
                prob.constraints.append(compile_expr(e[1], prob.index))
        elif head == "check-sat":
            result = solve(prob)
            if result is None:
                return 0
            sys.stdout.write("sat\n" if result else "unsat\n")
        elif head == "get-value":
            if not result:
                continue
            parts = []
            for name in e[1]:
                val = result[prob.index[name]]
                parts.append(f"({name} {val})" if val >= 0
                             else f"({name} (- {-val}))")
            sys.stdout.write("(" + "\n ".join(parts) + ")\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
