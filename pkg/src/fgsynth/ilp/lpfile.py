"""CPLEX-style LP file writing and a reference parser.

The writer is deterministic: variables in emission order, one
constraint per line, coefficients rendered as `+ name` / `- name` /
`+ 2 name`.  The parser accepts exactly the dialect the writer emits
(plus flexible whitespace) and is used to round-trip models in tests
and by the bundled MILP shim.
"""

from __future__ import annotations

from .model import IlpModel, LpRow, LpVar


def _coef(c: float) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if mag == 1.0:
        return sign
    if mag == int(mag):
        return f"{sign} {int(mag)}"
    return f"{sign} {mag!r}"


def _num(x: float) -> str:
    return str(int(x)) if x == int(x) else repr(x)


def write_lp_file(m: IlpModel) -> str:
    out: list[str] = ["\\ " + m.name, "Minimize", f" obj: {_num(m.objective)}"
                      if m.objective else " obj:", "Subject To"]
    for row in m.rows:
        terms = " ".join(f"{_coef(c)} {n}" for c, n in row.terms)
        out.append(f" {row.name}: {terms} {row.sense} {_num(row.rhs)}")
    out.append("Bounds")
    for v in m.variables:
        if v.lb == v.ub:
            out.append(f" {v.name} = {_num(v.lb)}")
        else:
            out.append(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}")
    integrals = [v.name for v in m.variables if v.integral]
    if integrals:
        out.append("Generals")
        for name in integrals:
            out.append(f" {name}")
    out.append("End")
    return "\n".join(out) + "\n"


class LpParseError(ValueError):
    pass


_SECTIONS = {"minimize", "subject", "bounds", "generals", "end"}


def parse_lp_file(text: str) -> IlpModel:
    """Parse the writer's dialect back into a model (symbol tables are
    not recoverable from the text and stay empty)."""
    name = ""
    rows: list[LpRow] = []
    bounds: dict[str, tuple[float, float]] = {}
    order: list[str] = []
    generals: set[str] = set()
    objective = 0.0
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            if not name:
                name = line[1:].strip()
            continue
        word = line.split()[0].lower()
        if word in _SECTIONS:
            section = "subject to" if word == "subject" else word
            if word == "end":
                break
            continue
        if section == "minimize":
            body = line.split(":", 1)[1].strip() if ":" in line else line
            if body:
                objective = float(body)
        elif section == "subject to":
            rows.append(_parse_row(line))
        elif section == "bounds":
            nm, lo, hi = _parse_bound(line)
            if nm not in bounds:
                order.append(nm)
            bounds[nm] = (lo, hi)
        elif section == "generals":
            generals.add(line)
        else:
            raise LpParseError(f"content outside any section: {line!r}")
    variables = [LpVar(nm, bounds[nm][0], bounds[nm][1], nm in generals)
                 for nm in order]
    return IlpModel(name, variables, rows, objective,
                    integral=bool(generals))


def _parse_row(line: str) -> LpRow:
    if ":" not in line:
        raise LpParseError(f"constraint without name: {line!r}")
    rname, body = line.split(":", 1)
    tokens = body.split()
    sense_at = next((i for i, t in enumerate(tokens) if t in ("=", "<=", ">=")),
                    None)
    if sense_at is None or sense_at != len(tokens) - 2:
        raise LpParseError(f"missing sense in row: {line!r}")
    sense, rhs = tokens[sense_at], float(tokens[-1])
    terms: list[tuple[float, str]] = []
    i = 0
    while i < sense_at:
        tok = tokens[i]
        if tok not in ("+", "-"):
            raise LpParseError(f"expected sign at {tok!r} in {line!r}")
        sign = 1.0 if tok == "+" else -1.0
        i += 1
        mag = 1.0
        try:
            mag = float(tokens[i])
            i += 1
        except ValueError:
            pass
        terms.append((sign * mag, tokens[i]))
        i += 1
    if sense == ">=":
        terms = [(-c, n) for c, n in terms]
        sense, rhs = "<=", -rhs
    return LpRow(rname.strip(), tuple(terms), sense, rhs)


def _parse_bound(line: str) -> tuple[str, float, float]:
    tokens = line.split()
    if len(tokens) == 3 and tokens[1] == "=":
        v = float(tokens[2])
        return tokens[0], v, v
    if (len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<="):
        return tokens[2], float(tokens[0]), float(tokens[4])
    raise LpParseError(f"unrecognized bound: {line!r}")
