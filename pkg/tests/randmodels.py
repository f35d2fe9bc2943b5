"""Random small models for property tests.

Every generated source compiles through the full pipeline, always
contains at least one gate, and a known ground-truth parameter
assignment provides examples that are consistent by construction
(optionally corrupted to exercise the unsatisfiable side).
"""

from __future__ import annotations

import numpy as np

from fgsynth.execute.machine import ParamAssignment, execute
from fgsynth.frontend.syntax import ModelSource, VarKind
from fgsynth.ir.instance import Example, IOExamples
from fgsynth.pipeline import compile_source


def _fn_text(name, arg_doms, out_dom, coeffs, bias):
    args = "ab"[:len(arg_doms)]
    doms = ", ".join(str(d) for d in arg_doms)
    terms = " + ".join(f"{c} * {a}" for c, a in zip(coeffs, args))
    return (f"def {name}({', '.join(args)}) -> {out_dom} over ({doms}):\n"
            f"    return ({terms} + {bias}) % {out_dom}\n")


class _Builder:
    def __init__(self, rng, max_domain):
        self.rng = rng
        self.max_domain = max_domain
        self.fns: list[str] = []
        self.readable: list[tuple[str, int]] = []  # (ref text, domain)

    def dom(self):
        return int(self.rng.integers(2, self.max_domain + 1))

    def fn_call(self, out_dom, n_args):
        picks = [self.readable[int(self.rng.integers(len(self.readable)))]
                 for _ in range(n_args)]
        name = f"f{len(self.fns)}"
        coeffs = [int(self.rng.integers(1, 4)) for _ in picks]
        bias = int(self.rng.integers(0, out_dom))
        self.fns.append(_fn_text(name, [d for _, d in picks], out_dom,
                                 coeffs, bias))
        return f"{name}({', '.join(r for r, _ in picks)})"

    def write_of(self, dst, dst_dom, indent):
        """One statement writing dst: literal, same-domain copy, or fn."""
        pad = "    " * indent
        same = [r for r, d in self.readable if d == dst_dom]
        kind = self.rng.integers(0, 3)
        if kind == 0:
            return f"{pad}{dst}.set_to({int(self.rng.integers(0, dst_dom))})"
        if kind == 1 and same:
            pick = same[int(self.rng.integers(len(same)))]
            return f"{pad}{dst}.set_to({pick})"
        call = self.fn_call(dst_dom, int(self.rng.integers(1, 3)))
        return f"{pad}{dst}.set_to({call})"


def random_model(rng: np.random.Generator, n_steps: int = 2,
                 n_params: int = 2, max_domain: int = 4,
                 name: str = "random") -> ModelSource:
    b = _Builder(rng, max_domain)
    decls = []
    for i in range(n_params):
        d = b.dom()
        decls.append(f"p{i} = Param({d})")
        b.readable.append((f"p{i}", d))
    d_in = b.dom()
    decls.append(f"inp = Input({d_in})")
    b.readable.append(("inp", d_in))
    cell_doms = [b.dom() for _ in range(n_steps)]
    decls.extend(f"c{t} = Var({cell_doms[t]})" for t in range(n_steps))
    decls.append(f"out = Output({cell_doms[-1]})")

    gate_step = int(rng.integers(0, n_steps))  # at least one gate
    body = []
    for t in range(n_steps):
        dst, dd = f"c{t}", cell_doms[t]
        if t == gate_step or rng.integers(0, 3) == 0:
            cond, cd = b.readable[int(rng.integers(len(b.readable)))]
            body.append(f"with {cond} as g{t}:")
            for v in range(cd):
                body.append(f"    if g{t} == {v}:")
                body.append(b.write_of(dst, dd, 2))
        else:
            body.append(b.write_of(dst, dd, 0))
        b.readable.append((dst, dd))
    body.append(f"out.set_to(c{n_steps - 1})")

    text = "\n".join(decls) + "\n\n" + "".join(b.fns) + "\n" \
        + "\n".join(body) + "\n"
    return ModelSource(name, text, {})


def random_instance(rng: np.random.Generator, n_examples: int = 3,
                    corrupt: bool = False, **kwargs):
    """(graph, io, truth): `truth` solves `io` unless corrupt drew a
    flipped output value (which may or may not stay satisfiable)."""
    src = random_model(rng, **kwargs)
    g = compile_source(src)
    cells = g.param_cells()
    truth = ParamAssignment({c: int(rng.integers(0, g.vars[c].domain))
                             for c in cells})
    d_in = next(d.domain for d in g.decls if d.kind == VarKind.INPUT)
    examples = []
    for _ in range(n_examples):
        inputs = {"inp": int(rng.integers(0, d_in))}
        tr = execute(g, truth, inputs)
        examples.append(Example(inputs, tr.outputs(g)))
    if corrupt:
        k = int(rng.integers(0, len(examples)))
        ex = examples[k]
        dom = next(d.domain for d in g.decls if d.kind == VarKind.OUTPUT)
        bad = (ex.outputs["out"] + 1 +
               int(rng.integers(0, dom - 1))) % dom
        examples[k] = Example(ex.inputs, {"out": bad})
    return g, IOExamples(tuple(examples)), truth
