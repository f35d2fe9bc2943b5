import json
import math
import sys
import numpy as np

sys.path.insert(0, "src")

from fgsynth.frontend.parser import parse
from fgsynth.frontend.resolve import resolve_constants
from fgsynth.frontend.check import check
from fgsynth.frontend.syntax import ModelSource
from fgsynth.ir.lower import lower
from fgsynth.ir.validate import validate_ssa
from fgsynth.ir.instance import IOExamples, bind_examples
from fgsynth.execute.machine import ParamAssignment, execute
from fgsynth.fmgd.relax import relax
from fgsynth.fmgd.tape import Logits
from fgsynth.fmgd.train import HyperParams, train

AUTOMATON = """\
T = 5
table = Param(2)[2, 2]
tape = Var(2)[T]
initial = Input(2)[2]
final = Output(2)

tape[0].set_to(initial[0])
tape[1].set_to(initial[1])

for t in range(2, T):
    with tape[t - 2] as a:
        with tape[t - 1] as b:
            tape[t].set_to(table[a, b])

final.set_to(tape[T - 1])
"""

src = ModelSource("automaton", AUTOMATON, {})
ast = resolve_constants(parse(src))
tm = check(ast)
g = lower(tm)
diags = validate_ssa(g)
assert not diags, diags

# OR-generated IO: table[a][b] = a|b. Inputs all 4 pairs, observe final.
OR = [[0, 1], [1, 1]]
examples = []
for i0 in (0, 1):
    for i1 in (0, 1):
        tape = [i0, i1]
        for t in range(2, 5):
            tape.append(OR[tape[t - 2]][tape[t - 1]])
        examples.append({"inputs": {"initial": [i0, i1]},
                         "outputs": {"final": tape[4]}})
io = IOExamples.from_json(json.dumps({"examples": examples}))
ig = bind_examples(g, io)
dp = relax(ig)
print("slots:", dp.n_slots, "params:", len(dp.param_cells),
      "ops:", len(dp.ops), "obs:", len(dp.observations))

rng = np.random.default_rng(0)

# 1. forward normalization on random logits
for trial in range(200):
    lg = Logits.normal(dp.param_domains, rng, 2.0)
    _, mu = dp.forward(lg)
    for s in range(dp.n_slots):
        v = mu[s]
        assert v is not None, f"slot {s} not populated"
        assert abs(float(v.sum()) - 1.0) < 1e-6, (s, v.sum())
        assert (v >= -1e-12).all()
print("normalization ok (200 trials)")

# 2. point-mass exactness vs executor
pa_or = ParamAssignment({g.cell_id("table", (a, b)): OR[a][b]
                         for a in (0, 1) for b in (0, 1)})
lg = Logits.point_mass(dp.param_domains,
                       [pa_or.values[c] for c in dp.param_cells])
loss0, mu = dp.forward(lg)
for e, ex in enumerate(io.examples):
    tr = execute(g, pa_or, ex.inputs)
    for cell, val in enumerate(tr.values):
        if val is None:
            continue
        icell = ig.instance_cell(e, cell)
        s = dp.slot_of[e].get(cell)
        if s is None:
            continue
        v = mu[s]
        exact = np.zeros_like(v)
        exact[val] = 1.0
        assert np.array_equal(v, exact), (e, cell, val, v)
assert loss0 == 0.0, loss0
print("point-mass exactness ok, loss", loss0)

# 3. gradcheck vs central differences
def num_grad(lg, eps=1e-6):
    out = []
    for vec in lg.vectors:
        gnum = np.zeros_like(vec)
        flat = vec.ravel()
        gflat = gnum.ravel()
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + eps
            lp, _ = dp.forward(lg, entropy_weight=0.05)
            flat[i] = old - eps
            lm, _ = dp.forward(lg, entropy_weight=0.05)
            flat[i] = old
            gflat[i] = (lp - lm) / (2 * eps)
        out.append(gnum)
    return out

for trial in range(5):
    lg = Logits.normal(dp.param_domains, rng, 1.0)
    loss, grads = dp.backward(lg, entropy_weight=0.05)
    ng = num_grad(lg)
    for ga, gn in zip(grads, ng):
        denom = max(np.abs(ga).max(), np.abs(gn).max(), 1e-8)
        rel = np.abs(ga - gn).max() / denom
        assert rel < 1e-4, rel
print("gradcheck ok (5 trials)")

# 4. short training run
hp = HyperParams(learning_rate=0.5, optimizer="adaptive", init_scale=1.0,
                 noise=0.1, entropy_weight=0.01, entropy_half_life=50,
                 epochs=300, restarts=5, seed=7)
res = train(dp, hp)
print("train:", res.success_count, "/", len(res.restarts),
      f"in {res.wall_time_s:.2f}s; mean loss {res.mean_final_loss():.4f}")
best = res.best_assignment
assert best is not None
print("learned table:",
      [[best.values[g.cell_id('table', (a, b))] for b in (0, 1)]
       for a in (0, 1)])
