"""Scratch: timing previews for acceptance criteria 7/8/9."""
import itertools
import time

from fgsynth.execute.enumerate import EnumBudget, enumerate_assignments
from fgsynth.execute.machine import ParamAssignment, check_consistency
from fgsynth.fmgd.relax import relax
from fgsynth.fmgd.train import HyperParams, train
from fgsynth.ir.instance import bind_examples
from fgsynth.smt.solve import solve as smt_solve
from fgsynth.smt.emit import emit_smtlib
from fgsynth.solvers import SolverConfig
from fgsynth.zoo import compile_task, generate_examples, get_task

# --- criterion 7: automaton enumeration, uniqueness among 16 ---
task = get_task("automaton")
g = compile_task(task)
exs = generate_examples(task, seed=0)
ig = bind_examples(g, exs)
t0 = time.monotonic()
res = enumerate_assignments(ig)
dt = time.monotonic() - t0
print(f"automaton enum: status={res.status.name} dt={dt:.4f}s "
      f"tested={res.stats.get('tested')}")
assert res.status.name == "SUCCESS" and dt < 1.0
cells = g.param_cells()
consistent = []
for cand in itertools.product(range(2), repeat=len(cells)):
    asg = ParamAssignment(dict(zip(cells, cand)))
    if check_consistency(g, asg, exs):
        consistent.append(cand)
print(f"automaton consistent tables: {consistent}")
assert len(consistent) == 1, consistent

# --- enum oracle on invert (D=5832) ---
task = get_task("invert")
g = compile_task(task)
exs = generate_examples(task, seed=0)
ig = bind_examples(g, exs)
t0 = time.monotonic()
res = enumerate_assignments(ig)
dt = time.monotonic() - t0
print(f"invert enum: status={res.status.name} dt={dt:.2f}s "
      f"tested={res.stats.get('tested')}")
assert res.status.name == "SUCCESS"
print("invert enum solution:", res.assignment.to_named(g))

# --- criterion 8: invert via SMT shim ---
cfg = SolverConfig.from_command("python3 tools/smt_shim.py", timeout_s=120.0)
t0 = time.monotonic()
script = emit_smtlib(ig)
t_emit = time.monotonic() - t0
t0 = time.monotonic()
res = smt_solve(ig, cfg, script)
dt = time.monotonic() - t0
print(f"invert smt: status={res.status.name} emit={t_emit:.2f}s "
      f"solve={dt:.2f}s script={len(script.text)} chars")
assert res.status.name == "SUCCESS", res.message
assert dt + t_emit <= 60.0

# --- criterion 9: FMGD 1000 epochs on invert ---
dp = relax(ig)
hp = HyperParams(epochs=1000, restarts=1, seed=3)
t0 = time.monotonic()
out = train(dp, hp)
dt = time.monotonic() - t0
per = dt / out.restarts[0].epochs_run if out.restarts[0].epochs_run else 0
print(f"invert fmgd: {out.restarts[0].epochs_run} epochs in {dt:.1f}s "
      f"({per*1000:.1f} ms/epoch) success={out.restarts[0].success}")
assert dt <= 600.0
print("TIMING PREVIEWS OK")
