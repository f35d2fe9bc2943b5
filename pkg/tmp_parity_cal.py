import json
import sys
import time

sys.path.insert(0, "src")

from fgsynth.frontend.syntax import ModelSource
from fgsynth.ir.instance import IOExamples, bind_examples
from fgsynth.pipeline import compile_source
from fgsynth.fmgd.relax import relax
from fgsynth.fmgd.train import HyperParams, train

PARITY = """\
K = 4

def xor(a, b) -> 2 over (2, 2):
    return a != b

bits = Param(2)[K]
obs = Output(2)[K - 1]

for k in range(0, K - 1):
    obs[k].set_to(xor(bits[k], bits[k + 1]))
"""


def build(k):
    g = compile_source(ModelSource("parity_chain", PARITY, {"K": k}))
    io = IOExamples.from_json(json.dumps(
        {"examples": [{"inputs": {}, "outputs": {"obs": [0] * (k - 1)}}]}))
    return relax(bind_examples(g, io))


for lr in (0.05, 0.1, 0.5, 1.0, 2.0):
    row = []
    t0 = time.monotonic()
    for k in (4, 8, 16, 32):
        dp = build(k)
        hp = HyperParams(learning_rate=lr, epochs=1000, restarts=20, seed=0)
        res = train(dp, hp)
        row.append(res.success_count * 5)
    dt = time.monotonic() - t0
    print(f"lr={lr:<5} K=4:{row[0]}% K=8:{row[1]}% K=16:{row[2]}%"
          f" K=32:{row[3]}%  ({dt:.1f}s)")
