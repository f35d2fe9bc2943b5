"""Compile every zoo model/override combo; print census + D + budget check."""
import pathlib
import sys

sys.path.insert(0, "src")
from fgsynth.frontend.syntax import ModelSource
from fgsynth.pipeline import compile_source

MODELS = pathlib.Path("src/fgsynth/zoo/models")

CASES = [
    ("automaton", "automaton.tpt", {}, 4),
    ("parity-chain K=4", "parity_chain.tpt", {}, 1),
    ("parity-chain K=8", "parity_chain.tpt", {"K": 8}, 1),
    ("invert", "turing.tpt", {}, 5),
    ("prepend-zero", "turing.tpt", {"H": 2, "T": 6}, 5),
    ("binary-decrement", "turing.tpt", {"H": 2, "T": 9}, 5),
    ("controlled-shift", "circuit.tpt", {}, 8),
    ("full-adder", "circuit.tpt", {"T": 5}, 8),
    ("2-bit-adder", "circuit.tpt", {"W": 5, "T": 8, "NI": 4, "NO": 3}, 16),
    ("bb-access", "basic_block.tpt", {}, 5),
    ("bb-decrement", "basic_block.tpt", {"B": 5, "M": 4, "T": 18}, 5),
    ("bb-list-k", "basic_block.tpt", {"B": 8, "M": 6, "T": 11}, 5),
    ("asm-access", "assembly.tpt", {}, 5),
    ("asm-decrement", "assembly.tpt", {"I": 7, "M": 4, "T": 27}, 5),
    ("asm-list-k", "assembly.tpt", {"I": 10, "M": 6, "T": 16}, 5),
]

for label, fname, ov, n in CASES:
    text = (MODELS / fname).read_text()
    try:
        g = compile_source(ModelSource(label, text, ov))
    except Exception as exc:
        print(f"{label:24s} FAIL: {exc}")
        continue
    npar = len(g.param_cells())
    ncells = len(g.vars)
    inst_factors = n * len(g.factors)
    inst_cells = npar + n * (ncells - npar)
    ok = inst_factors <= 1_000_000 and inst_cells <= 200_000
    print(f"{label:24s} cells={ncells:6d} factors={len(g.factors):7d} "
          f"log10D={g.log10_param_space():6.2f} inst_cells={inst_cells:7d} "
          f"inst_factors={inst_factors:8d} {'OK' if ok else 'OVER BUDGET'}")
