"""Parser, constant resolution, and static checking."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import AUTOMATON, compile_text
from fgsynth.diagnostics import (
    CompileError,
    E_DOMAIN,
    E_DOUBLE_WRITE,
    E_FN_RANGE,
    E_INDEX,
    E_MISSING_WRITE,
    E_OVERRIDE,
    E_SET_TO_FORM,
    E_SYNTAX,
    E_UNKNOWN_NAME,
    E_WRITE_INPUT,
    E_WRITE_PARAM,
    W_EMPTY_RANGE,
)
from fgsynth.frontend.parser import parse
from fgsynth.frontend.syntax import ModelSource, pretty
from fgsynth.pipeline import check_source, compile_source
from fgsynth.zoo import get_task, model_source
from randmodels import random_model

TINY = """\
p = Param(3)
x = Var(3)
out = Output(3)
x.set_to(p)
out.set_to(x)
"""


def codes_of(text, **consts):
    with pytest.raises(CompileError) as exc:
        compile_text(text, **consts)
    return exc.value.codes


def test_tiny_compiles():
    g = compile_text(TINY)
    assert g.stats()["vars"] == 3


def test_const_override_rescales():
    g = compile_text(AUTOMATON, T=7)
    # table 4 + tape 7 + initial 2 + final 1
    assert len(g.vars) == 14


def test_override_must_name_a_constant():
    assert E_OVERRIDE in codes_of(TINY, NOPE=3)


def test_override_must_be_nonnegative():
    assert E_OVERRIDE in codes_of(AUTOMATON, T=-1)


def test_set_to_rejects_inline_arithmetic():
    text = """\
x = Var(4)
y = Var(4)
out = Output(4)
x.set_to(1)
y.set_to(x + 1)
out.set_to(y)
"""
    assert E_SET_TO_FORM in codes_of(text)


def test_double_write_reported():
    text = TINY + "x.set_to(0)\n"
    codes = codes_of(text)
    assert E_DOUBLE_WRITE in codes


def test_missing_write_names_the_branch():
    text = """\
c = Input(2)
x = Var(2)
out = Output(2)
with c as v:
    if v == 0:
        x.set_to(1)
out.set_to(x)
"""
    with pytest.raises(CompileError) as exc:
        compile_text(text)
    assert E_MISSING_WRITE in exc.value.codes
    assert "branch 1" in str(exc.value)


def test_read_never_written():
    text = """\
x = Var(2)
out = Output(2)
out.set_to(x)
"""
    assert E_MISSING_WRITE in codes_of(text)


def test_unknown_name():
    assert E_UNKNOWN_NAME in codes_of("out = Output(2)\nout.set_to(zzz)\n")


def test_copy_domain_mismatch():
    text = """\
x = Var(3)
out = Output(2)
x.set_to(1)
out.set_to(x)
"""
    assert E_DOMAIN in codes_of(text)


def test_index_out_of_bounds():
    text = """\
x = Var(2)[3]
out = Output(2)
x[0].set_to(0)
x[1].set_to(0)
x[2].set_to(0)
out.set_to(x[5])
"""
    assert E_INDEX in codes_of(text)


def test_inputs_and_params_are_read_only():
    base = "i = Input(2)\np = Param(2)\nout = Output(2)\nout.set_to(0)\n"
    assert E_WRITE_INPUT in codes_of(base + "i.set_to(1)\n")
    assert E_WRITE_PARAM in codes_of(base + "p.set_to(1)\n")


def test_fn_result_must_stay_in_range():
    text = """\
x = Var(2)
out = Output(2)

def big(a) -> 2 over (2):
    return a + 5

x.set_to(0)
out.set_to(big(x))
"""
    assert E_FN_RANGE in codes_of(text)


def test_syntax_error_has_location():
    with pytest.raises(CompileError) as exc:
        compile_text("x = Var(2\n", name="broken.tpt")
    assert E_SYNTAX in exc.value.codes
    assert "broken.tpt:1" in str(exc.value)


def test_empty_range_warns_and_drops_body():
    text = """\
x = Var(2)
out = Output(2)
x.set_to(1)
for i in range(3, 3):
    x.set_to(0)
out.set_to(x)
"""
    warnings = []
    g = compile_source(ModelSource("m", text, {}), warnings_out=warnings)
    assert W_EMPTY_RANGE in [w.code for w in warnings]
    assert g.stats()["factors"] == 2  # the dropped body left no write


def test_compile_time_if_else_folds():
    text = """\
K = 3
x = Var(2)[K]
out = Output(2)
for i in range(0, K):
    if i == 0:
        x[i].set_to(1)
    else:
        x[i].set_to(0)
out.set_to(x[K - 1])
"""
    g = compile_text(text)
    # Folding leaves plain const factors, no gates.
    assert g.stats()["gates"] == 0


def test_check_is_deterministic():
    bad = TINY + "x.set_to(0)\nout.set_to(zzz)\n"
    runs = []
    for _ in range(3):
        with pytest.raises(CompileError) as exc:
            compile_text(bad)
        runs.append([(d.code, d.message) for d in exc.value.diagnostics])
    assert runs[0] == runs[1] == runs[2]


@pytest.mark.parametrize("task", ["automaton", "parity-chain", "invert",
                                  "controlled-shift", "bb-access",
                                  "asm-access"])
def test_pretty_parse_round_trip(task):
    src = model_source(get_task(task))
    a1 = parse(src)
    a2 = parse(ModelSource(src.name, pretty(a1), {}))
    assert a1 == a2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_models_compile_and_round_trip(seed):
    rng = np.random.default_rng(seed)
    src = random_model(rng, n_steps=int(rng.integers(1, 4)),
                       n_params=int(rng.integers(1, 4)))
    g = compile_source(src)
    assert g.stats()["gates"] >= 1
    a1 = parse(src)
    assert parse(ModelSource(src.name, pretty(a1), {})) == a1


def test_typed_model_always_lowers():
    # check_source success implies lowering works without diagnostics.
    from fgsynth.ir.lower import lower
    from fgsynth.ir.validate import validate_ssa
    for seed in range(25):
        src = random_model(np.random.default_rng([7, seed]))
        tm = check_source(src)
        g = lower(tm)
        assert validate_ssa(g) == []
