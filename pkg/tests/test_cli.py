"""End-to-end CLI behavior through main(argv)."""

import json

import pytest

from conftest import AUTOMATON, MILP_SHIM, SMT_SHIM
from fgsynth.cli import main
from fgsynth.ir.instance import IOExamples
from fgsynth.records import load_records, stable_view


@pytest.fixture(autouse=True)
def no_solver_env(monkeypatch):
    monkeypatch.delenv("FGSYNTH_SMT_SOLVER", raising=False)
    monkeypatch.delenv("FGSYNTH_ILP_SOLVER", raising=False)


@pytest.fixture()
def model_file(tmp_path):
    p = tmp_path / "automaton.tpt"
    p.write_text(AUTOMATON)
    return str(p)


@pytest.fixture()
def io_file(tmp_path):
    p = tmp_path / "io.json"
    examples = [
        {"inputs": {"initial": [a, b]},
         "outputs": {"final": int(a > 0 or b > 0)}}
        for a, b in ((0, 0), (0, 1), (1, 0), (1, 1))
    ]
    p.write_text(json.dumps({"examples": examples}))
    return str(p)


def test_tasks_listing(capsys):
    assert main(["tasks"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("task")
    assert len(lines) == 15  # header + 14 tasks
    assert any(ln.startswith("asm-list-k") and "stretch" in ln
               for ln in lines)


def test_check_task(capsys):
    assert main(["check", "--task", "automaton"]) == 0
    out = capsys.readouterr().out
    assert "automaton:" in out and "log10(D) = 1.20" in out


def test_check_model_file(model_file, capsys):
    assert main(["check", "--model", model_file]) == 0
    assert "automaton:" in capsys.readouterr().out


def test_check_needs_exactly_one_source(model_file, capsys):
    assert main(["check"]) == 2
    assert main(["check", "--model", model_file,
                 "--task", "automaton"]) == 2
    assert "exactly one" in capsys.readouterr().err


def test_check_bad_model(tmp_path, capsys):
    bad = tmp_path / "broken.tpt"
    bad.write_text("x = Var(\n")
    assert main(["check", "--model", str(bad)]) == 2
    assert "broken.tpt:1" in capsys.readouterr().err


def test_unknown_task(capsys):
    assert main(["check", "--task", "nope"]) == 2
    assert "unknown task" in capsys.readouterr().err


def test_gen_examples_stdout_and_file(tmp_path, capsys):
    assert main(["gen-examples", "--task", "automaton"]) == 0
    io = IOExamples.from_json(capsys.readouterr().out)
    assert len(io.examples) == 4
    out = tmp_path / "ex.json"
    assert main(["gen-examples", "--task", "invert", "--seed", "3",
                 "--n", "2", "--out", str(out)]) == 0
    assert len(IOExamples.from_json(out.read_text()).examples) == 2


def test_export_all_formats(model_file, io_file, tmp_path, capsys):
    for fmt, needle in (("smt2", "(set-logic"), ("lp", "Generals"),
                        ("lp-relaxed", "Bounds"), ("ir", "graph ")):
        out = tmp_path / f"x_{fmt}"
        code = main(["export", "--model", model_file, "--io", io_file,
                     "--format", fmt, "--out", str(out)])
        assert code == 0
        assert needle in out.read_text()
    relaxed = (tmp_path / "x_lp-relaxed").read_text()
    assert "Generals" not in relaxed


def test_export_ir_needs_no_io(model_file, tmp_path):
    out = tmp_path / "m.ir"
    assert main(["export", "--model", model_file, "--format", "ir",
                 "--out", str(out)]) == 0
    assert main(["export", "--model", model_file, "--format", "smt2",
                 "--out", str(tmp_path / "m.smt2")]) == 2


def test_synth_enum_task(tmp_path, capsys):
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "enum", "--task", "automaton",
                 "--records", str(rec)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "table = [[0, 1], [1, 1]]\n"
    assert "success" in captured.err
    records, warnings = load_records(str(rec))
    assert warnings == []
    assert len(records) == 1
    assert records[0].task == "automaton"
    assert records[0].status == "success"
    assert records[0].stats["candidates_tested"] >= 1


def test_synth_model_plus_io(model_file, io_file, tmp_path, capsys):
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "enum", "--model", model_file,
                 "--io", io_file, "--records", str(rec)])
    assert code == 0
    assert capsys.readouterr().out == "table = [[0, 1], [1, 1]]\n"


def test_synth_smt_no_solver(tmp_path, capsys):
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "smt", "--task", "automaton",
                 "--records", str(rec)])
    assert code == 1
    assert "no solver configured" in capsys.readouterr().err
    records, _ = load_records(str(rec))
    assert records[0].status == "solver_error"


def test_synth_smt_solver_path(tmp_path, capsys):
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "smt", "--task", "automaton",
                 "--solver-path", SMT_SHIM, "--records", str(rec)])
    assert code == 0
    assert capsys.readouterr().out == "table = [[0, 1], [1, 1]]\n"


def test_synth_ilp_env_solver(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("FGSYNTH_ILP_SOLVER", MILP_SHIM)
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "ilp", "--task", "automaton",
                 "--records", str(rec)])
    assert code == 0
    assert capsys.readouterr().out == "table = [[0, 1], [1, 1]]\n"
    records, _ = load_records(str(rec))
    assert records[0].backend == "ilp"


def test_synth_fmgd_with_hypers(tmp_path, capsys):
    hp = tmp_path / "hp.json"
    hp.write_text(json.dumps({"learning_rate": 0.5, "epochs": 400}))
    rec = tmp_path / "runs.jsonl"
    code = main(["synth", "--backend", "fmgd", "--task", "automaton",
                 "--hypers", str(hp), "--restarts", "5", "--seed", "11",
                 "--records", str(rec)])
    assert code == 0
    assert capsys.readouterr().out == "table = [[0, 1], [1, 1]]\n"
    records, _ = load_records(str(rec))
    assert records[0].stats["restarts"] == 5
    assert records[0].seed == 11


def test_synth_fmgd_bad_hypers(tmp_path, capsys):
    hp = tmp_path / "hp.json"
    hp.write_text(json.dumps({"learnin_rate": 0.5}))
    code = main(["synth", "--backend", "fmgd", "--task", "automaton",
                 "--hypers", str(hp), "--records",
                 str(tmp_path / "r.jsonl")])
    assert code == 2
    assert "unknown hyperparameter" in capsys.readouterr().err


def test_synth_seeded_rerun_is_stable(tmp_path):
    rec = tmp_path / "runs.jsonl"
    argv = ["synth", "--backend", "enum", "--task", "invert",
            "--seed", "5", "--records", str(rec)]
    assert main(argv) == 0
    assert main(argv) == 0
    records, _ = load_records(str(rec))
    assert len(records) == 2
    assert stable_view(records[0]) == stable_view(records[1])


def test_report(tmp_path, capsys):
    rec = tmp_path / "runs.jsonl"
    main(["synth", "--backend", "enum", "--task", "automaton",
          "--records", str(rec)])
    with open(rec, "a") as fh:
        fh.write("not json\n")
    capsys.readouterr()
    assert main(["report", str(rec)]) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.err
    lines = captured.out.splitlines()
    assert lines[0].split() == ["task", "fmgd", "smt", "ilp", "enum"]
    assert lines[1].split()[0] == "automaton"
    assert lines[1].split()[4] != "-"


def test_report_missing_file(tmp_path, capsys):
    assert main(["report", str(tmp_path / "none.jsonl")]) == 2
    assert "error" in capsys.readouterr().err
