"""Command-line entry point.

Subcommands: ``tasks`` (list the benchmark registry), ``check``
(compile a model and print its graph census), ``gen-examples``
(sample a task's input/output examples), ``export`` (write a solver
encoding or the IR listing), ``synth`` (run one backend and append a
run record), and ``report`` (render accumulated records as a grid).

Exit codes: 0 — verified success; 1 — the backend finished without a
verified program (timeout, unsat, solver error); 2 — the model or the
examples did not compile, or the command line was malformed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

from .diagnostics import CompileError
from .execute.enumerate import EnumBudget, enumerate_assignments
from .execute.render import render_program
from .execute.results import SynthesisResult, SynthStatus
from .fmgd.relax import relax
from .fmgd.train import HyperParams, train
from .frontend.syntax import ModelSource
from .ilp.emit import emit_ilp
from .ilp.lpfile import write_lp_file
from .ilp.solve import solve_ilp
from .ir.dump import dump
from .ir.instance import IOExamples, bind_examples
from .pipeline import compile_source
from .records import append_record, load_records, make_record, report_table
from .smt.emit import emit_smtlib
from .smt.solve import solve as solve_smt
from .solvers import SolverConfig
from .zoo import generate_examples, get_task, list_tasks, model_source

SOLVER_ENV = {"smt": "FGSYNTH_SMT_SOLVER", "ilp": "FGSYNTH_ILP_SOLVER"}
DEFAULT_RECORDS = "fgsynth_runs.jsonl"
DEFAULT_TIMEOUT = 300.0


def _const(value: str) -> tuple[str, int]:
    name, sep, num = value.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(
            f"expected NAME=INT, got {value!r}")
    try:
        return name, int(num)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected NAME=INT, got {value!r}") from exc


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model source file (.tpt)")
    p.add_argument("--task", help="benchmark task name from the registry")
    p.add_argument("--const", type=_const, action="append", default=[],
                   metavar="NAME=INT", help="override a model constant")
    p.add_argument("--io", help="examples file (JSON)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for example generation and stochastic"
                   " backends")


def _load(args) -> tuple[str, object, IOExamples | None]:
    """Resolve --task/--model/--io into (name, Graph, examples)."""
    consts = dict(args.const)
    if bool(args.model) == bool(args.task):
        raise _Usage("exactly one of --model or --task is required")
    if args.task:
        task = get_task(args.task)
        src = model_source(task, consts)
    else:
        path = Path(args.model)
        src = ModelSource(path.name, path.read_text(), consts)
    g = compile_source(src)
    io = None
    if args.io:
        io = IOExamples.from_json(Path(args.io).read_text())
    elif args.task:
        io = generate_examples(task, seed=args.seed, const_overrides=consts)
    name = src.name[:-4] if src.name.endswith(".tpt") else src.name
    return name, g, io


class _Usage(Exception):
    pass


# ----------------------------------------------------------------- tasks

def cmd_tasks(args) -> int:
    rows = [(t.name, t.model, str(t.n_examples), f"{t.log10_d:g}",
             str(t.timesteps), "stretch" if t.stretch else "")
            for t in list_tasks()]
    header = ("task", "model", "examples", "log10(D)", "T", "")
    widths = [max(len(header[i]), *(len(r[i]) for r in rows))
              for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return 0


# ----------------------------------------------------------------- check

def cmd_check(args) -> int:
    name, g, _ = _load(args)
    s = g.stats()
    print(f"{name}: {s['vars']} cells, {s['factors']} factors,"
          f" {s['gates']} gates, log10(D) = {g.log10_param_space():.2f}")
    return 0


# ---------------------------------------------------------- gen-examples

def cmd_gen_examples(args) -> int:
    task = get_task(args.task)
    io = generate_examples(task, seed=args.seed, n=args.n,
                           const_overrides=dict(args.const))
    text = io.to_json()
    if args.out:
        Path(args.out).write_text(text)
        print(args.out)
    else:
        print(text)
    return 0


# ---------------------------------------------------------------- export

_EXPORT_EXT = {"smt2": ".smt2", "lp": ".lp", "lp-relaxed": ".relaxed.lp",
               "ir": ".ir"}


def cmd_export(args) -> int:
    name, g, io = _load(args)
    if args.format == "ir":
        text = dump(g)
    else:
        if io is None:
            raise _Usage(f"format {args.format!r} needs --io (or --task)")
        ig = bind_examples(g, io)
        if args.format == "smt2":
            text = emit_smtlib(ig).text
        else:
            mode = "relaxed" if args.format == "lp-relaxed" else "integral"
            text = write_lp_file(emit_ilp(ig, mode))
    out = args.out or name + _EXPORT_EXT[args.format]
    Path(out).write_text(text)
    print(out)
    return 0


# ----------------------------------------------------------------- synth

def _solver_config(args, backend: str) -> SolverConfig | None:
    command = args.solver_path or os.environ.get(SOLVER_ENV[backend])
    if not command:
        return None
    return SolverConfig.from_command(command, timeout_s=args.timeout)


def _run_backend(args, g, io) -> SynthesisResult:
    ig = bind_examples(g, io)
    if args.backend == "enum":
        return enumerate_assignments(
            ig, EnumBudget(deadline_s=args.timeout))
    if args.backend == "fmgd":
        hp = HyperParams()
        if args.hypers:
            hp = HyperParams.from_dict(
                json.loads(Path(args.hypers).read_text()))
        if args.restarts is not None:
            hp = dataclasses.replace(hp, restarts=args.restarts)
        hp = dataclasses.replace(hp, seed=args.seed)
        dp = relax(ig)
        deadline = time.monotonic() + args.timeout
        return train(dp, hp, deadline=deadline).to_result(dp)
    cfg = _solver_config(args, args.backend)
    if cfg is None:
        return SynthesisResult(SynthStatus.SOLVER_ERROR, args.backend,
                               message="no solver configured")
    if args.backend == "smt":
        return solve_smt(ig, cfg)
    return solve_ilp(ig, cfg)


def cmd_synth(args) -> int:
    name, g, io = _load(args)
    if io is None:
        raise _Usage("synth needs --io (or --task)")
    start = time.monotonic()
    result = _run_backend(args, g, io)
    wall = time.monotonic() - start
    stats = dict(result.stats)
    if result.message:
        stats["message"] = result.message
    record = make_record(name, args.backend, result.status.value, wall,
                         stats, seed=args.seed)
    append_record(args.records, record)
    if result.ok:
        print(render_program(g, result.assignment), end="")
        print(f"# {result.status.value} in {wall:.1f}s"
              f" (record: {args.records})", file=sys.stderr)
        return 0
    detail = f": {result.message}" if result.message else ""
    print(f"{args.backend}: {result.status.value}{detail}"
          f" after {wall:.1f}s (record: {args.records})", file=sys.stderr)
    return 1


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    records, warnings = load_records(args.records_file)
    for w in warnings:
        print(f"warning: {args.records_file}: {w}", file=sys.stderr)
    print(report_table(records), end="")
    return 0


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fgsynth",
        description="program synthesis over gated factor graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tasks", help="list benchmark tasks")
    p.set_defaults(func=cmd_tasks)

    p = sub.add_parser("check", help="compile a model and print its census")
    _add_model_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen-examples",
                       help="sample input/output examples for a task")
    p.add_argument("--task", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="override the task's example count")
    p.add_argument("--const", type=_const, action="append", default=[],
                   metavar="NAME=INT")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen_examples)

    p = sub.add_parser("export", help="write a backend encoding to a file")
    _add_model_args(p)
    p.add_argument("--format", required=True,
                   choices=("smt2", "lp", "lp-relaxed", "ir"))
    p.add_argument("--out", help="output path (default: derived from"
                   " the model name)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("synth", help="synthesize with one backend")
    _add_model_args(p)
    p.add_argument("--backend", required=True,
                   choices=("fmgd", "smt", "ilp", "enum"))
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                   metavar="SECONDS")
    p.add_argument("--restarts", type=int, help="fmgd restart count")
    p.add_argument("--hypers", help="fmgd hyperparameter file (JSON)")
    p.add_argument("--solver-path",
                   help="solver command for smt/ilp (overrides"
                   " FGSYNTH_SMT_SOLVER / FGSYNTH_ILP_SOLVER)")
    p.add_argument("--records", default=DEFAULT_RECORDS,
                   help=f"results file (default: {DEFAULT_RECORDS})")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="render a results file as a grid")
    p.add_argument("records_file")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CompileError as exc:
        print(exc, file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
