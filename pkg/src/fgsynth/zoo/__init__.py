"""Benchmark model zoo: a registry of tasks, each pairing a model file
with constant overrides and a seeded example generator."""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..frontend.resolve import resolve_constants
from ..frontend.parser import parse
from ..frontend.syntax import ModelSource
from ..ir.graph import Graph
from ..ir.instance import IOExamples
from ..pipeline import compile_source
from .generators import GENERATORS


@dataclass(frozen=True, slots=True)
class TaskSpec:
    name: str
    model: str
    overrides: dict[str, int]
    generator: str
    gen_args: dict
    n_examples: int
    log10_d: float  # expected parameter-space size, for sanity checks
    timesteps: int
    stretch: bool = False


def _load_registry() -> list[TaskSpec]:
    pkg = resources.files(__package__)
    data = json.loads((pkg / "registry.json").read_text())
    if data.get("schema") != 1:
        raise ValueError(f"unsupported registry schema {data.get('schema')!r}")
    tasks = []
    for entry in data["tasks"]:
        spec = TaskSpec(**entry)
        if spec.generator not in GENERATORS:
            raise ValueError(
                f"task {spec.name!r} names unknown generator"
                f" {spec.generator!r}")
        tasks.append(spec)
    return tasks


_REGISTRY: list[TaskSpec] | None = None


def list_tasks() -> list[TaskSpec]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _load_registry()
    return list(_REGISTRY)


def get_task(name: str) -> TaskSpec:
    for t in list_tasks():
        if t.name == name:
            return t
    known = ", ".join(t.name for t in list_tasks())
    raise KeyError(f"unknown task {name!r}; available: {known}")


def model_source(task: TaskSpec,
                 const_overrides: dict[str, int] | None = None) -> ModelSource:
    """The task's model text with registry and caller overrides merged
    (caller wins)."""
    pkg = resources.files(__package__)
    text = (pkg / "models" / task.model).read_text()
    merged = dict(task.overrides)
    merged.update(const_overrides or {})
    return ModelSource(task.name, text, merged)


def compile_task(task: TaskSpec,
                 const_overrides: dict[str, int] | None = None) -> Graph:
    return compile_source(model_source(task, const_overrides))


def resolved_constants(task: TaskSpec,
                       const_overrides: dict[str, int] | None = None,
                       ) -> dict[str, int]:
    src = model_source(task, const_overrides)
    ast = resolve_constants(parse(src), src.const_overrides)
    return {c.name: c.value.value for c in ast.constants}


def generate_examples(task: TaskSpec, seed: int = 0,
                      n: int | None = None,
                      const_overrides: dict[str, int] | None = None,
                      ) -> IOExamples:
    """Seed-deterministic examples for the task's semantics.

    The stream is salted with the task name so two tasks sharing a seed
    still see independent draws.
    """
    rng = np.random.default_rng(
        [seed, zlib.crc32(task.name.encode("utf-8"))])
    gen = GENERATORS[task.generator]
    consts = resolved_constants(task, const_overrides)
    return gen(rng, consts, task.n_examples if n is None else n,
               **task.gen_args)


__all__ = [
    "TaskSpec",
    "compile_task",
    "generate_examples",
    "get_task",
    "list_tasks",
    "model_source",
    "resolved_constants",
]
