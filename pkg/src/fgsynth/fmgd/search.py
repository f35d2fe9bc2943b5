"""Random hyperparameter search over training configurations.

Distributions come from a JSON file mapping field names to either
{"choice": [...]} or {"log_uniform": [lo, hi]}.  A default bundle
ships with the package.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from importlib import resources
from typing import Any

import numpy as np

from .tape import DiffProgram
from .train import FmgdRunResult, HyperParams, train

_SAMPLED_FIELDS = {f for f in HyperParams.__dataclass_fields__
                   if f not in ("epochs", "restarts", "seed")}


def load_distributions(path: str | None = None) -> dict[str, dict]:
    if path is None:
        text = (resources.files("fgsynth") / "data"
                / "hyper_search_default.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    dists = json.loads(text)
    for name, spec in dists.items():
        if name not in _SAMPLED_FIELDS:
            raise ValueError(f"cannot search over {name!r}")
        if not isinstance(spec, dict) or len(spec) != 1:
            raise ValueError(f"bad distribution for {name!r}: {spec!r}")
        kind = next(iter(spec))
        if kind == "choice":
            if not isinstance(spec[kind], list) or not spec[kind]:
                raise ValueError(f"empty choice list for {name!r}")
        elif kind == "log_uniform":
            lo, hi = spec[kind]
            if not (0 < lo <= hi):
                raise ValueError(f"bad log_uniform range for {name!r}")
        else:
            raise ValueError(f"unknown distribution kind {kind!r}")
    return dists


def sample_hypers(dists: dict[str, dict], rng: np.random.Generator,
                  base: HyperParams) -> HyperParams:
    drawn: dict[str, Any] = {}
    for name in sorted(dists):
        spec = dists[name]
        kind = next(iter(spec))
        if kind == "choice":
            options = spec[kind]
            drawn[name] = options[int(rng.integers(len(options)))]
        else:
            lo, hi = spec[kind]
            drawn[name] = float(math.exp(rng.uniform(math.log(lo),
                                                     math.log(hi))))
    merged = base.to_dict()
    merged.update(drawn)
    return HyperParams.from_dict(merged)


@dataclass(slots=True)
class SearchResult:
    runs: list[FmgdRunResult]
    wall_time_s: float
    timed_out: bool = False

    @property
    def best(self) -> FmgdRunResult | None:
        if not self.runs:
            return None
        return max(
            enumerate(self.runs),
            key=lambda ir: (ir[1].success_count, -ir[1].mean_final_loss(),
                            -ir[0]),
        )[1]

    @property
    def average_success(self) -> float:
        """Success rate pooled over every restart of every sampled set."""
        total = sum(len(r.restarts) for r in self.runs)
        if total == 0:
            return 0.0
        return sum(r.success_count for r in self.runs) / total


def random_search(dp: DiffProgram, dists: dict[str, dict], n_sets: int,
                  base: HyperParams, deadline: float | None = None,
                  ) -> SearchResult:
    """Train n_sets sampled configurations; each set gets its own seed
    stream derived from base.seed so sets are independent and the whole
    search replays exactly."""
    start = time.monotonic()
    master = np.random.default_rng([base.seed, 0x5EA2C4])
    runs: list[FmgdRunResult] = []
    timed_out = False
    for _ in range(n_sets):
        hp = sample_hypers(dists, master, base)
        hp = HyperParams.from_dict(
            {**hp.to_dict(), "seed": int(master.integers(2 ** 31))})
        if deadline is not None and time.monotonic() > deadline:
            timed_out = True
            break
        runs.append(train(dp, hp, deadline))
        if runs[-1].timed_out:
            timed_out = True
            break
    return SearchResult(runs, time.monotonic() - start, timed_out)
