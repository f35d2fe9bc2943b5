"""Gradient-descent training loop with restarts.

Per epoch: compute the gradient, add annealed Gaussian noise, clip the
global norm, then step.  The entropy bonus decays with a configurable
half-life.  Each restart draws fresh logits from N(0, init_scale^2)
using a generator seeded by (seed, restart); runs are reproducible.

A restart whose very first loss is non-finite counts as a failure; a
non-finite loss later on stops the restart early and the logits reached
so far are discretized like any other.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from ..execute.machine import ParamAssignment, check_consistency
from ..execute.results import SynthesisResult, SynthStatus
from .tape import DiffProgram, Logits

_NOISE_DECAY_EXP = 0.55
_RMS_DECAY = 0.9
_RMS_EPS = 1e-8


@dataclass(frozen=True, slots=True)
class HyperParams:
    """Defaults are the plain configuration: constant-rate descent with
    no noise, no clipping, and no entropy bonus."""

    learning_rate: float = 0.1
    optimizer: str = "sgd"  # "sgd" or "adaptive" (RMS-scaled steps)
    init_scale: float = 1.0
    clip_norm: float | None = None
    noise: float = 0.0
    entropy_weight: float = 0.0
    entropy_half_life: float = 200.0
    epochs: int = 1000
    restarts: int = 20
    seed: int = 0

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "HyperParams":
        known = {f for f in HyperParams.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown hyperparameter(s): {sorted(unknown)}")
        return replace(HyperParams(), **d)

    def to_dict(self) -> dict[str, Any]:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


@dataclass(frozen=True, slots=True)
class RestartResult:
    restart: int
    success: bool
    final_loss: float
    epochs_run: int
    assignment: ParamAssignment


@dataclass(slots=True)
class FmgdRunResult:
    hypers: HyperParams
    restarts: list[RestartResult]
    wall_time_s: float
    timed_out: bool = False

    @property
    def success_count(self) -> int:
        return sum(1 for r in self.restarts if r.success)

    @property
    def success_fraction(self) -> float:
        if not self.restarts:
            return 0.0
        return self.success_count / len(self.restarts)

    @property
    def best_assignment(self) -> ParamAssignment | None:
        winners = [r for r in self.restarts if r.success]
        if not winners:
            return None
        return min(winners, key=lambda r: (r.final_loss, r.restart)).assignment

    def mean_final_loss(self) -> float:
        finite = [r.final_loss for r in self.restarts
                  if math.isfinite(r.final_loss)]
        if not finite:
            return float("inf")
        return sum(finite) / len(finite)

    def to_result(self, dp: DiffProgram) -> SynthesisResult:
        stats = {
            "restarts": len(self.restarts),
            "success_count": self.success_count,
            "success_fraction": self.success_fraction,
            "mean_final_loss": self.mean_final_loss(),
            "elapsed_s": round(self.wall_time_s, 6),
        }
        best = self.best_assignment
        if best is not None:
            return SynthesisResult.success(dp.graph, dp.io, best, "fmgd",
                                           stats)
        status = SynthStatus.TIMEOUT if self.timed_out else SynthStatus.FAILURE
        return SynthesisResult(status, "fmgd", stats=stats,
                               message="no restart reached a consistent"
                               " program")


def _step(logits: Logits, grads: list[np.ndarray], hp: HyperParams,
          rng: np.random.Generator, epoch: int,
          rms_acc: list[np.ndarray]) -> None:
    if hp.noise > 0.0:
        std = hp.noise / (1.0 + epoch) ** _NOISE_DECAY_EXP
        for g in grads:
            g += rng.normal(0.0, std, size=g.shape)
    if hp.clip_norm is not None:
        total = math.sqrt(sum(float(np.sum(g * g)) for g in grads))
        if total > hp.clip_norm and total > 0.0:
            scale = hp.clip_norm / total
            for g in grads:
                g *= scale
    if hp.optimizer == "sgd":
        for vec, g in zip(logits.vectors, grads):
            vec -= hp.learning_rate * g
    elif hp.optimizer == "adaptive":
        for vec, g, acc in zip(logits.vectors, grads, rms_acc):
            acc *= _RMS_DECAY
            acc += (1.0 - _RMS_DECAY) * g * g
            vec -= hp.learning_rate * g / (np.sqrt(acc) + _RMS_EPS)
    else:
        raise ValueError(f"unknown optimizer {hp.optimizer!r}")


def train(dp: DiffProgram, hp: HyperParams,
          deadline: float | None = None) -> FmgdRunResult:
    """Run hp.restarts independent restarts; never raises on bad losses."""
    start = time.monotonic()
    results: list[RestartResult] = []
    timed_out = False
    for r in range(hp.restarts):
        if deadline is not None and time.monotonic() > deadline:
            timed_out = True
            break
        rng = np.random.default_rng([hp.seed, r])
        logits = Logits.normal(dp.param_domains, rng, hp.init_scale)
        rms_acc = [np.zeros_like(v) for v in logits.vectors]
        final_loss = float("inf")
        epochs_run = 0
        aborted = False
        for t in range(hp.epochs):
            if deadline is not None and time.monotonic() > deadline:
                timed_out = True
                break
            w_t = hp.entropy_weight * 2.0 ** (-t / hp.entropy_half_life)
            loss, grads = dp.backward(logits, w_t)
            if not math.isfinite(loss):
                if t == 0:
                    aborted = True
                break
            final_loss = loss
            epochs_run = t + 1
            _step(logits, grads, hp, rng, t, rms_acc)
        assignment = dp.discretize(logits)
        success = (not aborted) and check_consistency(
            dp.graph, assignment, dp.io)
        results.append(RestartResult(r, success, final_loss, epochs_run,
                                     assignment))
        if timed_out:
            break
    return FmgdRunResult(hp, results, time.monotonic() - start, timed_out)
