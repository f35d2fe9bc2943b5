"""A small reverse-mode tape over probability vectors.

Every slot holds a marginal distribution (a float64 vector summing to 1).
Parameters enter through softmax, constants and clamped inputs as one-hot
vectors, table applications as sum-products over the joint of their
inputs, and gates as mixtures weighted by the condition's marginal.

The loss is the negative log-likelihood of the observed outputs, minus an
optional entropy bonus on the parameter distributions.  A zero-probability
observation yields an explicitly infinite loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(slots=True)
class Logits:
    """One unconstrained real vector per Param cell."""

    vectors: list[np.ndarray]

    @staticmethod
    def normal(domains: list[int], rng: np.random.Generator,
               scale: float) -> "Logits":
        return Logits([rng.normal(0.0, scale, size=d) for d in domains])

    @staticmethod
    def point_mass(domains: list[int], values: list[int]) -> "Logits":
        """Logits whose softmax is exactly one-hot (off-values at -inf)."""
        vecs = []
        for d, v in zip(domains, values):
            vec = np.full(d, -np.inf)
            vec[v] = 0.0
            vecs.append(vec)
        return Logits(vecs)

    def copy(self) -> "Logits":
        return Logits([v.copy() for v in self.vectors])

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(v * v)) for v in self.vectors)))


def softmax(theta: np.ndarray) -> np.ndarray:
    m = np.max(theta)
    if not np.isfinite(m):  # all -inf would be malformed; m == +inf likewise
        m = 0.0
    e = np.exp(theta - m)
    return e / np.sum(e)


def _accumulate(grads: list, slot: int, delta: np.ndarray) -> None:
    """Add in place, never rebinding an existing buffer: a gate whose
    scrutinee also feeds one of its branches accumulates into the same
    slot twice within one backward step, so replacing the array would
    strand the first contribution."""
    if grads[slot] is None:
        grads[slot] = delta.copy()
    else:
        grads[slot] += delta


@dataclass(slots=True)
class SoftmaxOp:
    param_index: int
    out: int

    def forward(self, vals: list, logits: Logits) -> None:
        vals[self.out] = softmax(logits.vectors[self.param_index])

    def backward(self, vals: list, grads: list, gtheta: list) -> None:
        g = grads[self.out]
        if g is None:
            return
        mu = vals[self.out]
        gtheta[self.param_index] += mu * (g - float(np.dot(g, mu)))


@dataclass(slots=True)
class OneHotOp:
    out: int
    domain: int
    value: int

    def forward(self, vals: list, logits: Logits) -> None:
        v = np.zeros(self.domain)
        v[self.value] = 1.0
        vals[self.out] = v

    def backward(self, vals: list, grads: list, gtheta: list) -> None:
        pass


@dataclass(slots=True)
class TableOp:
    """mu_out[v] = sum over tuples t with f(t) = v of prod_i mu_i[t_i].

    `entries` is the function table restricted to the cell-valued
    arguments (literal axes already sliced away)."""

    out: int
    in_slots: tuple[int, ...]
    entries: np.ndarray  # int array, shape = input domains
    out_domain: int
    _bwd_subscripts: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        k = len(self.in_slots)
        if k > len(_ALPHABET) - 1:
            raise ValueError("too many table inputs")
        letters = _ALPHABET[:k]
        for i in range(k):
            others = ",".join(letters[j] for j in range(k) if j != i)
            spec = letters + ("," + others if others else "")
            self._bwd_subscripts.append(f"{spec}->{letters[i]}")

    def forward(self, vals: list, logits: Logits) -> None:
        joint = vals[self.in_slots[0]]
        for s in self.in_slots[1:]:
            joint = np.multiply.outer(joint, vals[s])
        mu = np.bincount(self.entries.ravel(), weights=joint.ravel(),
                         minlength=self.out_domain)
        vals[self.out] = mu

    def backward(self, vals: list, grads: list, gtheta: list) -> None:
        g = grads[self.out]
        if g is None:
            return
        gj = g[self.entries]
        k = len(self.in_slots)
        for i, slot in enumerate(self.in_slots):
            operands = [gj] + [vals[self.in_slots[j]]
                               for j in range(k) if j != i]
            gi = np.einsum(self._bwd_subscripts[i], *operands)
            _accumulate(grads, slot, gi)


@dataclass(slots=True)
class MixOp:
    """mu_out = sum_b cond[b] * branch_b; a branch that does not write the
    cell falls back to the pre-gate marginal, or uniform if none exists."""

    out: int
    cond_slot: int
    branch_slots: tuple[int, ...]  # -1 = fallback
    fallback_slot: int  # -1 = uniform
    out_domain: int

    def forward(self, vals: list, logits: Logits) -> None:
        w = vals[self.cond_slot]
        mu = np.zeros(self.out_domain)
        fallback_w = 0.0
        for b, slot in enumerate(self.branch_slots):
            if slot >= 0:
                mu += w[b] * vals[slot]
            else:
                fallback_w += w[b]
        if fallback_w:
            if self.fallback_slot >= 0:
                mu += fallback_w * vals[self.fallback_slot]
            else:
                mu += fallback_w / self.out_domain
        vals[self.out] = mu

    def backward(self, vals: list, grads: list, gtheta: list) -> None:
        g = grads[self.out]
        if g is None:
            return
        w = vals[self.cond_slot]
        gw = np.zeros_like(w)
        fallback_w = 0.0
        for b, slot in enumerate(self.branch_slots):
            if slot >= 0:
                gw[b] = float(np.dot(g, vals[slot]))
                _accumulate(grads, slot, w[b] * g)
            else:
                fallback_w += w[b]
                if self.fallback_slot >= 0:
                    gw[b] = float(np.dot(g, vals[self.fallback_slot]))
                else:
                    gw[b] = float(np.sum(g)) / self.out_domain
        if fallback_w and self.fallback_slot >= 0:
            _accumulate(grads, self.fallback_slot, fallback_w * g)
        _accumulate(grads, self.cond_slot, gw)


Op = SoftmaxOp | OneHotOp | TableOp | MixOp


@dataclass(slots=True)
class DiffProgram:
    """A relaxed instance graph: ops in evaluation order plus observations.

    slot_of[e] maps base cell ids to the slot holding that cell's final
    marginal in example e (Param cells appear in every example's map)."""

    graph: Any  # ir.Graph, kept for discretization and verification
    io: Any  # IOExamples
    param_cells: list[int]
    param_domains: list[int]
    ops: list[Op]
    n_slots: int
    observations: list[tuple[int, int]]  # (slot, observed value)
    slot_of: list[dict[int, int]]
    softmax_slots: list[tuple[int, int]]  # (param_index, slot)

    def forward(self, logits: Logits,
                entropy_weight: float = 0.0) -> tuple[float, list]:
        vals: list = [None] * self.n_slots
        for op in self.ops:
            op.forward(vals, logits)
        loss = 0.0
        for slot, v in self.observations:
            p = vals[slot][v]
            if p <= 0.0:
                loss = float("inf")
            else:
                loss -= float(np.log(p))
        if entropy_weight:
            loss -= entropy_weight * self._entropy(vals)
        return loss, vals

    def _entropy(self, vals: list) -> float:
        h = 0.0
        for _, slot in self.softmax_slots:
            mu = vals[slot]
            h -= float(np.sum(mu * np.log(np.maximum(mu, 1e-300))))
        return h

    def backward(self, logits: Logits,
                 entropy_weight: float = 0.0) -> tuple[float, list]:
        """Loss and gradient w.r.t. every logits vector."""
        loss, vals = self.forward(logits, entropy_weight)
        gtheta = [np.zeros_like(v) for v in logits.vectors]
        if not np.isfinite(loss):
            return loss, gtheta
        grads: list = [None] * self.n_slots
        for slot, v in self.observations:
            if grads[slot] is None:
                grads[slot] = np.zeros_like(vals[slot])
            grads[slot][v] += -1.0 / vals[slot][v]
        if entropy_weight:
            # d(-w*H)/d mu = w * (log mu + 1)
            for _, slot in self.softmax_slots:
                mu = vals[slot]
                g = entropy_weight * (np.log(np.maximum(mu, 1e-300)) + 1.0)
                if grads[slot] is None:
                    grads[slot] = g
                else:
                    grads[slot] = grads[slot] + g
        for op in reversed(self.ops):
            op.backward(vals, grads, gtheta)
        return loss, gtheta

    def marginal(self, vals: list, example: int, base_cell: int) -> np.ndarray:
        return vals[self.slot_of[example][base_cell]]

    def discretize(self, logits: Logits) -> "ParamAssignment":
        from ..execute.machine import ParamAssignment

        values = {c: int(np.argmax(logits.vectors[i]))
                  for i, c in enumerate(self.param_cells)}
        return ParamAssignment(values)
