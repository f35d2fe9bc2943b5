"""Differentiable relaxation backend: forward marginals, gradient descent."""

from .tape import DiffProgram, Logits
from .relax import relax
from .train import FmgdRunResult, HyperParams, RestartResult, train
from .search import SearchResult, load_distributions, random_search

__all__ = [
    "DiffProgram",
    "FmgdRunResult",
    "HyperParams",
    "Logits",
    "RestartResult",
    "SearchResult",
    "load_distributions",
    "random_search",
    "relax",
    "train",
]
