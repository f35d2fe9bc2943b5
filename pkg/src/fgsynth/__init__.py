"""Inductive program synthesis over gated factor graphs.

A small modelling language describes programs with unknown integer
parameters.  Models compile to a factor-graph intermediate representation
that four interchangeable backends can solve: gradient descent on a
differentiable relaxation, an ILP encoding, an SMT encoding, and
exhaustive enumeration.  Every reported solution is re-verified by a
concrete executor.
"""

__version__ = "0.1.0"
