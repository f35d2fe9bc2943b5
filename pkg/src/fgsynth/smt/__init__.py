from .emit import ITE_THRESHOLD, SmtScript, emit_smtlib, param_symbol
from .solve import parse_model, solve

__all__ = [
    "ITE_THRESHOLD",
    "SmtScript",
    "emit_smtlib",
    "param_symbol",
    "parse_model",
    "solve",
]
