from .emit import INTEGRALITY_TOL, emit_ilp
from .lpfile import LpParseError, parse_lp_file, write_lp_file
from .model import IlpModel, LpRow, LpVar
from .solve import LpReport, lp_bound_report, parse_solution, solve_ilp

__all__ = [
    "INTEGRALITY_TOL",
    "IlpModel",
    "LpParseError",
    "LpReport",
    "LpRow",
    "LpVar",
    "emit_ilp",
    "lp_bound_report",
    "parse_lp_file",
    "parse_solution",
    "solve_ilp",
    "write_lp_file",
]
