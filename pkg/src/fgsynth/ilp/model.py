"""Integer-linear-program representation shared by emitter and writers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class LpVar:
    name: str
    lb: float
    ub: float
    integral: bool


@dataclass(frozen=True, slots=True)
class LpRow:
    """sum(coef * var) SENSE rhs, sense one of '=' or '<='."""

    name: str
    terms: tuple[tuple[float, str], ...]
    sense: str
    rhs: float


@dataclass(slots=True)
class IlpModel:
    name: str
    variables: list[LpVar] = field(default_factory=list)
    rows: list[LpRow] = field(default_factory=list)
    objective: float = 0.0
    # Indicator name -> (instance cell id, value); param indicators also
    # appear in param_symbols keyed by base cell id.
    symbols: dict[str, tuple[int, int]] = field(default_factory=dict)
    param_symbols: dict[int, dict[int, str]] = field(default_factory=dict)
    integral: bool = True

    def var_names(self) -> list[str]:
        return [v.name for v in self.variables]
