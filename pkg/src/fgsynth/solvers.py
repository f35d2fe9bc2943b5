"""External solver process configuration and invocation.

Both constraint backends drive a solver as a child process: the script
or model file is written to a temp directory and the solver is invoked
as `<executable> <args...> <file> [<solution file>]`, with its stdout
captured.  A config can be built from a command string like
"python3 tools/smt_shim.py" (split with shell quoting rules).
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class SolverConfig:
    executable: str
    args: tuple[str, ...] = ()
    timeout_s: float = 300.0
    # Solution file layout for MILP solvers: "pairs" (name value per
    # line, `status:` header) or "cbc" (index name value rows).
    solution_format: str = "pairs"

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")

    @staticmethod
    def from_command(command: str, timeout_s: float = 300.0,
                     solution_format: str = "pairs") -> "SolverConfig":
        parts = shlex.split(command)
        if not parts:
            raise ValueError("empty solver command")
        return SolverConfig(parts[0], tuple(parts[1:]), timeout_s,
                            solution_format)


@dataclass(frozen=True, slots=True)
class SolverRun:
    """Outcome of one child process invocation."""

    ok: bool
    timed_out: bool
    output: str
    detail: str = ""


def _digest(text: str, limit: int = 400) -> str:
    text = text.strip()
    if len(text) <= limit:
        return text
    return text[:limit] + f"... [{len(text)} chars]"


def run_solver(cfg: SolverConfig, file_args: list[str]) -> SolverRun:
    cmd = [cfg.executable, *cfg.args, *file_args]
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=cfg.timeout_s)
    except subprocess.TimeoutExpired as exc:
        out = (exc.stdout or b"")
        if isinstance(out, bytes):
            out = out.decode(errors="replace")
        return SolverRun(False, True, out,
                         f"timeout after {cfg.timeout_s}s")
    except OSError as exc:
        return SolverRun(False, False, "",
                         f"cannot run {cfg.executable!r}: {exc}")
    if proc.returncode != 0 and not proc.stdout.strip():
        return SolverRun(
            False, False, proc.stdout,
            f"solver exited {proc.returncode}: {_digest(proc.stderr)}")
    return SolverRun(True, False, proc.stdout, _digest(proc.stderr))
