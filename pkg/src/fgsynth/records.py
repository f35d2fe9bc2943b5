"""Append-only run records (JSON lines) and the comparison report.

Every synthesis invocation appends one record to a results file so that
runs accumulate into a per-task × per-backend comparison grid.  Records
carry a schema number; wall-clock fields are isolated so that seeded
reruns can be compared field-by-field (see stable_view).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any

from . import __version__

SCHEMA = 1
# Backends in report column order; unknown backends sort after these.
BACKEND_ORDER = ("fmgd", "smt", "ilp", "enum")


@dataclass(frozen=True, slots=True)
class RunRecord:
    task: str
    backend: str
    status: str
    wall_s: float
    stats: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__
    timestamp: str = ""
    schema: int = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "RunRecord":
        known = {f for f in RunRecord.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown record field(s): {sorted(extra)}")
        missing = {"task", "backend", "status", "wall_s"} - set(d)
        if missing:
            raise ValueError(f"record missing field(s): {sorted(missing)}")
        return RunRecord(**d)


def make_record(task: str, backend: str, status: str, wall_s: float,
                stats: dict[str, Any] | None = None,
                seed: int | None = None) -> RunRecord:
    return RunRecord(task=task, backend=backend, status=status,
                     wall_s=round(wall_s, 6), stats=dict(stats or {}),
                     seed=seed,
                     timestamp=datetime.now(timezone.utc).isoformat())


def append_record(path: str, record: RunRecord) -> None:
    # One write of one complete line in append mode: concurrent writers
    # interleave at line granularity, never inside a record.
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record.to_json() + "\n")


def stable_view(record: RunRecord | dict[str, Any]) -> dict[str, Any]:
    """The record minus wall-clock content: timestamp, wall_s, and any
    stats key ending in ``_s``.  Seeded reruns must agree on this."""
    d = asdict(record) if isinstance(record, RunRecord) else dict(record)
    d.pop("timestamp", None)
    d.pop("wall_s", None)
    stats = d.get("stats")
    if isinstance(stats, dict):
        d["stats"] = {k: v for k, v in stats.items()
                      if not k.endswith("_s")}
    return d


def load_records(path: str) -> tuple[list[RunRecord], list[str]]:
    """Parse a results file; malformed lines are skipped and reported."""
    records: list[RunRecord] = []
    warnings: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                if not isinstance(d, dict):
                    raise ValueError("not a JSON object")
                records.append(RunRecord.from_dict(d))
            except (ValueError, TypeError) as exc:
                warnings.append(f"line {lineno}: skipped ({exc})")
    return records, warnings


def _cell(r: RunRecord | None) -> str:
    if r is None or r.status != "success":
        return "-"
    w = r.wall_s
    if not math.isfinite(w):
        return "-"
    return f"{w:.1f}"


def report_table(records: list[RunRecord]) -> str:
    """Per-task × per-backend grid of wall seconds; `-` marks anything
    short of verified success.  The newest record per cell wins."""
    tasks: list[str] = []
    for r in records:
        if r.task not in tasks:
            tasks.append(r.task)
    extra = sorted({r.backend for r in records} - set(BACKEND_ORDER))
    backends = list(BACKEND_ORDER) + extra
    latest: dict[tuple[str, str], RunRecord] = {}
    for r in records:
        latest[(r.task, r.backend)] = r

    header = ["task", *backends]
    rows = [[t, *(_cell(latest.get((t, b))) for b in backends)]
            for t in tasks]
    widths = [max(len(h), *(len(row[i]) for row in rows), 1) if rows
              else len(h) for i, h in enumerate(header)]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        out.append("  ".join(c.ljust(w)
                             for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"
