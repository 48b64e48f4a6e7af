"""Reports: ordered check records rendered as text or compact JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .checks import Check


@dataclass(frozen=True)
class Table:
    title: str
    rows: tuple[tuple[str, ...], ...]


@dataclass
class Report:
    scenario: str = ""
    checks: list[Check] = field(default_factory=list)
    tables: list[Table] = field(default_factory=list)
    unexpected: list[str] = field(default_factory=list)

    @property
    def n_pass(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def n_fail(self) -> int:
        return len(self.checks) - self.n_pass

    def to_dict(self) -> dict:
        out: dict = {}
        if self.scenario:
            out["scenario"] = self.scenario
        out["checks"] = [_check_dict(c) for c in self.checks]
        out["summary"] = {"pass": self.n_pass, "fail": self.n_fail}
        if self.tables:
            out["tables"] = [{"title": t.title, "rows": [list(r) for r in t.rows]} for t in self.tables]
        if self.unexpected:
            out["unexpected"] = list(self.unexpected)
        return out


def _check_dict(c: Check) -> dict:
    d = {"id": c.id, "description": c.description, "anchor": c.anchor, "status": c.status}
    if c.witness is not None:
        d["witness"] = c.witness
    return d


def emit_report(r: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(r.to_dict(), ensure_ascii=False, separators=(",", ":"))
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return _text(r)


def _text(r: Report) -> str:
    lines = []
    if r.scenario:
        lines.append(f"scenario: {r.scenario}")
    if r.checks:
        width = max(len(c.id) for c in r.checks)
        for c in r.checks:
            line = f"{c.status}  {c.id.ljust(width)}  {c.anchor}"
            if c.witness is not None:
                line += f"  [{c.witness}]"
            lines.append(line)
    for t in r.tables:
        lines.append("")
        lines.append(t.title)
        widths = [max(len(row[k]) for row in t.rows) for k in range(len(t.rows[0]))] if t.rows else []
        for row in t.rows:
            lines.append("  " + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    lines.append(f"summary: {r.n_pass} passed, {r.n_fail} failed")
    for u in r.unexpected:
        lines.append(f"unexpected: {u}")
    return "\n".join(lines)
