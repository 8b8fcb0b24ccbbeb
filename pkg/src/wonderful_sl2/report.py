"""Check records and report rendering (JSON or a text table)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Check:
    id: str
    paper_ref: str
    passed: bool
    expected: Any
    observed: Any
    witness: Optional[Any] = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "paper_ref": self.paper_ref,
            "status": "pass" if self.passed else "fail",
            "expected": self.expected,
            "observed": self.observed,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    suite: str
    params: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.to_dict() for c in self.checks],
            "summary": {"passed": self.passed, "failed": self.failed},
        }


def render(value) -> Any:
    """JSON-friendly form of scalars, matrices, points and containers."""
    if hasattr(value, "render"):
        return value.render()
    if hasattr(value, "compact"):
        return value.compact()
    if isinstance(value, tuple) and value and hasattr(value[0], "render"):
        return [v.render() for v in value]
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    return value


def _cell(value, width: int) -> str:
    text = value if isinstance(value, str) else json.dumps(value)
    return text if len(text) <= width else text[: width - 3] + "..."


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode()
    lines = [f"suite: {report.suite}", "params: " + ", ".join(f"{k}={v}" for k, v in report.params.items()), ""]
    lines.append(f"{'status':<6}  {'id':<44}  {'expected':<40}  observed")
    for c in report.checks:
        d = c.to_dict()
        lines.append(f"{d['status']:<6}  {c.id:<44}  {_cell(d['expected'], 40):<40}  {_cell(d['observed'], 60)}")
        if not c.passed and c.witness is not None:
            lines.append(f"{'':<6}  witness: {_cell(c.witness, 100)}")
    lines.append("")
    lines.append(f"passed {report.passed}, failed {report.failed}")
    return ("\n".join(lines) + "\n").encode()
