"""Structured check records shared by the verification suites."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


@dataclass
class CheckResult:
    """One verified identity: ``passed`` iff ``residual < threshold``.

    ``anchor`` names the statement being certified; ``detail`` holds
    JSON-friendly extras (dimensions, per-condition values, ...).
    """

    name: str
    residual: float
    threshold: float
    samples: int = 0
    anchor: str = ""
    detail: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        r = float(self.residual)
        return math.isfinite(r) and r < self.threshold

    def record(self, timings: bool = True) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "passed": self.passed,
            "samples": int(self.samples),
            "detail": self.detail,
        }
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return _jsonable(out)


def exact_check(name: str, ok: bool, anchor: str = "", **detail) -> CheckResult:
    """Record for an integer/structural comparison (residual 0 or 1)."""
    return CheckResult(name, 0.0 if ok else 1.0, 0.5, anchor=anchor, detail=detail)


@dataclass
class Report:
    suite: str
    config: dict
    checks: list = field(default_factory=list)
    aborted: str | None = None

    def add(self, checks: CheckResult | Iterable[CheckResult]) -> None:
        if isinstance(checks, CheckResult):
            self.checks.append(checks)
        else:
            self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return self.aborted is None and all(c.passed for c in self.checks)

    def sorted_checks(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.name)

    def lines(self, timings: bool = True) -> list[str]:
        """JSON lines: a config header, one record per check, then a summary."""
        out = [json.dumps({"suite": self.suite, "config": _jsonable(self.config)}, sort_keys=True)]
        for c in self.sorted_checks():
            out.append(json.dumps(c.record(timings), sort_keys=True))
        summary = {
            "summary": {
                "suite": self.suite,
                "checks": len(self.checks),
                "failed": sum(not c.passed for c in self.checks),
                "status": "pass" if self.passed else ("abort" if self.aborted else "fail"),
            }
        }
        if self.aborted:
            summary["summary"]["reason"] = self.aborted
        out.append(json.dumps(summary, sort_keys=True))
        return out

    def text(self, timings: bool = True) -> str:
        return "\n".join(self.lines(timings)) + "\n"

    def human(self) -> str:
        rows = []
        for c in self.sorted_checks():
            mark = "PASS" if c.passed else "FAIL"
            rows.append(f"{mark}  {c.name:<48} residual={c.residual:.3e}  threshold={c.threshold:.1e}")
        status = "PASS" if self.passed else ("ABORT" if self.aborted else "FAIL")
        rows.append(f"{self.suite}: {status} ({len(self.checks)} checks)")
        return "\n".join(rows)

    def asdict(self) -> dict:
        return asdict(self)
