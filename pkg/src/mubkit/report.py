"""Verification results shared by every checker."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    max_residual: float | None = None
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    title: str
    mode: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float | None:
        res = [c.max_residual for c in self.checks if c.max_residual is not None]
        return max(res) if res else None

    def add(self, name: str, passed: bool, **kw: Any) -> Check:
        check = Check(name, bool(passed), **kw)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.max_residual, c.witness, c.details))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "mode": self.mode,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checks": [asdict(c) for c in self.checks],
        }

    def __bool__(self) -> bool:
        return self.passed
