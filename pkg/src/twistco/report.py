"""Verification outcomes as data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .linalg import LinMap


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    derived: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        for c in other.checks:
            name = f"{prefix}.{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.witness))
        self.derived.update(other.derived)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": "pass" if self.passed else "fail",
            "checks": [c.to_dict() for c in self.checks],
            "derived": self.derived,
        }

    def __repr__(self) -> str:
        status = "pass" if self.passed else "fail"
        failed = ", ".join(c.name for c in self.failures())
        return f"Report({self.name}: {status}{' [' + failed + ']' if failed else ''})"


def compare(name: str, lhs: LinMap, rhs: LinMap) -> Check:
    """Entrywise comparison; the witness names the first differing basis pair."""
    diff = lhs.first_difference(rhs)
    if diff is None:
        return Check(name, True)
    src, dst, lv, rv = diff
    return Check(name, False, {"input": list(src), "output": list(dst), "lhs": lv, "rhs": rv})


def flag(name: str, ok: bool, **witness: Any) -> Check:
    return Check(name, bool(ok), witness or None if not ok else None)
