"""Verification reports shared by the checking suites."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    return obj


@dataclass
class Report:
    suite: str
    passed: bool = True
    checked: int = 0
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)

    def check(self, ok: bool, what: str, **witness) -> bool:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = {"check": what, **witness}
        return ok

    def fail(self, what: str, **witness) -> None:
        self.check(False, what, **witness)

    def count(self, key: str, k: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + k

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        if self.passed and not other.passed:
            self.passed = False
            self.counterexample = other.counterexample
        for k, v in other.stats.items():
            if isinstance(v, int):
                self.stats[k] = self.stats.get(k, 0) + v
            elif isinstance(v, list):
                self.stats.setdefault(k, []).extend(v)
            else:
                self.stats.setdefault(k, v)
        return self

    def to_json(self) -> dict:
        out = {"suite": self.suite, "pass": self.passed, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = jsonable(self.counterexample)
        if self.stats:
            out["stats"] = jsonable(self.stats)
        return out
