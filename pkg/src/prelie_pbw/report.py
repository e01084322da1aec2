"""Small result records shared by every verifier."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass
class CheckResult:
    name: str
    passed: bool
    counterexample: Any = None
    detail: str = ""
    runtime: float = 0.0

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" -- {self.detail}" if self.detail else ""
        return f"[{status}] {self.name} ({self.runtime:.2f}s){extra}"


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def names(self) -> list[str]:
        return [c.name for c in self.checks]


def timed(name: str, fn: Callable[[], tuple[bool, Any]], detail: str = "") -> CheckResult:
    """Run ``fn`` (returning ``(passed, counterexample)``) and time it."""
    start = time.perf_counter()
    ok, witness = fn()
    return CheckResult(name, bool(ok), None if ok else witness, detail, time.perf_counter() - start)
