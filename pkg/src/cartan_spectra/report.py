"""Check records shared by the verification pipelines and the CLI."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    detail: str = ""

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        self.passed = bool(math.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"[{flag}] {self.name}: residual {self.residual:.3e} <= {self.tolerance:.1e}{tail}"


@dataclass
class VerificationReport:
    type: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float, detail: str = "") -> Check:
        c = Check(name, residual, tolerance, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"type": self.type, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}
