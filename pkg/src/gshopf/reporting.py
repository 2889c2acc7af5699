"""Small check/report containers shared by the validators and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"

    def line(self) -> str:
        w = f"  [{self.witness}]" if self.witness and not self.passed else ""
        return f"{self.name}: {self.status}{w}"


@dataclass
class Report:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: str = "") -> CheckResult:
        c = CheckResult(name, passed, witness)
        self.checks.append(c)
        return c

    def note(self, text: str):
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [self.title]
        lines += [f"  {c.line()}" for c in self.checks]
        lines += [f"  note: {n}" for n in self.notes]
        lines.append(f"  => {'ALL PASS' if self.passed else 'FAILED'}")
        return "\n".join(lines)
