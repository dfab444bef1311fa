from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    witness: str = ""
    checked: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return self.status != FAIL


@dataclass
class VerificationReport:
    """Ordered list of named checks.

    Order is the insertion order, which every producer keeps deterministic.
    A check whose instances were all out of range gets status SKIP, never PASS.
    """

    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, witness="", checked=1, skipped=0):
        if passed and checked == 0 and skipped > 0:
            status = SKIP
        else:
            status = PASS if passed else FAIL
        self.checks.append(Check(name, status, str(witness) if witness else "", checked, skipped))
        return self

    def extend(self, other: "VerificationReport", prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.checked, c.skipped))
        return self

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def get(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = []
        for c in self.checks:
            line = f"{c.name:<{width}}  {c.status}  checked={c.checked} skipped={c.skipped}"
            if c.witness:
                line += f"  witness: {c.witness}"
            lines.append(line)
        return "\n".join(lines)

    def summary(self) -> list:
        return [[c.name, c.status, c.checked, c.skipped] for c in self.checks]
