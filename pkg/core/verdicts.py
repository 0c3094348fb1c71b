from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    """One failing instance of an identity: where it failed and both sides' values"""

    label: str
    where: tuple
    lhs: tuple
    rhs: tuple


@dataclass
class Verdict:
    ok: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @classmethod
    def from_violations(cls, violations, **details):
        return cls(not violations, list(violations), details)

    def labels(self):
        return sorted({v.label for v in self.violations})
