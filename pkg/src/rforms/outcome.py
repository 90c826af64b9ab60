"""Small result record shared by the check functions."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Outcome:
    name: str
    passed: bool
    witness: str | None = None
    count: int = 0
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    @classmethod
    def combine(cls, name, parts, **detail):
        parts = list(parts)
        bad = next((p for p in parts if not p.passed), None)
        return cls(name, bad is None,
                   None if bad is None else f"{bad.name}: {bad.witness}",
                   sum(p.count for p in parts),
                   dict(detail, parts={p.name: p.passed for p in parts}))
