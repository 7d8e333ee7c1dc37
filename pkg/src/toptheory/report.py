"""Three-valued verdicts and structured reports shared by every checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass
class Check:
    """Outcome of evaluating one law on one instance.

    Truthy exactly when the law holds, so ``if is_tcategory(X): ...`` reads
    naturally while the witness stays available for reporting.
    """

    law: str
    verdict: Verdict
    witness: Any = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @classmethod
    def holds(cls, law: str) -> "Check":
        return cls(law, Verdict.HOLDS)

    @classmethod
    def fails(cls, law: str, witness: Any = None) -> "Check":
        return cls(law, Verdict.FAILS, witness)

    @classmethod
    def unknown(cls, law: str, witness: Any = None) -> "Check":
        return cls(law, Verdict.UNKNOWN, witness)

    @classmethod
    def of(cls, law: str, ok: bool, witness: Any = None) -> "Check":
        return cls(law, Verdict.HOLDS if ok else Verdict.FAILS,
                   None if ok else witness)

    def to_dict(self) -> dict:
        d = {"law": self.law, "verdict": self.verdict.value}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        return d


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return all(c.verdict is not Verdict.FAILS for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict is Verdict.FAILS]

    def __getitem__(self, law: str) -> Check:
        for c in self.checks:
            if c.law == law:
                return c
        raise KeyError(law)

    def to_dict(self) -> dict:
        d = {"subject": self.subject,
             "checks": [c.to_dict() for c in self.checks]}
        if self.data:
            d["data"] = _plain(self.data)
        return d


def _plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)
