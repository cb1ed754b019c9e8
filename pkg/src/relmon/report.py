"""Check results shared by every law checker.

A :class:`Check` records one law (or one family of instances of a law) with
its verdict.  Violations are data: a failing check carries the first
counterexample found as a JSON-friendly ``witness`` dictionary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
OUT_OF_UNIVERSE = "out-of-universe"

STATUSES = (PASS, FAIL, SKIPPED, OUT_OF_UNIVERSE)


def jsonable(v: Any) -> Any:
    """Convert tuples / numpy scalars / nested containers to plain JSON values."""
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "tolist"):
        return v.tolist()
    if hasattr(v, "table") and hasattr(v, "dom"):
        return list(v.table)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


@dataclass
class Check:
    id: str
    law: str
    status: str = PASS
    count: int = 0
    witness: dict | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def fail(self, **witness) -> "Check":
        """Mark as failed, keeping only the first witness."""
        if self.status != FAIL:
            self.status = FAIL
            self.witness = jsonable(witness)
        return self

    def to_json(self) -> dict:
        out: dict[str, Any] = {"id": self.id, "law": self.law, "status": self.status, "count": self.count}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def new(self, id: str, law: str) -> Check:
        return self.add(Check(id, law))

    def extend(self, other: "Report | Iterable[Check]", prefix: str = "") -> "Report":
        items = other.checks if isinstance(other, Report) else list(other)
        for c in items:
            if prefix:
                c.id = f"{prefix}/{c.id}"
            self.checks.append(c)
        return self

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def status_of(self, id_suffix: str) -> str:
        for c in self.checks:
            if c.id == id_suffix or c.id.endswith("/" + id_suffix):
                return c.status
        raise KeyError(id_suffix)

    def get(self, id_suffix: str) -> Check:
        for c in self.checks:
            if c.id == id_suffix or c.id.endswith("/" + id_suffix):
                return c
        raise KeyError(id_suffix)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in sorted(self.checks, key=lambda c: c.id)]

    def __repr__(self) -> str:
        lines = [f"{c.id}: {c.status} ({c.count})" + (f" {c.witness}" if c.witness else "") for c in self.checks]
        return "Report(\n  " + "\n  ".join(lines) + "\n)"
