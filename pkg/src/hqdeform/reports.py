"""Pass/fail reports shared by every verifier."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional


@dataclass
class Check:
    id: str
    ok: bool
    witness: Any = None
    detail: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    name: str
    checks: List[Check] = field(default_factory=list)

    def add(self, cid: str, ok: bool, witness: Any = None, detail: Optional[str] = None) -> Check:
        c = Check(cid, bool(ok), witness if not ok else None, detail)
        self.checks.append(c)
        return c

    def append(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed_ids(self) -> List[str]:
        return [c.id for c in self.checks if not c.ok]

    def ids(self) -> List[str]:
        return [c.id for c in self.checks]

    def get(self, cid: str) -> Optional[Check]:
        return next((c for c in self.checks if c.id == cid), None)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.ok else "fail",
            "checks": [c.to_dict() for c in self.checks],
        }

    def __bool__(self) -> bool:
        return self.ok
