"""Check records and reports shared by all verification routines."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

PASS = "PASS"
FAIL = "FAIL"
PASS_PROB = "PASS(probabilistic)"
SKIPPED = "SKIPPED"
STATUSES = (PASS, FAIL, PASS_PROB, SKIPPED)


@dataclass
class Check:
    id: str
    paper_ref: str
    status: str
    lhs: str = ""
    rhs: str = ""
    elapsed_ms: float | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status}")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self, timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "paper_ref": self.paper_ref,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed_ms": round(self.elapsed_ms, 3) if timings and self.elapsed_ms is not None else None,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    suite: str
    params: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def record(self, id: str, paper_ref: str, ok: bool, lhs: Any = "", rhs: Any = "", detail: str = "",
               probabilistic: bool = False, elapsed_ms: float | None = None) -> Check:
        if ok:
            status = PASS_PROB if probabilistic else PASS
        else:
            status = FAIL
        return self.add(Check(id, paper_ref, status, str(lhs), str(rhs), elapsed_ms, detail))

    def skip(self, id: str, paper_ref: str, detail: str) -> Check:
        return self.add(Check(id, paper_ref, SKIPPED, detail=detail))

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for k, v in other.meta.items():
            self.meta.setdefault(k, v)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, int]:
        counts = {s: 0 for s in STATUSES}
        for c in self.checks:
            counts[c.status] += 1
        counts["total"] = len(self.checks)
        return counts

    def as_dict(self, timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.as_dict(timings) for c in sorted(self.checks, key=lambda c: c.id)],
            "summary": self.summary(),
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.as_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


@contextmanager
def stopwatch() -> Iterator[list[float]]:
    box: list[float] = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - t0) * 1000.0
