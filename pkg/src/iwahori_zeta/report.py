"""Structured verification outcomes."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class VerifyReport:
    check: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    witness: Any = None
    millis: float | None = None
    children: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.effective_status != FAIL

    @property
    def effective_status(self):
        """Own status, or fail if any descendant failed (even after being added)."""
        if self.status == FAIL or any(not c.ok for c in self.children):
            return FAIL
        return self.status

    def add(self, child):
        self.children.append(child)
        return child

    def fail(self, witness=None):
        self.status = FAIL
        if witness is not None and self.witness is None:
            self.witness = witness
        return self

    def failures(self):
        """Leaf reports with status fail."""
        if self.ok:
            return []
        leaves = [r for c in self.children for r in c.failures()]
        return leaves or [self]

    def to_dict(self, timing=False):
        out = {"check": self.check, "params": self.params, "status": self.effective_status}
        if self.witness is not None:
            out["witness"] = self.witness
        out["millis"] = round(self.millis, 1) if timing and self.millis is not None else None
        if self.notes:
            out["notes"] = list(self.notes)
        if self.children:
            out["children"] = [c.to_dict(timing) for c in self.children]
        return out

    def to_json(self, timing=False):
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False)

    def lines(self, indent=0):
        pad = "  " * indent
        extra = f"  witness={json.dumps(self.witness)}" if self.witness is not None else ""
        out = [f"{pad}[{self.effective_status}] {self.check} {json.dumps(self.params)}{extra}"]
        for note in self.notes:
            out.append(f"{pad}  note: {note}")
        for c in self.children:
            out.extend(c.lines(indent + 1))
        return out


@contextmanager
def timed(report):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.millis = (time.perf_counter() - start) * 1000.0
