from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Violation:
    code: str
    message: str
    witness: Any = None

    def as_dict(self):
        d = {"code": self.code, "message": self.message}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class ValidationReport:
    """Collected violations; an empty report means the object is valid."""

    subject: str = ""
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, code, message, witness=None):
        self.violations.append(Violation(code, message, witness))

    def extend(self, other, prefix=""):
        for v in other.violations:
            self.violations.append(Violation(prefix + v.code, v.message, v.witness))

    def codes(self):
        return [v.code for v in self.violations]

    def as_dict(self):
        return {"subject": self.subject, "ok": self.ok,
                "violations": [v.as_dict() for v in self.violations]}


@dataclass
class ClauseReport:
    """Ordered clause checks; ``failing`` is the first clause that did not hold."""

    subject: str = ""
    clauses: list = field(default_factory=list)   # (name, bool, detail)
    extras: dict = field(default_factory=dict)     # diagnostics that are not clauses

    def record(self, name, holds, detail=None):
        self.clauses.append((name, bool(holds), detail))
        return bool(holds)

    @property
    def ok(self):
        return all(h for _, h, _ in self.clauses)

    def __bool__(self):
        return self.ok

    @property
    def failing(self):
        for name, holds, _ in self.clauses:
            if not holds:
                return name
        return None

    def holds(self, name):
        for n, h, _ in self.clauses:
            if n == name:
                return h
        raise KeyError(name)

    def as_dict(self):
        out = {"subject": self.subject, "ok": self.ok, "failing": self.failing,
               "clauses": [{"name": n, "holds": h, **({"detail": d} if d is not None else {})}
                           for n, h, d in self.clauses]}
        if self.extras:
            out["diagnostics"] = dict(self.extras)
        return out
