"""Check reports and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

REPORT_VERSION = "1"
MAX_STORED_VIOLATIONS = 20


def _clean(v):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return _clean(v.item())
    return v


@dataclass
class CheckReport:
    check_id: str
    suite: str
    oracle: str
    config: dict
    mode: str
    status: str = "pass"
    lhs: float | None = None
    rhs: float | None = None
    extremal_ratio: float | None = None
    instances: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    flagged: int = 0
    reason: str = ""
    runtime: float = 0.0

    def add_violation(self, record: dict) -> None:
        self.violation_count += 1
        self.status = "fail"
        if len(self.violations) < MAX_STORED_VIOLATIONS:
            self.violations.append(record)

    def to_json(self, with_runtime: bool = False) -> dict:
        out = {"check_id": self.check_id, "suite": self.suite, "oracle": self.oracle, "config": self.config,
               "mode": self.mode, "status": self.status, "lhs": self.lhs, "rhs": self.rhs,
               "extremal_ratio": self.extremal_ratio, "instances": self.instances,
               "violation_count": self.violation_count, "violations": self.violations,
               "flagged": self.flagged, "reason": self.reason}
        if with_runtime:
            out["runtime"] = self.runtime
        return _clean(out)

    @classmethod
    def from_json(cls, d: dict) -> "CheckReport":
        keys = cls.__dataclass_fields__
        return cls(**{k: v for k, v in d.items() if k in keys})


def report_document(config: dict, reports: list[CheckReport], with_runtime: bool = False) -> dict:
    return {"version": REPORT_VERSION, "config": _clean(config),
            "reports": [r.to_json(with_runtime) for r in reports]}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(dumps(doc))


def write_csv(path: str | Path, reports: list[CheckReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check_id", "suite", "oracle", "m", "tau", "mode", "status", "instances",
                    "violations", "extremal_ratio", "lhs", "rhs"])
        for r in reports:
            w.writerow([r.check_id, r.suite, r.oracle, r.config.get("m"), r.config.get("tau"), r.mode, r.status,
                        r.instances, r.violation_count, _fmt(r.extremal_ratio), _fmt(r.lhs), _fmt(r.rhs)])


def _fmt(v):
    return "" if v is None else repr(v) if isinstance(v, float) else v
