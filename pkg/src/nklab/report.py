"""Check records, suite reports and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

SCHEMA_VERSION = 1
SIGNIFICANT = 10  # digits kept for reported floats


def _clean(x: Any) -> Any:
    """JSON-safe, platform-stable rendering of numbers and containers."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if hasattr(x, "tolist") and not isinstance(x, (int, float)):
        return _clean(x.tolist())
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    if isinstance(x, int):
        return int(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.{SIGNIFICANT}g}")
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return _clean(float(x))


@dataclass
class Record:
    name: str
    anchor: str
    kind: str            # "residual" or "verdict"
    value: Any
    tolerance: Optional[float]
    status: str          # "pass" or "fail"
    entry: Optional[str] = None
    vacuous: bool = False
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return _clean({
            "name": self.name, "anchor": self.anchor, "kind": self.kind, "value": self.value,
            "tolerance": self.tolerance, "status": self.status, "entry": self.entry,
            "vacuous": self.vacuous, "details": self.details,
        })


def residual(name: str, anchor: str, value: float, tol: float, entry: str | None = None,
             details: dict | None = None) -> Record:
    value = float(value)
    ok = math.isfinite(value) and value < tol
    return Record(name, anchor, "residual", value, tol, "pass" if ok else "fail", entry, False, details or {})


def verdict(name: str, anchor: str, ok: bool, observed: Any, entry: str | None = None,
            details: dict | None = None, vacuous: bool = False) -> Record:
    return Record(name, anchor, "verdict", observed, None, "pass" if ok else "fail", entry, vacuous, details or {})


@dataclass
class SuiteReport:
    suite: str
    records: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    error: Optional[str] = None

    def add(self, rec: Record, seconds: float | None = None) -> Record:
        self.records.append(rec)
        if seconds is not None:
            self.timing[f"{rec.entry or '-'}:{rec.name}"] = seconds
        return rec

    def summary(self) -> dict:
        passed = sum(r.passed for r in self.records)
        failed = len(self.records) - passed + (1 if self.error else 0)
        return {"total": len(self.records), "passed": passed, "failed": failed,
                "vacuous": sum(r.vacuous for r in self.records)}

    def to_dict(self) -> dict:
        return {"records": [r.to_dict() for r in self.records], "summary": self.summary(),
                "error": self.error}


class Stopwatch:
    def __init__(self):
        self.t0 = time.perf_counter()

    def lap(self) -> float:
        t = time.perf_counter()
        out, self.t0 = t - self.t0, t
        return out


def build_report(config: dict, reports: list) -> dict:
    """Report document; the ``timing`` block is the only run-dependent part."""
    reports = sorted(reports, key=lambda r: r.suite)
    total = {"total": 0, "passed": 0, "failed": 0, "vacuous": 0}
    for r in reports:
        for k, v in r.summary().items():
            total[k] += v
    return {
        "schema_version": SCHEMA_VERSION,
        "config": _clean(config),
        "suites": {r.suite: r.to_dict() for r in reports},
        "summary": total,
        "timing": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "seconds": {r.suite: _clean(r.timing) for r in reports},
        },
    }


def without_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timing"}


def write_report(out_dir, doc: dict) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jpath = out / "report.json"
    jpath.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    cpath = out / "residuals.csv"
    with cpath.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "entry", "name", "anchor", "kind", "value", "tolerance", "status"])
        for suite, body in doc["suites"].items():
            for r in body["records"]:
                w.writerow([suite, r["entry"] or "", r["name"], r["anchor"], r["kind"],
                            json.dumps(r["value"]), "" if r["tolerance"] is None else r["tolerance"],
                            r["status"]])
    return jpath, cpath
