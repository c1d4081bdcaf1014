"""Verification records, the anchor table, and JSON / JSON-lines / CSV writers.

Reference labels for every check live in :data:`ANCHORS` and nowhere else; the
table is validated at import time so a record cannot carry an unknown label.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

SCHEMA = 1
STATUSES = ("pass", "fail", "observe", "not applicable")
PROVENANCE = ("PAPER", "DERIVED", "TRIVIAL")
CSV_HEADER = ("t", "value", "fit_slope", "anchor")

# check id -> (reference label, provenance of the expected value)
ANCHORS: dict[str, tuple[str, str]] = {
    "symbols.ode_oracle": ("Eq. (2.1)", "DERIVED"),
    "symbols.branch_continuity": ("Eq. (2.1)", "DERIVED"),
    "symbols.closed_forms": ("Sec. 5 e_1^0, e_0^0, e_1^1", "PAPER"),
    "thm31.condition": ("Thm 3.1 (3.1)", "PAPER"),
    "thm31.slope": ("Thm 3.1 (3.2)", "PAPER"),
    "thm31.little_o": ("Thm 3.1 (3.3)", "PAPER"),
    "thm31.gamma_monotone": ("Thm 3.1 (3.2)", "DERIVED"),
    "thm32.slope": ("Thm 3.2 (3.5)", "PAPER"),
    "thm32.little_o": ("Thm 3.2 (3.6)", "PAPER"),
    "thm33.sandwich": ("Thm 3.3", "PAPER"),
    "thm34.lower.config": ("Thm 3.4 (3.7)", "PAPER"),
    "thm34.lower.mass": ("Thm 3.4 (3.7)", "PAPER"),
    "thm34.lower.first-moment": ("Thm 3.4 (3.7)", "PAPER"),
    "thm34.lower.displacement": ("Thm 3.4 (3.7)", "PAPER"),
    "thm34.upper": ("Thm 3.4 (3.8)", "PAPER"),
    "lemma43.lower": ("Lemma 4.3 (4.6)/(4.7)", "PAPER"),
    "remark42.upper": ("Remark 4.2", "PAPER"),
    "est51.ratio": ("Eq. (5.1)", "PAPER"),
    "id52.identity": ("Eq. (5.2)", "DERIVED"),
    "id52.cross": ("Eq. (5.2)", "DERIVED"),
    "lemma61.growth": ("Lemma 6.1 (6.1)", "DERIVED"),
    "lemma62.growth": ("Lemma 6.2 (6.2)", "DERIVED"),
    "lemma63.growth": ("Lemma 6.3 (6.3)", "DERIVED"),
    "quadrature.richardson": ("Quadrature self-consistency", "DERIVED"),
}

CONDITION_NOTE = "condition (3.1) violated"

_LABEL = re.compile(r"^(Thm \d\.\d( \(\d\.\d\))?|Lemma \d\.\d( \(\d\.\d\)(/\(\d\.\d\))?)?|Remark \d\.\d"
                    r"|Eq\. \(\d\.\d\)|Sec\. \d .+|Quadrature self-consistency)$")


def _validate_anchors():
    for cid, (label, prov) in ANCHORS.items():
        if not _LABEL.match(label):
            raise RuntimeError(f"malformed anchor {label!r} for {cid}")
        if prov not in PROVENANCE:
            raise RuntimeError(f"unknown provenance {prov!r} for {cid}")


_validate_anchors()


def _clean(x):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item"):
        return _clean(x.item())
    return x


@dataclass
class Record:
    id: str
    status: str
    measured: dict
    tolerance: dict | None = None
    note: str | None = None

    def __post_init__(self):
        if self.id not in ANCHORS:
            raise KeyError(f"check id {self.id!r} has no anchor")
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def anchor(self) -> str:
        return ANCHORS[self.id][0]

    @property
    def provenance(self) -> str:
        return ANCHORS[self.id][1]

    def to_json(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "provenance": self.provenance, "status": self.status,
             "measured": _clean(self.measured), "tolerance": _clean(self.tolerance)}
        if self.note:
            d["note"] = self.note
        return d


def status(ok: bool) -> str:
    return "pass" if ok else "fail"


def matches(check_id: str, only: str | None) -> bool:
    if not only:
        return True
    return only in check_id or only in ANCHORS[check_id][0]


@dataclass
class Report:
    config: dict
    records: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def failed(self) -> bool:
        return any(r.status == "fail" for r in self.records)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "tool_version": __version__, "timestamp": self.timestamp,
                "config": _clean(self.config), "records": [r.to_json() for r in self.records],
                "timing": {k: round(v, 3) for k, v in self.timing.items()}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def csv_rows(self):
        for r in self.records:
            series = r.measured.get("series") if isinstance(r.measured, dict) else None
            if not series:
                continue
            slope = r.measured.get("slope", "")
            for t, v in zip(series["t"], series["value"]):
                yield (repr(float(t)), repr(float(v)), "" if slope == "" else repr(float(slope)), r.anchor)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.csv_rows())
        return buf.getvalue()


class RecordWriter:
    """Single writer: appends each record to a JSON-lines journal, then finalizes."""

    def __init__(self, report: Report, out: str | None, fmt: str = "json"):
        self.report = report
        self.out = Path(out) if out else None
        self.fmt = fmt
        self.journal = self.out.with_name(self.out.name + ".partial.jsonl") if self.out else None
        if self.journal:
            self.journal.write_text("")

    def add(self, record: Record, seconds: float):
        self.report.records.append(record)
        self.report.timing[record.id] = seconds
        if self.journal:
            with self.journal.open("a") as fh:
                fh.write(json.dumps(record.to_json()) + "\n")

    def finalize(self) -> str:
        text = self.report.to_csv() if self.fmt == "csv" else self.report.dumps() + "\n"
        if self.out:
            tmp = self.out.with_name(self.out.name + ".tmp")
            tmp.write_text(text)
            os.replace(tmp, self.out)
            self.journal.unlink(missing_ok=True)
        return text
