"""JSON (and optional flat CSV) reports of verification records."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version as _dist_version
from typing import Sequence

from .verify import FAIL, INAPPLICABLE, PASS, VerificationRecord

SCHEMA_VERSION = 1


def tool_version() -> str:
    try:
        return _dist_version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


@dataclass
class ReportDocument:
    config: dict
    records: list[VerificationRecord]
    statistics: dict | None = None
    version: str = field(default_factory=lambda: f"dimquot {tool_version()} schema {SCHEMA_VERSION}")

    @property
    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, INAPPLICABLE: 0}
        for r in self.records:
            counts[r.verdict] += 1
        return counts

    def to_json(self, deterministic: bool = False) -> dict:
        doc = {
            "version": self.version,
            "config": self.config,
            "records": [r.to_json(deterministic) for r in self.records],
            "summary": self.summary,
        }
        if self.statistics:
            doc["statistics"] = self.statistics
        return doc


def render_report(doc: ReportDocument, deterministic: bool = False) -> str:
    return json.dumps(doc.to_json(deterministic), indent=2, ensure_ascii=False) + "\n"


def emit_report(doc: ReportDocument, path: str, deterministic: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_report(doc, deterministic))


CSV_COLUMNS = ("check", "group", "order", "subgroup_orders", "d_order", "norm_order", "invariant_factors", "exponent", "verdict")


def emit_csv(records: Sequence[VerificationRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            q = r.quotient or {}
            factors = q.get("invariant_factors")
            w.writerow(
                [
                    r.check,
                    r.group["name"],
                    r.group["order"],
                    " ".join(str(s["order"]) for s in r.subgroups),
                    r.d_order,
                    r.norm_order,
                    " ".join(map(str, factors)) if factors is not None else "",
                    q.get("exponent", ""),
                    r.verdict,
                ]
            )
