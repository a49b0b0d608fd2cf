"""Residual reports and their JSON, CSV and markdown renderings.

Floats are rounded to 12 significant digits when a record is created, so a
report written to JSON and read back compares equal to the original.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from dataclasses import asdict, dataclass, field
from pathlib import Path

SCHEMA_VERSION = "axblab.report/1"
DIGITS = 12


def round_sig(x, digits=DIGITS):
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{digits}g}")


def _fmt(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.{DIGITS}g}"
    return str(x)


def _round_tree(obj):
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return obj


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    residual: float
    tolerance: float
    criterion: int | None = None
    note: str = ""
    detail: dict = field(default_factory=dict)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = round_sig(self.residual)
        self.tolerance = round_sig(self.tolerance)
        self.detail = _round_tree(self.detail)
        # NaN never passes
        self.passed = bool(self.residual <= self.tolerance)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        passed = d.pop("passed", None)
        rec = cls(**d)
        if passed is not None and passed != rec.passed:
            raise ValueError(f"record {rec.check_id}: stored pass flag disagrees with residual/tolerance")
        return rec


def environment_snapshot(threads=1):
    import numpy
    import scipy

    return {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "threads": threads,
    }


@dataclass
class ResidualReport:
    suite: str
    seed: int
    records: list
    config: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)
    schema: str = SCHEMA_VERSION

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]

    def by_criterion(self):
        out = {}
        for r in self.records:
            if r.criterion is not None:
                out.setdefault(r.criterion, []).append(r)
        return dict(sorted(out.items()))

    def to_dict(self):
        return {
            "schema": self.schema,
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "config": _round_tree(self.config),
            "environment": self.environment,
            "records": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(d["suite"], d["seed"], [CheckRecord.from_dict(r) for r in d["records"]],
                   d.get("config", {}), d.get("environment", {}), d["schema"])


def to_json(report):
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def from_json(text):
    return ResidualReport.from_dict(json.loads(text))


CSV_FIELDS = ("check_id", "criterion", "anchor", "residual", "tolerance", "passed", "note")


def to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in sorted(report.records, key=lambda r: r.check_id):
        w.writerow([_fmt(getattr(r, k)) if getattr(r, k) is not None else "" for k in CSV_FIELDS])
    return buf.getvalue()


def to_markdown(report):
    """One-table summary, failures first."""
    status = "PASS" if report.passed else "FAIL"
    lines = [
        f"# axblab report: {report.suite}",
        "",
        f"- status: **{status}** ({len(report.records) - len(report.failures)}/{len(report.records)} checks pass)",
        f"- seed: {report.seed}",
        f"- schema: {report.schema}",
        "",
        "| result | check | criterion | residual | tolerance | anchor |",
        "|---|---|---|---|---|---|",
    ]
    ordered = sorted(report.records, key=lambda r: (r.passed, r.check_id))
    for r in ordered:
        crit = "" if r.criterion is None else str(r.criterion)
        lines.append(f"| {'pass' if r.passed else 'FAIL'} | {r.check_id} | {crit} | {_fmt(r.residual)} "
                     f"| {_fmt(r.tolerance)} | {r.anchor} |")
    return "\n".join(lines) + "\n"


FORMATS = {"json": (to_json, "report.json"), "csv": (to_csv, "report.csv"),
           "markdown": (to_markdown, "summary.md")}


def emit(report, fmt, out_dir):
    """Write one rendering of ``report`` into ``out_dir``; returns the path."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    render, name = FORMATS[fmt]
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(report), encoding="utf-8")
    return path


__all__ = [
    "SCHEMA_VERSION", "CheckRecord", "ResidualReport", "environment_snapshot", "round_sig", "to_json",
    "from_json", "to_csv", "to_markdown", "emit", "FORMATS",
]
