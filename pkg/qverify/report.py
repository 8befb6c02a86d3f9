# qverify/report.py
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import pandas as pd

from .solver import CheckResult, Refuted, Unknown

COLUMNS = ["file", "procedure", "kind", "verdict", "total_s", "pruning_pct", "sat_pct", "counterexample"]

EXIT_VERIFIED, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3


@dataclass
class FileOutcome:
    """Everything learned about one input file."""

    path: str
    results: list[tuple[str, CheckResult]] = field(default_factory=list)  # (kind, result)
    cwp_bound: Fraction | None = None
    error: str | None = None


def _row(path: str, kind: str, r: CheckResult) -> dict:
    v = r.verdict
    if isinstance(v, Refuted):
        cex = v.counterexample
    elif isinstance(v, Unknown):
        cex = v.reason
    else:
        cex = ""
    return {
        "file": path,
        "procedure": r.vc.name,
        "kind": kind,
        "verdict": v.label,
        "total_s": round(r.timings.total_s, 4),
        "pruning_pct": round(r.timings.pruning_pct, 1),
        "sat_pct": round(r.timings.sat_pct, 1),
        "counterexample": cex,
    }


def to_frame(outcomes: Iterable[FileOutcome]) -> pd.DataFrame:
    rows = [_row(o.path, kind, r) for o in outcomes for kind, r in o.results]
    return pd.DataFrame(rows, columns=COLUMNS)


def exit_code(frame: pd.DataFrame, outcomes: Iterable[FileOutcome]) -> int:
    if any(o.error for o in outcomes):
        return EXIT_ERROR
    verdicts = set(frame["verdict"])
    if "refuted" in verdicts:
        return EXIT_REFUTED
    if "unknown" in verdicts:
        return EXIT_UNKNOWN
    return EXIT_VERIFIED


def summary_line(frame: pd.DataFrame) -> str:
    total = len(frame)
    verified = int((frame["verdict"] == "verified").sum())
    return f"{verified}/{total} verified"


def render_table(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(no verification conditions)"
    shown = frame.copy()
    shown["pruning_pct"] = shown["pruning_pct"].map(lambda x: f"{x:.0f}%")
    shown["sat_pct"] = shown["sat_pct"].map(lambda x: f"{x:.0f}%")
    return shown.to_string(index=False)


def show_bound(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{float(q):g} ({q.numerator}/{q.denominator})"


def to_json(frame: pd.DataFrame, code: int, outcomes: Iterable[FileOutcome]) -> str:
    payload: dict = {"results": json.loads(frame.to_json(orient="records")), "exit_code": code}
    bounds = {o.path: str(o.cwp_bound) for o in outcomes if o.cwp_bound is not None}
    if bounds:
        payload["cwp_bound"] = bounds
    errors = {o.path: o.error for o in outcomes if o.error}
    if errors:
        payload["errors"] = errors
    return json.dumps(payload, indent=2)
