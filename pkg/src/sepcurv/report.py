"""Deterministic serialization of curvature reports.

A report file is one '#'-prefixed header line carrying the timestamp (the
only non-deterministic bytes in the file) followed by a canonical body:
sorted-key, two-space-indented JSON, or CSV records.  For fixed inputs and
seed the body is byte-identical regardless of thread count or generation
time; `read_report_body` strips the header so callers can compare bodies
directly.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from typing import Sequence

from .curvature import CurvatureReport, ScanRecord

REPORT_FORMAT_VERSION = 1
_CSV_COLUMNS = (
    "sample", "kind", "i", "j", "k_special", "k_oracle",
    "residual_flat", "residual_constk", "flagged", "error", "coords", "u", "w",
)


def _vector(values) -> str:
    return ";".join(repr(float(v)) for v in values)


def _record_dict(rec: ScanRecord) -> dict:
    out: dict = {"sample": rec.sample, "kind": rec.kind, "coords": list(rec.coords)}
    if rec.kind == "pair":
        out["i"] = rec.i
        out["j"] = rec.j
        out["k_special"] = rec.k_special
        out["k_oracle"] = rec.k_oracle
        out["residual_flat"] = rec.residual_flat
        if rec.residual_constk is not None:
            out["residual_constk"] = rec.residual_constk
        out["flagged"] = rec.flagged
    elif rec.kind == "plane":
        out["u"] = list(rec.u)
        out["w"] = list(rec.w)
        out["k_oracle"] = rec.k_oracle
    else:
        out["error"] = rec.error
    return out


def report_body_json(
    report: CurvatureReport,
    *,
    input_digest: str,
    tool_version: str,
    sampling_failures: Sequence[tuple[int, str]] = (),
) -> str:
    """Canonical JSON body: sorted keys, 2-space indent, trailing newline."""
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "tool": "sepcurv",
        "tool_version": tool_version,
        "input_digest": input_digest,
        "seed": report.seed,
        "n": report.n,
        "constancy_tol": report.constancy_tol,
        "oblique_planes_per_point": report.oblique_per_point,
        "sampling_failures": [
            {"draw_index": idx, "error": msg} for idx, msg in sampling_failures
        ],
        "records": [_record_dict(rec) for rec in report.records],
        "summary": {
            "points": report.point_count,
            "values": report.value_count,
            "failures": report.failure_count,
            "k_min": report.k_min,
            "k_max": report.k_max,
            "k_mean": report.k_mean,
            "spread": report.spread,
            "verdict": report.verdict,
            "constant_estimate": report.constant_estimate,
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_body_csv(
    report: CurvatureReport,
    sampling_failures: Sequence[tuple[int, str]] = (),
) -> str:
    """Record-level CSV export with the same determinism contract as JSON."""

    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, float):
            return repr(value)
        return str(value)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for rec in report.records:
        writer.writerow(
            [
                cell(rec.sample),
                cell(rec.kind),
                cell(rec.i),
                cell(rec.j),
                cell(rec.k_special),
                cell(rec.k_oracle),
                cell(rec.residual_flat),
                cell(rec.residual_constk),
                cell(rec.flagged if rec.kind == "pair" else None),
                cell(rec.error),
                _vector(rec.coords),
                _vector(rec.u) if rec.u is not None else "",
                _vector(rec.w) if rec.w is not None else "",
            ]
        )
    for idx, msg in sampling_failures:
        writer.writerow(
            [cell(idx), "sample_error", "", "", "", "", "", "", "", cell(msg), "", "", ""]
        )
    return buf.getvalue()


def write_report(path: str, body: str, timestamp: str | None = None) -> None:
    """Write a report file: one commented timestamp line, then the body."""
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# sepcurv report generated {timestamp}\n")
        fh.write(body)


def read_report_body(path: str) -> str:
    """Return a report file's body with '#' header lines stripped."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.readlines()
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        start += 1
    return "".join(lines[start:])
