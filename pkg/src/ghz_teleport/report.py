"""Serialization of sweep results (CSV and JSON)."""
from __future__ import annotations

import csv
import json

SCHEMA_VERSION = 1
CSV_HEADER = (
    "scheme",
    "theta",
    "phi",
    "noise",
    "p",
    "placement",
    "avg_fidelity_sim",
    "avg_fidelity_closed",
    "abs_dev",
)


def fmt(x) -> str:
    """Fixed float formatting shared by every writer; ``None`` becomes blank."""
    if x is None:
        return ""
    return format(float(x), ".12g")


def csv_row(report) -> list[str]:
    return [
        report.scheme.value,
        fmt(report.theta),
        fmt(report.phi),
        report.noise.value,
        fmt(report.p),
        str(report.placement),
        fmt(report.avg_fidelity_sim),
        fmt(report.avg_fidelity_closed),
        fmt(report.abs_deviation),
    ]


def sweep_csv(reports, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(csv_row(r))


def sweep_json(reports, fh, **meta) -> None:
    doc = {"schema_version": SCHEMA_VERSION, **meta, "rows": [r.to_dict() for r in reports]}
    json.dump(doc, fh, indent=2, sort_keys=True)
    fh.write("\n")
