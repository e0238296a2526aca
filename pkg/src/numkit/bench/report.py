"""Regression comparison, scaling fits and CSV export.

All output here is a pure function of the records; timestamps and
environment fields are never printed.
"""

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass

import numpy as np

from ._core import BenchError


@dataclass(frozen=True)
class CompareRow:
    case_id: str
    median_a: float
    median_b: float
    ratio: float
    flag: str  # "regression", "improvement", "" or "only_a"/"only_b"


def _pooled_medians(records, version):
    by_case = {}
    for r in records:
        if r.version == version:
            by_case.setdefault(r.case_id, []).extend(r.timings)
    return {cid: statistics.median(ts) for cid, ts in by_case.items()}


def compare_runs(records, version_a, version_b, threshold=1.3):
    """Per-case ratio ``median_b / median_a`` of timings pooled per version.

    Ratios above ``threshold`` are regressions, below ``1/threshold``
    improvements.  Rows are sorted by case id.
    """
    if not threshold > 1:
        raise ValueError("threshold must exceed 1")
    med_a = _pooled_medians(records, version_a)
    med_b = _pooled_medians(records, version_b)
    for label, med in ((version_a, med_a), (version_b, med_b)):
        if not med:
            raise BenchError(f"version {label!r} not found in store")
    rows = []
    for cid in sorted(set(med_a) | set(med_b)):
        a, b = med_a.get(cid, math.nan), med_b.get(cid, math.nan)
        if cid not in med_b:
            rows.append(CompareRow(cid, a, b, math.nan, "only_a"))
            continue
        if cid not in med_a:
            rows.append(CompareRow(cid, a, b, math.nan, "only_b"))
            continue
        ratio = b / a
        flag = "regression" if ratio > threshold else "improvement" if ratio < 1 / threshold else ""
        rows.append(CompareRow(cid, a, b, ratio, flag))
    return rows


def _num(x):
    return None if math.isnan(x) else x


def format_rows(rows, fmt="table"):
    if fmt == "json":
        payload = [{"case_id": r.case_id, "median_a": _num(r.median_a),
                    "median_b": _num(r.median_b), "ratio": _num(r.ratio), "flag": r.flag}
                   for r in rows]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "median_a", "median_b", "ratio", "flag"])
        for r in rows:
            w.writerow([r.case_id] + ["" if math.isnan(v) else repr(v)
                                      for v in (r.median_a, r.median_b, r.ratio)] + [r.flag])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    header = ("case", "median_a [s]", "median_b [s]", "ratio", "flag")
    body = [(r.case_id, f"{r.median_a:.6g}", f"{r.median_b:.6g}", f"{r.ratio:.3f}", r.flag)
            for r in rows]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in [header] + body]
    flagged = sum(1 for r in rows if r.flag == "regression")
    lines.append(f"{flagged} regression(s), "
                 f"{sum(1 for r in rows if r.flag == 'improvement')} improvement(s)")
    return "\n".join(lines) + "\n"


def scaling_exponent(ns, seconds):
    """Slope of the least-squares line through ``(log n, log t)``."""
    ns, seconds = np.asarray(ns, dtype=float), np.asarray(seconds, dtype=float)
    if ns.size < 2 or np.unique(ns).size < 2:
        raise ValueError("need timings at two or more distinct sizes")
    slope, _ = np.polyfit(np.log(ns), np.log(seconds), 1)
    return float(slope)


def export_csv(records, suite="spatial_query", version=None):
    """CSV of ``n,m,median_seconds`` for one suite, sorted by ``(m, n)``."""
    rows = []
    for r in records:
        if r.suite == suite and (version is None or r.version == version):
            rows.append((r.params.get("n"), r.params.get("m"), r.median))
    rows.sort(key=lambda t: (t[1] is None, t[1] or 0, t[0] or 0, t[2]))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "m", "median_seconds"])
    for n, m, med in rows:
        w.writerow(["" if n is None else n, "" if m is None else m, repr(med)])
    return buf.getvalue()
