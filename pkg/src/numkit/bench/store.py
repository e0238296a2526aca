"""Append-only newline-delimited JSON result store."""

import json

from ._core import BenchError, BenchmarkRecord


def append_records(path, records):
    """Append one JSON line per record; existing lines are never rewritten."""
    try:
        with open(path, "a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(rec.to_json() + "\n")
    except OSError as exc:
        raise BenchError(f"cannot write store {path}: {exc}") from exc


def load_records(path):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise BenchError(f"cannot read store {path}: {exc}") from exc
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            out.append(BenchmarkRecord.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise BenchError(f"{path}:{lineno}: malformed record ({exc})") from exc
    return out
