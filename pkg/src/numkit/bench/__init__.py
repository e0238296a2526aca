"""Timed parameterized benchmarks, an append-only result store and regression reports."""

from .. import __version__
from ._core import BenchError, BenchmarkCase, BenchmarkRecord, case_id, environment_fingerprint, run_case
from .report import CompareRow, compare_runs, export_csv, format_rows, scaling_exponent
from .store import append_records, load_records
from .suites import SUITES, make_cases, parse_params


def run_suite(suite=None, params=None, out=None, version=__version__, repeats=10, warmup=3,
              progress=None):
    """Run matching cases one after another; append records to ``out`` if given.

    ``params`` maps a key to a value or a list of values.  Returns the records,
    which may be empty when the filters match nothing.
    """
    params = {k: v if isinstance(v, list) else [v] for k, v in (params or {}).items()}
    records = []
    for case in make_cases(suite, params, repeats=repeats, warmup=warmup):
        rec = run_case(case, version)
        if out is not None:
            append_records(out, [rec])
        if progress is not None:
            progress(rec)
        records.append(rec)
    return records


__all__ = [
    "SUITES", "BenchError", "BenchmarkCase", "BenchmarkRecord", "CompareRow",
    "append_records", "case_id", "compare_runs", "environment_fingerprint", "export_csv",
    "format_rows", "load_records", "make_cases", "parse_params", "run_case", "run_suite",
    "scaling_exponent",
]
