"""Benchmark cases, records and the sequential runner."""

import json
import os
import platform
import statistics
import sysconfig
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from ..common import NumkitError


class BenchError(NumkitError):
    """Unknown suite, missing version label or unusable store."""


def case_id(suite, params):
    inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{suite}[{inner}]"


@dataclass
class BenchmarkCase:
    """``setup(**params)`` builds a context; only ``timed(ctx)`` is measured."""

    suite: str
    params: dict
    setup: object
    timed: object
    repeats: int = 10
    warmup: int = 3

    def __post_init__(self):
        if self.repeats < 3:
            raise ValueError("repeats must be at least 3")
        if self.warmup < 0:
            raise ValueError("warmup must be nonnegative")

    @property
    def id(self):
        return case_id(self.suite, self.params)


@dataclass
class BenchmarkRecord:
    case_id: str
    suite: str
    params: dict
    timings: list
    min: float
    median: float
    version: str
    timestamp: str
    env: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.timings or any(not t > 0 for t in self.timings):
            raise BenchError("timings must be positive")

    @classmethod
    def from_timings(cls, suite, params, timings, version, timestamp=None, env=None):
        timings = [float(t) for t in timings]
        if not timings:
            raise BenchError("no timings")
        return cls(case_id=case_id(suite, params), suite=suite, params=dict(params),
                   timings=timings, min=min(timings), median=statistics.median(timings),
                   version=str(version),
                   timestamp=timestamp or datetime.now(timezone.utc).isoformat(),
                   env=env if env is not None else environment_fingerprint())

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: d[k] for k in ("case_id", "suite", "params", "timings", "min",
                                        "median", "version", "timestamp")},
                   env=d.get("env", {}))


def _cpu_model():
    try:
        with open("/proc/cpuinfo", encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine()


def environment_fingerprint():
    return {
        "cpu": _cpu_model(),
        "cpu_count": os.cpu_count(),
        "machine": platform.machine(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "build_flags": sysconfig.get_config_var("CFLAGS") or "",
    }


def run_case(case, version, clock=time.perf_counter_ns):
    """Setup once, then ``warmup`` untimed and ``repeats`` timed calls."""
    ctx = case.setup(**case.params)
    for _ in range(case.warmup):
        case.timed(ctx)
    timings = []
    for _ in range(case.repeats):
        t0 = clock()
        case.timed(ctx)
        elapsed = clock() - t0
        if elapsed <= 0:
            raise BenchError(f"{case.id}: clock did not advance")
        timings.append(elapsed / 1e9)
    return BenchmarkRecord.from_timings(case.suite, case.params, timings, version)
