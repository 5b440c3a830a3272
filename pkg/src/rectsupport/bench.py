"""Naive vs fast builder benchmark: wall time plus operation counters per (instance, engine)."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .generators import generate
from .oracle import naive_build_support
from .support import BuildStats
from .sweep import fast_build_support

CSV_COLUMNS = ("label", "n", "m", "engine", "ms", "edges", "inserts", "deletes", "queries", "occlusions")
ENGINES = ("naive", "fast")


@dataclass(frozen=True)
class BenchRecord:
    label: str
    n: int
    m: int
    engine: str
    ms: float
    edges: int
    inserts: int
    deletes: int
    queries: int
    occlusions: int
    steps: int = 0  # index-internal work; kept out of the CSV

    @property
    def ops(self) -> int:
        return self.inserts + self.deletes + self.queries + self.steps

    def row(self) -> list:
        return [getattr(self, c) if c != "ms" else f"{self.ms:.3f}" for c in CSV_COLUMNS]


def time_build(inst, engine: str, *, backend: str | None = None, repeat: int = 1) -> BenchRecord:
    """Best-of-``repeat`` wall time; counters come from the last run."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    best = float("inf")
    for _ in range(max(1, repeat)):
        stats = BuildStats()
        t0 = time.perf_counter()
        if engine == "naive":
            g = naive_build_support(inst, validate=False, stats=stats)
        else:
            g = fast_build_support(inst, validate=False, stats=stats, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return BenchRecord(
        inst.label, inst.n, inst.m, engine, best * 1000.0, len(g),
        stats.inserts, stats.deletes, stats.queries, stats.occlusions, stats.steps,
    )


def run_bench(
    sizes: Sequence[int],
    kinds: Sequence[str] = ("squares",),
    *,
    m: int = 256,
    seed: int = 0,
    engines: Sequence[str] = ENGINES,
    naive_max_n: int | None = 1 << 14,
    repeat: int = 1,
    backend: str | None = None,
) -> list[BenchRecord]:
    """One instance per (kind, n); the naive engine is skipped above ``naive_max_n``."""
    records = []
    for kind in kinds:
        for n in sizes:
            inst = generate(kind, n, m, seed)
            for engine in engines:
                if engine == "naive" and naive_max_n is not None and n > naive_max_n:
                    continue
                records.append(time_build(inst, engine, backend=backend, repeat=repeat))
    return records


def write_csv(records: Iterable[BenchRecord], stream=None) -> str:
    buf = stream if stream is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue() if stream is None else ""


def doubling_ratios(records: Sequence[BenchRecord], engine: str = "fast", key: str = "ms") -> list[float]:
    """value(2n) / value(n) for consecutive doublings of n; records should share one kind."""
    by_n = {}
    for r in records:
        if r.engine == engine:
            by_n[r.n] = getattr(r, key)
    out = []
    for n in sorted(by_n):
        if 2 * n in by_n and by_n[n] > 0:
            out.append(by_n[2 * n] / by_n[n])
    return out


def summarize(records: Sequence[BenchRecord], engine: str = "fast") -> dict[str, float]:
    wall = doubling_ratios(records, engine, "ms")
    ops = doubling_ratios(records, engine, "ops")
    return {
        "wall_ratio_mean": statistics.fmean(wall) if wall else float("nan"),
        "ops_ratio_mean": statistics.fmean(ops) if ops else float("nan"),
        "ops_ratio_max": max(ops) if ops else float("nan"),
    }


__all__ = [
    "BenchRecord",
    "CSV_COLUMNS",
    "ENGINES",
    "doubling_ratios",
    "run_bench",
    "summarize",
    "time_build",
    "write_csv",
]
