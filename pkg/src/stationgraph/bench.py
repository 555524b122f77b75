"""Random-query benchmark: baseline search vs hierarchy search on one query set.

Every answer is cross-checked; a mismatch is a correctness alarm and aborts.
"""
from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .chquery import ch_profile_query, ch_time_query
from .connections import equiv_key
from .contraction import Hierarchy
from .graph import StationGraph
from .queries import profile_query, time_query
from .timetable import DAY

COLUMNS = ("engine", "kind", "delete_mins_mean", "time_us_mean", "speedup")


class BenchmarkMismatch(RuntimeError):
    def __init__(self, kind: str, query: tuple, expected, got):
        self.query = query
        super().__init__(f"{kind} query {query}: baseline {expected} != ch {got}")


@dataclass
class BenchmarkRow:
    engine: str
    kind: str
    queries: int
    delete_mins_mean: float
    time_us_mean: float
    speedup: float


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow] = field(default_factory=list)

    def row(self, engine: str, kind: str) -> Optional[BenchmarkRow]:
        return next((r for r in self.rows if r.engine == engine and r.kind == kind), None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([r.engine, r.kind, f"{r.delete_mins_mean:.2f}", f"{r.time_us_mean:.1f}",
                        f"{r.speedup:.2f}"])
        return buf.getvalue()


def make_queries(n_stations: int, count: int, seed: int, with_time: bool = True) -> list[tuple]:
    """Seeded random (A, B[, t0]) queries with A != B when possible."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a = rng.randrange(n_stations)
        b = rng.randrange(n_stations)
        if n_stations > 1:
            while b == a:
                b = rng.randrange(n_stations)
        out.append((a, b, rng.randrange(DAY)) if with_time else (a, b))
    return out


def _profile_keys(res) -> list[tuple]:
    return sorted(equiv_key(c) for c in res)


def _rows(kind: str, stats: dict[str, tuple[list[int], list[float]]]) -> list[BenchmarkRow]:
    base_t = sum(stats["dijkstra"][1]) / len(stats["dijkstra"][1])
    rows = []
    for engine, (dm, ts) in stats.items():
        t = sum(ts) / len(ts)
        rows.append(BenchmarkRow(engine, kind, len(dm), sum(dm) / len(dm), t * 1e6,
                                 base_t / t if t > 0 else float("inf")))
    return rows


def run_benchmark(g: StationGraph, h: Hierarchy, queries: int = 1000, seed: int = 1,
                  profile_queries: Optional[int] = None) -> BenchmarkReport:
    """Time and profile queries on both engines; profile count defaults to a tenth."""
    report = BenchmarkReport()
    if queries <= 0 or g.n == 0:
        return report
    if profile_queries is None:
        profile_queries = max(1, queries // 10)
    stats = {"dijkstra": ([], []), "ch": ([], [])}
    for q in make_queries(g.n, queries, seed):
        t = time.perf_counter()
        x = time_query(g, *q)
        t1 = time.perf_counter()
        y = ch_time_query(h, *q)
        t2 = time.perf_counter()
        if x.arrival != y.arrival:
            raise BenchmarkMismatch("time", q, x.arrival, y.arrival)
        stats["dijkstra"][0].append(x.delete_mins)
        stats["dijkstra"][1].append(t1 - t)
        stats["ch"][0].append(y.delete_mins)
        stats["ch"][1].append(t2 - t1)
    report.rows += _rows("time", stats)
    if profile_queries <= 0:
        return report
    stats = {"dijkstra": ([], []), "ch": ([], [])}
    for q in make_queries(g.n, profile_queries, seed + 1, with_time=False):
        t = time.perf_counter()
        x = profile_query(g, *q)
        t1 = time.perf_counter()
        y = ch_profile_query(h, *q)
        t2 = time.perf_counter()
        if _profile_keys(x) != _profile_keys(y):
            raise BenchmarkMismatch("profile", q, len(x), len(y))
        stats["dijkstra"][0].append(x.delete_mins)
        stats["dijkstra"][1].append(t1 - t)
        stats["ch"][0].append(y.delete_mins)
        stats["ch"][1].append(t2 - t1)
    report.rows += _rows("profile", stats)
    return report
