"""Synthetic timetables: tiny random ones for oracle checks and
hierarchical networks (local clusters plus a long-distance backbone)."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .timetable import DAY, Timetable, TimetableBuilder


def random_timetable(seed: int, n_stations: int = 6, n_trains: int = 10, *,
                     max_stops: int = 5, max_transfer: int = 6, window: int = DAY,
                     revisits: bool = True) -> Timetable:
    """Small random daily timetable with short dwells so that critical stop
    events are common.  ``window`` limits first departures to the first
    ``window`` minutes before the last hour of the day (use DAY for full spread)."""
    rng = random.Random(seed)
    b = TimetableBuilder()
    for i in range(n_stations):
        b.station(f"S{i}", rng.randint(0, max_transfer))
    for _ in range(n_trains):
        k = rng.randint(2, max(2, max_stops))
        route = [rng.randrange(n_stations)]
        while len(route) < k:
            s = rng.randrange(n_stations)
            if s == route[-1] or (not revisits and s in route):
                continue
            route.append(s)
        t = (DAY - 60 + rng.randrange(min(window, DAY))) % DAY
        stops = []
        for j, s in enumerate(route):
            if j == 0:
                stops.append((s, None, t))
                continue
            t += rng.randint(1, 40)
            arr = t % DAY
            if j == len(route) - 1:
                stops.append((s, arr, None))
            else:
                t += rng.randint(0, 6)
                stops.append((s, arr, t % DAY))
        b.train(stops)
    return b.build()


@dataclass(frozen=True)
class SyntheticSpec:
    stations: int = 100
    clusters: int = 10
    backbone_degree: int = 2
    trains_per_route: int = 6
    local_routes: int = 2
    seed: int = 1

    def __post_init__(self):
        if self.stations <= 0:
            raise ValueError("stations must be positive")
        if self.clusters <= 0 or self.clusters > self.stations:
            raise ValueError("clusters must lie in [1, stations]")
        if self.trains_per_route <= 0 or self.backbone_degree < 0 or self.local_routes <= 0:
            raise ValueError("degenerate synthetic parameters")


def _run_route(b: TimetableBuilder, rng: random.Random, route: list[int], trains: int,
               hop: tuple[int, int], first: int, last: int) -> None:
    hops = [rng.randint(*hop) for _ in route[1:]]
    dwells = [rng.randint(0, 3) for _ in route]
    span = max(1, last - first)
    for direction in (route, route[::-1]):
        hh = hops if direction is route else hops[::-1]
        dw = dwells if direction is route else dwells[::-1]
        offset = rng.randrange(span // trains + 1)
        for k in range(trains):
            t = first + offset + k * span // trains
            stops = []
            for j, s in enumerate(direction):
                if j == 0:
                    stops.append((s, None, t % DAY))
                    continue
                t += hh[j - 1]
                if j == len(direction) - 1:
                    stops.append((s, t % DAY, None))
                else:
                    a = t
                    t += dw[j]
                    stops.append((s, a % DAY, t % DAY))
            b.train(stops)


def generate_synthetic(spec: SyntheticSpec) -> Timetable:
    """Deterministic hierarchical network: each cluster gets a hub and local
    lines through its stations; hubs are joined by backbone lines."""
    rng = random.Random(spec.seed)
    b = TimetableBuilder()
    for i in range(spec.stations):
        b.station(f"st{i}", rng.randint(2, 10))
    ids = list(range(spec.stations))
    rng.shuffle(ids)
    clusters = [sorted(ids[c::spec.clusters]) for c in range(spec.clusters)]
    hubs = [cl[0] for cl in clusters]
    for cl in clusters:
        if len(cl) < 2:
            continue
        hub, rest = cl[0], cl[1:]
        rng.shuffle(rest)
        # each local line starts at the hub; together they cover the cluster
        parts = [rest[i::spec.local_routes] for i in range(spec.local_routes)]
        for part in parts:
            if part:
                _run_route(b, rng, [hub] + part, spec.trains_per_route, (2, 8), 5 * 60, 23 * 60)
    if spec.clusters > 1:
        order = hubs[:]
        rng.shuffle(order)
        # spanning backbone line through all hubs plus extra long-distance lines
        _run_route(b, rng, order, spec.trains_per_route, (15, 45), 6 * 60, 22 * 60)
        for _ in range(spec.backbone_degree * spec.clusters // 4):
            k = rng.randint(2, min(4, len(hubs)))
            line = rng.sample(hubs, k)
            _run_route(b, rng, line, max(1, spec.trains_per_route // 2), (20, 60), 6 * 60, 22 * 60)
    return b.build()
