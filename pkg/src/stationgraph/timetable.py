"""Timetable model: stations, stop events, elementary connections and
periodic (daily) time arithmetic."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

DAY = 1440
ALL = -1
"""Sentinel stop event of the query source: may board any train departing
at or after the query time without a transfer and is never critical."""


def cycle_difference(t: int, t2: int) -> int:
    """Smallest non-negative ``l`` with ``l == t2 - t (mod 1440)``."""
    if not (0 <= t < DAY and 0 <= t2 < DAY):
        raise ValueError(f"times must lie in [0, {DAY - 1}], got {t}, {t2}")
    return (t2 - t) % DAY


def fmt_time(t: Optional[int]) -> str:
    """Absolute minutes as ``d+hh:mm`` (within-day values print as ``hh:mm``)."""
    if t is None:
        return "-"
    d, m = divmod(t, DAY)
    hm = f"{m // 60:02d}:{m % 60:02d}"
    return f"{d}+{hm}" if d else hm


def parse_time(text: str) -> int:
    """Inverse of :func:`fmt_time`; also accepts plain minute counts."""
    text = text.strip()
    day = 0
    if "+" in text:
        d, text = text.split("+", 1)
        day = int(d)
    if ":" in text:
        h, m = text.split(":")
        minutes = int(h) * 60 + int(m)
    else:
        minutes = int(text)
    return day * DAY + minutes


@dataclass(frozen=True)
class Station:
    id: int
    name: str
    transfer: int = 0


@dataclass(frozen=True)
class StopEvent:
    id: int
    station: int
    arrival: Optional[int]
    departure: Optional[int]
    train: Optional[int] = None


@dataclass(frozen=True)
class ElementaryConnection:
    z1: int
    z2: int
    s1: int
    s2: int
    td: int
    ta: int

    @property
    def length(self) -> int:
        return cycle_difference(self.td, self.ta)


def connection_length(c: ElementaryConnection) -> int:
    return cycle_difference(c.td, c.ta)


@dataclass(frozen=True)
class TimedLeg:
    """An elementary connection pinned to absolute departure/arrival times."""

    connection: ElementaryConnection
    dep: int
    arr: int


@dataclass
class Timetable:
    stations: list[Station] = field(default_factory=list)
    stop_events: list[StopEvent] = field(default_factory=list)
    elementary: list[ElementaryConnection] = field(default_factory=list)
    traffic_days: int = 1

    def __post_init__(self):
        self.reindex()

    def reindex(self) -> None:
        """Recompute the per-station and per-stop-event lookup arrays."""
        self.transfer = [s.transfer for s in self.stations]
        self.dwell: list[Optional[int]] = []
        self.crit: list[Optional[int]] = []
        for z in self.stop_events:
            if z.arrival is None or z.departure is None:
                dw = None
            else:
                dw = (z.departure - z.arrival) % DAY
            self.dwell.append(dw)
            tr = self.transfer[z.station] if 0 <= z.station < len(self.transfer) else 0
            self.crit.append(dw if dw is not None and dw < tr else None)
        # outgoing elementary connection per stop event (at most one per train stop)
        self.next_elem: dict[int, int] = {}
        for i, c in enumerate(self.elementary):
            self.next_elem.setdefault(c.z1, i)

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    def station_of(self, z: int) -> int:
        return self.stop_events[z].station

    def critical_dwell(self, z: int) -> Optional[int]:
        """Dwell time of ``z`` when it is below the station transfer time, else None."""
        if z == ALL:
            return None
        return self.crit[z]


@dataclass(frozen=True)
class StopEventContext:
    parr: Optional[int]
    ndep: Optional[int]
    res_d: Optional[int]
    res_a: Optional[int]
    critical_dep: bool
    critical_arr: bool


def stop_event_context(z1: int, z2: int, dep: int, arr: int, tt: Timetable) -> StopEventContext:
    """Previous arrival / next departure around a connection's boundary stop events."""
    for z in (z1, z2):
        if z != ALL and not 0 <= z < len(tt.stop_events):
            raise KeyError(f"unknown stop event {z}")
    parr = ndep = res_d = res_a = None
    if z1 != ALL and tt.dwell[z1] is not None:
        res_d = tt.dwell[z1]
        parr = dep - res_d
    if z2 != ALL and tt.dwell[z2] is not None:
        res_a = tt.dwell[z2]
        ndep = arr + res_a
    crit_d = parr is not None and res_d < tt.transfer[tt.station_of(z1)]
    crit_a = ndep is not None and res_a < tt.transfer[tt.station_of(z2)]
    return StopEventContext(parr, ndep, res_d, res_a, crit_d, crit_a)


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    index: Optional[int] = None
    condition: Optional[str] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_consistency(legs: Sequence[TimedLeg], tt: Timetable) -> ConsistencyReport:
    """Check the five consistency conditions of a timed leg sequence.

    Trains run daily, so the day-validity condition only demands a
    non-negative departure day.
    """
    if not legs:
        raise ValueError("empty connection")
    for i, leg in enumerate(legs):
        c = leg.connection
        if leg.dep < 0:
            return ConsistencyReport(False, i, "day", "departure before day 0")
        if leg.dep % DAY != c.td:
            return ConsistencyReport(False, i, "departure", f"dep {fmt_time(leg.dep)} != td {fmt_time(c.td)}")
        if leg.arr != leg.dep + connection_length(c):
            return ConsistencyReport(False, i, "arrival", f"arr {fmt_time(leg.arr)} != dep + length")
        if i + 1 < len(legs):
            nxt = legs[i + 1]
            if c.s2 != nxt.connection.s1:
                return ConsistencyReport(False, i, "station", f"station {c.s2} != {nxt.connection.s1}")
            gap = nxt.dep - leg.arr
            need = 0 if nxt.connection.z1 == c.z2 else tt.transfer[c.s2]
            if gap < need:
                return ConsistencyReport(
                    False, i, "transfer",
                    f"only {gap} < {need} minutes at station {c.s2}")
    return ConsistencyReport(True)


@dataclass(frozen=True)
class Violation:
    where: str
    message: str


def validate_timetable(tt: Timetable) -> list[Violation]:
    out: list[Violation] = []
    ns, nz = len(tt.stations), len(tt.stop_events)
    for i, s in enumerate(tt.stations):
        if s.id != i:
            out.append(Violation(f"station[{i}]", f"id {s.id} is not contiguous"))
        if s.transfer < 0:
            out.append(Violation(f"station[{i}]", "negative transfer time"))
    for i, z in enumerate(tt.stop_events):
        if z.id != i:
            out.append(Violation(f"stop_event[{i}]", f"id {z.id} is not contiguous"))
        if not 0 <= z.station < ns:
            out.append(Violation(f"stop_event[{i}]", f"unknown station {z.station}"))
        if z.arrival is None and z.departure is None:
            out.append(Violation(f"stop_event[{i}]", "neither arrival nor departure"))
        for t in (z.arrival, z.departure):
            if t is not None and not 0 <= t < DAY:
                out.append(Violation(f"stop_event[{i}]", f"time {t} out of range"))
    for i, c in enumerate(tt.elementary):
        where = f"elementary[{i}]"
        if not (0 <= c.s1 < ns and 0 <= c.s2 < ns):
            out.append(Violation(where, "unknown station"))
            continue
        if not (0 <= c.td < DAY and 0 <= c.ta < DAY):
            out.append(Violation(where, f"time out of range ({c.td}, {c.ta})"))
        if not (0 <= c.z1 < nz and 0 <= c.z2 < nz):
            out.append(Violation(where, "unknown stop event"))
            continue
        if tt.stop_events[c.z1].station != c.s1 or tt.stop_events[c.z2].station != c.s2:
            out.append(Violation(where, "stop event station mismatch"))
    return out


class TimetableBuilder:
    """Incremental construction of a timetable from train stop lists."""

    def __init__(self):
        self.stations: list[Station] = []
        self.stop_events: list[StopEvent] = []
        self.elementary: list[ElementaryConnection] = []
        self._trains = 0

    def station(self, name: str, transfer: int = 0) -> int:
        sid = len(self.stations)
        self.stations.append(Station(sid, name, transfer))
        return sid

    def train(self, stops: Sequence[tuple[int, Optional[int], Optional[int]]]) -> list[int]:
        """Add a train from ``(station, arrival, departure)`` triples (minutes of day).

        Returns the ids of the created stop events.
        """
        if len(stops) < 2:
            raise ValueError("a train needs at least two stops")
        tid = self._trains
        self._trains += 1
        ids = []
        for st, a, d in stops:
            zid = len(self.stop_events)
            self.stop_events.append(StopEvent(zid, st, a, d, tid))
            ids.append(zid)
        for (s1, _, d), (s2, a, _), z1, z2 in zip(stops, stops[1:], ids, ids[1:]):
            if d is None or a is None:
                raise ValueError("intermediate stops need arrival and departure")
            self.elementary.append(ElementaryConnection(z1, z2, s1, s2, d, a))
        return ids

    def build(self) -> Timetable:
        return Timetable(list(self.stations), list(self.stop_events), list(self.elementary))
