"""Label-correcting time and profile queries on a station graph.

The search cores take an ``out_edges(station)`` callable so the same code
serves the plain graph, the remaining graph during contraction and the
upward/corridor graph of hierarchy queries.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .connections import (
    INF, ArrivalConnection, Connection, ConnectionSet, Link, link_and_minimum,
    link_and_minimum_time, minimum_connections,
)
from .graph import StationGraph
from .timetable import ALL, DAY, TimedLeg, Timetable

UNREACHABLE = None

EdgeFn = Callable[[int], Iterable[tuple[int, ConnectionSet]]]


@dataclass
class TimeResult:
    arrival: Optional[int]
    labels: list[ArrivalConnection]
    delete_mins: int
    ac: dict[int, list[ArrivalConnection]] = field(repr=False, default_factory=dict)

    @property
    def reachable(self) -> bool:
        return self.arrival is not None

    def best(self) -> Optional[ArrivalConnection]:
        return self.labels[0] if self.labels else None


@dataclass
class ProfileResult:
    connections: ConnectionSet | None
    delete_mins: int
    labels: dict[int, ConnectionSet] = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return 0 if self.connections is None else self.connections.n

    def __iter__(self):
        return iter(() if self.connections is None else self.connections.conns)


def _check_station(tt: Timetable, *stations: int) -> None:
    for s in stations:
        if not 0 <= s < tt.n_stations:
            raise KeyError(f"unknown station {s}")


def time_search(tt: Timetable, out_edges: EdgeFn, a: int, b: Optional[int], t0: int) -> TimeResult:
    """Label-correcting earliest-arrival search keyed by minimum arrival time.

    With ``b=None`` the search runs until the queue is exhausted.
    """
    ac: dict[int, list[ArrivalConnection]] = {a: [ArrivalConnection(t0, ALL, None, station=a)]}
    key = {a: t0}
    heap = [(t0, a)]
    pops = 0
    while heap:
        k, s = heapq.heappop(heap)
        if key.get(s) != k:
            continue
        del key[s]
        pops += 1
        if b is not None and b in ac and k >= ac[b][0].arr:
            break
        labels = ac[s]
        for t, e in out_edges(s):
            new, changed = link_and_minimum_time(ac.get(t, ()), labels, e, tt)
            if changed:
                ac[t] = new
                kk = new[0].arr
                if key.get(t, INF) != kk:
                    key[t] = kk
                    heapq.heappush(heap, (kk, t))
    if b is None:
        return TimeResult(None, [], pops, ac)
    at_b = ac.get(b, [])
    return TimeResult(at_b[0].arr if at_b else UNREACHABLE, at_b, pops, ac)


def time_query(g: StationGraph, a: int, b: int, t0: int) -> TimeResult:
    """Earliest arrival at ``b`` departing ``a`` not before absolute time ``t0``."""
    _check_station(g.tt, a, b)
    if t0 < 0:
        raise ValueError("departure time must be non-negative")
    return time_search(g.tt, g.out_edges, a, b, t0)


# ---------------------------------------------------------------- profile

def max_duration(cs: ConnectionSet | None) -> float:
    """Longest travel time (waiting included) of the best member over all departure minutes."""
    if cs is None or cs.n == 0:
        return INF
    worst = 0
    for d in set(cs.deps):
        t = d + 1
        worst = max(worst, cs.min_arrival_from(cs.first_at_or_after(t)) - t)
    return worst


def _new_min_length(old: ConnectionSet | None, new: ConnectionSet) -> int:
    known = set() if old is None else set(old.keys())
    return min((c.arr - c.dep for c in new.conns if c.key() not in known), default=0)


def profile_search(tt: Timetable, out_edges: EdgeFn, a: int, b: Optional[int] = None, *,
                   prune: bool = True, slack: Optional[int] = None,
                   max_len: Optional[int] = None, hop_limit: Optional[int] = None,
                   max_ntr: Optional[int] = None,
                   stop: Optional[Callable[[int, ConnectionSet], bool]] = None) -> ProfileResult:
    """Dominant connection sets from ``a`` to every reached station.

    The source holds a virtual identity label: its outgoing edge sets are
    copied as the first labels.  With a target ``b`` and ``prune`` the search
    stops once the queue key exceeds the longest best travel time to ``b``
    plus ``slack``.  ``stop(station, labels)`` is called after every label
    change and ends the search when it returns True.
    """
    labels: dict[int, ConnectionSet] = {}
    hops: dict[int, int] = {}
    key: dict[int, int] = {}
    heap: list[tuple[int, int]] = []
    if slack is None and b is not None:
        slack = tt.transfer[a] + tt.transfer[b] + DAY
    bound = INF
    done = False

    def update(t: int, old, new: ConnectionSet, h: int):
        nonlocal bound, done
        labels[t] = new
        hops[t] = min(hops.get(t, h), h)
        kk = _new_min_length(old, new)
        if kk < key.get(t, INF):
            key[t] = kk
            heapq.heappush(heap, (kk, t))
        if t == b and prune:
            bound = max_duration(new) + slack
        if stop is not None and stop(t, new):
            done = True

    for t, e in out_edges(a):
        if max_len is not None and e.min_len > max_len:
            continue
        old = labels.get(t)
        if old is None:
            new, changed = e, True
        else:
            new = minimum_connections(old, e, tt)
            changed = new.keys() != old.keys()
        if changed:
            update(t, old, new, 1)
    pops = 1
    while heap and not done:
        k, s = heapq.heappop(heap)
        if key.get(s) != k:
            continue
        del key[s]
        pops += 1
        if k > bound or (max_len is not None and k > max_len):
            break
        if hop_limit is not None and hops[s] >= hop_limit:
            continue
        src = labels[s]
        for t, e in out_edges(s):
            old = labels.get(t)
            new, changed = link_and_minimum(old, src, e, tt, max_len, max_ntr)
            if changed:
                update(t, old, new, hops[s] + 1)
                if done:
                    break
    res = None if b is None else labels.get(b)
    return ProfileResult(res, pops, labels)


def profile_query(g: StationGraph, a: int, b: int, *, prune: bool = True,
                  slack: Optional[int] = None) -> ProfileResult:
    _check_station(g.tt, a, b)
    if a == b:
        return ProfileResult(None, 0, {})
    return profile_search(g.tt, g.out_edges, a, b, prune=prune, slack=slack)


# ---------------------------------------------------------------- journeys

class ProvenanceError(ValueError):
    pass


def unpack_connection(c: Connection, tt: Timetable, offset: int = 0) -> list[TimedLeg]:
    """Expand a (shortcut) connection into elementary legs with absolute times."""
    out: list[TimedLeg] = []
    stack = [(c, offset)]
    while stack:
        cur, off = stack.pop()
        via = cur.via
        if isinstance(via, Link):
            stack.append((via.right, off + via.offset))
            stack.append((via.left, off))
        elif isinstance(via, int):
            if not 0 <= via < len(tt.elementary):
                raise ProvenanceError(f"unknown elementary connection {via}")
            out.append(TimedLeg(tt.elementary[via], cur.dep + off, cur.arr + off))
        else:
            raise ProvenanceError(f"connection without unpacking record: {cur!r}")
    return out


def extract_journey(label: ArrivalConnection, tt: Timetable) -> list[TimedLeg]:
    """Legs of the journey that produced a time-query label (empty at the source)."""
    parts = []
    cur = label
    while cur.prev is not None:
        if cur.conn is None:
            raise ProvenanceError("label without connection")
        parts.append(unpack_connection(cur.conn, tt, cur.offset))
        cur = cur.prev
    if cur.z2 != ALL:
        raise ProvenanceError("provenance chain does not end at the source")
    legs = []
    for p in reversed(parts):
        legs.extend(p)
    return legs
