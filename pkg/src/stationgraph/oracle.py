"""Brute-force reference answers for small timetables.

Only the timetable model is shared with the engine: domination, closure
and searches are re-derived here from stop events and leg sequences.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .timetable import DAY, TimedLeg, Timetable, check_consistency, connection_length, stop_event_context

Legs = tuple[TimedLeg, ...]


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleParams:
    horizon_days: int = 2
    max_transfers: int = 6
    max_legs: int = 12
    cap: int = 200_000

    def __post_init__(self):
        if min(self.horizon_days, self.max_transfers + 1, self.max_legs, self.cap) <= 0:
            raise ValueError("oracle parameters must be positive")


def _next_occurrence(td: int, t: int) -> int:
    """First absolute time >= t that is congruent to td."""
    return t + (td - t) % DAY


def summary(legs: Legs) -> tuple[int, int, int, int]:
    """``(z1, z2, dep, arr)`` of a non-empty leg sequence."""
    return legs[0].connection.z1, legs[-1].connection.z2, legs[0].dep, legs[-1].arr


def enumerate_consistent(tt: Timetable, a: int, b: int, t0: Optional[int],
                         p: OracleParams = OracleParams()) -> list[Legs]:
    """All consistent connections a -> b within the horizon.

    ``t0=None`` enumerates connections departing on day 0; otherwise those
    departing at or after ``t0``.  Waiting is limited to the first
    occurrence of each elementary connection per day within the horizon.
    """
    if a == b:
        return [()]
    if len(tt.elementary) * p.horizon_days > p.cap:
        raise OracleCapExceeded("instance too large for enumeration")
    horizon = ((t0 or 0) // DAY + p.horizon_days) * DAY
    by_station: dict[int, list] = {}
    for c in tt.elementary:
        by_station.setdefault(c.s1, []).append(c)
    out: list[Legs] = []
    work = 0

    def occurrences(c, earliest):
        t = _next_occurrence(c.td, earliest)
        while t + connection_length(c) < horizon:
            yield t
            t += DAY

    def extend(legs: list[TimedLeg], transfers: int):
        nonlocal work
        work += 1
        if work > p.cap:
            raise OracleCapExceeded("enumeration cap exceeded")
        last = legs[-1]
        s = last.connection.s2
        if s == b:
            out.append(tuple(legs))
        if len(legs) >= p.max_legs:
            return
        for c in by_station.get(s, ()):
            same = c.z1 == last.connection.z2
            tr = transfers + (not same)
            if tr > p.max_transfers:
                continue
            gap = 0 if same else tt.transfer[s]
            for dep in occurrences(c, last.arr + gap):
                legs.append(TimedLeg(c, dep, dep + connection_length(c)))
                extend(legs, tr)
                legs.pop()

    for c in by_station.get(a, ()):
        if t0 is None:
            starts = [c.td]
        else:
            starts = list(occurrences(c, t0))
        for dep in starts:
            extend([TimedLeg(c, dep, dep + connection_length(c))], 0)
    return out


# ---------------------------------------------------------------- domination

def conn_dominates(p: tuple, q: tuple, tt: Timetable, shift: int = 0) -> bool:
    """Domination of ``(z1, z2, dep, arr)`` tuples; ``p`` shifted by ``shift``."""
    pz1, pz2, pd, pa = p[0], p[1], p[2] + shift, p[3] + shift
    qz1, qz2, qd, qa = q
    s1, s2 = tt.station_of(qz1), tt.station_of(qz2)
    if not (qd <= pd and pa <= qa):
        return False
    ctx = stop_event_context(qz1, qz2, qd, qa, tt)
    if qz1 != pz1 and ctx.critical_dep and pd - ctx.parr < tt.transfer[s1]:
        return False
    if qz2 != pz2 and ctx.critical_arr and ctx.ndep - pa < tt.transfer[s2]:
        return False
    return True


def conn_dominates_periodic(p: tuple, q: tuple, tt: Timetable) -> bool:
    k = -((p[2] - q[2]) // DAY)
    while p[3] + k * DAY <= q[3]:
        if conn_dominates(p, q, tt, k * DAY):
            return True
        k += 1
    return False


def arrival_dominates(p: tuple, q: tuple, tt: Timetable, station: int) -> bool:
    """Domination of ``(arr, z2)`` tuples at ``station``."""
    parr_, pz = p
    qa, qz = q
    if parr_ > qa:
        return False
    if qz == pz or qz < 0:
        return True
    ctx = stop_event_context(qz, qz, qa, qa, tt)
    return not ctx.critical_arr or ctx.ndep - parr_ >= tt.transfer[station]


def dominant_filter(items: Sequence[tuple], dominates) -> list[tuple]:
    """All-pairs closure: drop anything dominated by a non-equivalent item,
    keep the first of each group of mutually dominating items."""
    items = list(dict.fromkeys(items))
    keep = []
    for i, q in enumerate(items):
        ok = True
        for j, p in enumerate(items):
            if i == j or not dominates(p, q):
                continue
            if not dominates(q, p) or j < i:
                ok = False
                break
        if ok:
            keep.append(q)
    return keep


# ---------------------------------------------------------------- searches

def _stop_event_search(tt: Timetable, seeds: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Earliest arrival per stop event from ``(arrival, stop event)`` seeds."""
    out_of: dict[int, list] = {}
    for c in tt.elementary:
        out_of.setdefault(c.s1, []).append(c)
    nxt = {c.z1: c for c in tt.elementary}
    best: dict[int, int] = {}
    heap = list(seeds)
    heapq.heapify(heap)
    while heap:
        a, z = heapq.heappop(heap)
        if z in best:
            continue
        best[z] = a
        s = tt.station_of(z)
        c = nxt.get(z)
        if c is not None:
            dep = a + tt.dwell[z]
            heapq.heappush(heap, (dep + connection_length(c), c.z2))
        for c in out_of.get(s, ()):
            if c.z1 == z:
                continue
            dep = _next_occurrence(c.td, a + tt.transfer[s])
            if c.z2 not in best:
                heapq.heappush(heap, (dep + connection_length(c), c.z2))
    return best


def earliest_arrivals(tt: Timetable, a: int, t0: int) -> dict[int, int]:
    """Earliest arrival at every reachable station departing ``a`` at ``t0``."""
    seeds = []
    for c in tt.elementary:
        if c.s1 == a:
            dep = _next_occurrence(c.td, t0)
            seeds.append((dep + connection_length(c), c.z2))
    best = _stop_event_search(tt, seeds)
    out = {a: t0}
    for z, t in best.items():
        s = tt.station_of(z)
        if t < out.get(s, float("inf")):
            out[s] = t
    return out


def eap(tt: Timetable, a: int, b: int, t0: int) -> Optional[int]:
    return earliest_arrivals(tt, a, t0).get(b)


def profile_candidates(tt: Timetable, a: int, b: int) -> list[tuple]:
    """For every boarding at ``a`` (day 0) and arrival stop event at ``b``,
    the earliest such connection.  Every consistent connection a -> b is
    dominated by one of these."""
    out = []
    for c in tt.elementary:
        if c.s1 != a:
            continue
        best = _stop_event_search(tt, [(c.td + connection_length(c), c.z2)])
        for z, t in best.items():
            if tt.station_of(z) == b:
                out.append((c.z1, z, c.td, t))
    return out


def profile_oracle(tt: Timetable, a: int, b: int) -> list[tuple]:
    if a == b:
        return []
    cands = sorted(profile_candidates(tt, a, b))
    return dominant_filter(cands, lambda p, q: conn_dominates_periodic(p, q, tt))


def mutually_dominate(xs: Sequence[tuple], ys: Sequence[tuple], tt: Timetable) -> bool:
    """Every member of each set is dominated by (or equivalent to) one of the other."""
    def covered(q, pool):
        return any(conn_dominates_periodic(p, q, tt) for p in pool)
    return all(covered(q, ys) for q in xs) and all(covered(q, xs) for q in ys)


# ---------------------------------------------------------------- replacement

def _prefixes(tt: Timetable, first: TimedLeg, depth: int) -> list[list[TimedLeg]]:
    """Leg sequences arriving at ``first``'s departure station that may
    continue with ``first``; latest feasible occurrence of every leg."""
    out = [[]]
    if depth == 0:
        return out
    s = first.connection.s1
    for c in tt.elementary:
        if c.s2 != s:
            continue
        need = 0 if c.z2 == first.connection.z1 else tt.transfer[s]
        latest_arr = first.dep - need
        ln = connection_length(c)
        arr = latest_arr - (latest_arr - c.ta) % DAY
        dep = arr - ln
        if dep < 0:
            continue
        leg = TimedLeg(c, dep, arr)
        for pre in _prefixes(tt, leg, depth - 1):
            out.append(pre + [leg])
    return out


def _suffixes(tt: Timetable, last: TimedLeg, depth: int) -> list[list[TimedLeg]]:
    out = [[]]
    if depth == 0:
        return out
    s = last.connection.s2
    for c in tt.elementary:
        if c.s1 != s:
            continue
        need = 0 if c.z1 == last.connection.z2 else tt.transfer[s]
        dep = _next_occurrence(c.td, last.arr + need)
        leg = TimedLeg(c, dep, dep + connection_length(c))
        for suf in _suffixes(tt, leg, depth - 1):
            out.append([leg] + suf)
    return out


def _later(legs: Legs) -> Legs:
    return tuple(TimedLeg(l.connection, l.dep + DAY, l.arr + DAY) for l in legs)


def replacement_violation(p: Legs, q: Legs, tt: Timetable, max_ext: int = 4) -> Optional[list[TimedLeg]]:
    """An extension ``R`` of ``q`` in which ``q`` cannot be replaced by ``p``
    without breaking consistency or worsening departure/arrival, or None.

    Both are moved one day later first so that prefixes feeding an early
    morning departure may start on the previous evening.
    """
    p, q = _later(p), _later(q)
    half = max_ext // 2
    for pre in _prefixes(tt, q[0], half):
        for suf in _suffixes(tt, q[-1], max_ext - len(pre)):
            r = pre + list(q) + suf
            if not check_consistency(r, tt):
                continue
            r2 = pre + list(p) + suf
            if not check_consistency(r2, tt):
                return r
            if not (r[0].dep <= r2[0].dep <= r2[-1].arr <= r[-1].arr):
                return r
    return None


def arrival_replacement_violation(p: Legs, q: Legs, tt: Timetable, t0: int,
                                  max_ext: int = 3) -> Optional[list[TimedLeg]]:
    """Like :func:`replacement_violation` for arrival connections (prefix
    ``q`` of a query from ``t0``): only suffix extensions are considered."""
    for suf in _suffixes(tt, q[-1], max_ext):
        r = list(q) + suf
        r2 = list(p) + suf
        if not check_consistency(r, tt):
            continue
        if p[0].dep < t0 or not check_consistency(r2, tt) or r2[-1].arr > r[-1].arr:
            return r
    return None
