"""Connections, arrival connections and the link / minimum operations.

All stored connection sets are daily-periodic: each member is kept once
with its departure in ``[0, 1439]`` and stands for the copies shifted by
whole days (the *outrolled* array).  Arrival connection sets of time
queries carry absolute times.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .timetable import ALL, DAY, Timetable

INF = float("inf")
_NONCRIT = -2


class Link(NamedTuple):
    """Unpacking record: ``left`` (aligned) followed by ``right`` shifted by ``offset``."""

    mid: int
    left: "Connection"
    right: "Connection"
    offset: int


class Connection:
    """Label ``(z1, z2, dep, arr)`` between two stations given by context.

    ``cd`` / ``ca`` hold the dwell time of the departure / arrival stop event
    when that stop event is critical (dwell below the transfer time), else None.
    ``via`` is the elementary connection index or a :class:`Link`.
    """

    __slots__ = ("z1", "z2", "dep", "arr", "cd", "ca", "ntr", "via")

    def __init__(self, z1, z2, dep, arr, cd=None, ca=None, ntr=0, via=None):
        self.z1 = z1
        self.z2 = z2
        self.dep = dep
        self.arr = arr
        self.cd = cd
        self.ca = ca
        self.ntr = ntr
        self.via = via

    @property
    def length(self) -> int:
        return self.arr - self.dep

    @property
    def parr(self) -> Optional[int]:
        return None if self.cd is None else self.dep - self.cd

    @property
    def ndep(self) -> Optional[int]:
        return None if self.ca is None else self.arr + self.ca

    def key(self) -> tuple:
        return (self.z1, self.z2, self.dep, self.arr)

    def shifted(self, offset: int) -> "Connection":
        return Connection(self.z1, self.z2, self.dep + offset, self.arr + offset,
                          self.cd, self.ca, self.ntr, self.via)

    def __repr__(self):
        return f"Connection(z1={self.z1}, z2={self.z2}, dep={self.dep}, arr={self.arr})"


class ArrivalConnection:
    """Time-query label ``(arr, z2)`` with provenance for journey extraction."""

    __slots__ = ("arr", "z2", "ca", "prev", "conn", "offset", "station")

    def __init__(self, arr, z2, ca=None, prev=None, conn=None, offset=0, station=None):
        self.arr = arr
        self.z2 = z2
        self.ca = ca
        self.prev = prev
        self.conn = conn
        self.offset = offset
        self.station = station

    @property
    def ndep(self) -> Optional[int]:
        return None if self.ca is None else self.arr + self.ca

    def key(self) -> tuple:
        return (self.arr, self.z2)

    def __repr__(self):
        return f"ArrivalConnection(arr={self.arr}, z2={self.z2})"


def elementary_connection(tt: Timetable, idx: int) -> Connection:
    c = tt.elementary[idx]
    return Connection(c.z1, c.z2, c.td, c.td + c.length, tt.crit[c.z1], tt.crit[c.z2], 0, idx)


# ---------------------------------------------------------------- domination

def dominates(p: Connection, q: Connection, tr1: int, tr2: int, shift: int = 0) -> bool:
    """Whether ``p`` (shifted by ``shift`` minutes) dominates ``q``.

    ``tr1`` / ``tr2`` are the transfer times of the departure / arrival station.
    """
    pd = p.dep + shift
    pa = p.arr + shift
    if q.dep > pd or pa > q.arr:
        return False
    if q.z1 != p.z1 and q.cd is not None and pd - (q.dep - q.cd) < tr1:
        return False
    if q.z2 != p.z2 and q.ca is not None and (q.arr + q.ca) - pa < tr2:
        return False
    return True


def dominates_periodic(p: Connection, q: Connection, tr1: int, tr2: int) -> bool:
    """Domination by any daily copy of ``p`` departing no earlier than ``q``."""
    shift = -((p.dep - q.dep) // DAY) * DAY
    while p.arr + shift <= q.arr:
        if dominates(p, q, tr1, tr2, shift):
            return True
        shift += DAY
    return False


def dominates_connection(p: Connection, q: Connection, s1: int, s2: int, tt: Timetable) -> bool:
    """Domination of two connections between stations ``s1`` and ``s2``."""
    for c in (p, q):
        if tt.station_of(c.z1) != s1 or tt.station_of(c.z2) != s2:
            raise ValueError("connection does not run between the given stations")
    return dominates(p, q, tt.transfer[s1], tt.transfer[s2])


def dominates_arrival(p: ArrivalConnection, q: ArrivalConnection, tr: int) -> bool:
    if p.arr > q.arr:
        return False
    return q.z2 == p.z2 or q.ca is None or q.arr + q.ca - p.arr >= tr


def equivalent(p: Connection, q: Connection) -> bool:
    return equiv_key(p) == equiv_key(q)


def equiv_key(c: Connection) -> tuple:
    return (c.dep, c.arr,
            c.z1 if c.cd is not None else _NONCRIT,
            c.z2 if c.ca is not None else _NONCRIT)


def profile_key(c: Connection) -> tuple:
    """Storage order: departure, length descending, critical departure last,
    critical arrival last, then stop events."""
    return (c.dep, c.dep - c.arr, c.cd is not None, c.ca is not None, c.z1, c.z2)


def time_key(c: Connection) -> tuple:
    """Departure, arrival, critical arrival first."""
    return (c.dep, c.arr, c.ca is None, c.z1, c.z2)


def canonical_order(kind: str):
    """Sort key for ``kind`` in {"time", "profile"}."""
    kind = kind.lower()
    if kind == "time":
        return time_key
    if kind == "profile":
        return profile_key
    raise ValueError(f"unknown order {kind!r}")


def _arrival_sort_key(a: ArrivalConnection, pref: int = 0) -> tuple:
    if a.ca is not None:
        return (a.arr, 0, a.z2, pref)
    return (a.arr, 1, pref, a.z2)


# ---------------------------------------------------------------- edge sets

class ConnectionSet:
    """Canonical, dominance-closed periodic connection set of one edge ``(s1, s2)``.

    Besides the ordered array this keeps a minute-of-day bucket index, the
    dominant-range end of each member and suffix minima of arrival times,
    all addressed in outrolled positions ``day * n + i``.
    """

    __slots__ = ("conns", "s1", "s2", "n", "deps", "min_len", "width",
                 "bucket_first", "range_off", "sufmin", "tr1", "tr2")

    def __init__(self, conns: Sequence[Connection], s1: int, s2: int, tt: Timetable,
                 check: bool = True):
        self.conns = tuple(conns)
        self.s1 = s1
        self.s2 = s2
        self.tr1 = tt.transfer[s1]
        self.tr2 = tt.transfer[s2]
        self.n = n = len(self.conns)
        self.deps = [c.dep for c in self.conns]
        if check:
            keys = [profile_key(c) for c in self.conns]
            if any(a > b for a, b in zip(keys, keys[1:])):
                raise ValueError("connections are not in canonical profile order")
            if any(not 0 <= d < DAY for d in self.deps):
                raise ValueError("stored departures must lie within one day")
        self._build_index()

    def _build_index(self) -> None:
        n = self.n
        nb = max(1, n)
        self.width = -(-DAY // nb)
        self.bucket_first = [bisect_left(self.deps, b * self.width) for b in range(nb)]
        if n == 0:
            self.min_len = 0
            self.range_off = []
            self.sufmin = []
            return
        self.min_len = min(c.arr - c.dep for c in self.conns)
        self.range_off = []
        for i, c in enumerate(self.conns):
            bound = c.dep + (c.arr - c.dep - self.min_len) + self.tr2
            self.range_off.append(max(self.first_at_or_after(bound) - i, 1))
        suf = [0] * n
        best = min(c.arr for c in self.conns) + DAY
        for i in range(n - 1, -1, -1):
            best = min(best, self.conns[i].arr)
            suf[i] = best
        self.sufmin = suf

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.conns)

    def first_at_or_after(self, t: int) -> int:
        """Outrolled position of the first member departing at absolute time >= t."""
        day, m = divmod(t, DAY)
        i = self.bucket_first[m // self.width] if self.n else 0
        deps = self.deps
        n = self.n
        while i < n and deps[i] < m:
            i += 1
        return day * n + i

    def get(self, j: int) -> tuple[Connection, int]:
        day, i = divmod(j, self.n)
        return self.conns[i], day * DAY

    def range_end(self, j: int) -> int:
        return j + self.range_off[j % self.n]

    def min_arrival_from(self, j: int) -> int:
        day, i = divmod(j, self.n)
        return self.sufmin[i] + day * DAY

    def keys(self) -> list[tuple]:
        return [c.key() for c in self.conns]


def build_edge_index(conns: Sequence[Connection], s1: int, s2: int, tt: Timetable) -> ConnectionSet:
    return ConnectionSet(conns, s1, s2, tt, check=True)


# ---------------------------------------------------------------- closure

class SweepBuffer:
    """Backward sweep state: the kept connections that may still dominate a
    connection departing at the cursor."""

    __slots__ = ("tr1", "tr2", "entries", "min_far")

    def __init__(self, tr1: int, tr2: int):
        self.tr1 = tr1
        self.tr2 = tr2
        self.entries: list[tuple[int, int, Connection, int]] = []  # (abs dep, abs arr, conn, day)
        self.min_far = INF

    def advance(self, cursor: int) -> None:
        tr1 = self.tr1
        for d, a, _, _ in self.entries:
            if d - cursor >= tr1 and a < self.min_far:
                self.min_far = a
        limit = self.min_far + self.tr2
        self.entries = [e for e in self.entries if e[0] - cursor < tr1 or e[1] <= limit]

    def dominated(self, q: Connection, day: int) -> bool:
        for _, _, p, pday in self.entries:
            if dominates(p, q, self.tr1, self.tr2, (pday - day) * DAY):
                return True
        return False

    def add(self, q: Connection, day: int) -> None:
        off = day * DAY
        self.entries.append((q.dep + off, q.arr + off, q, day))

    def has_day(self, day: int) -> bool:
        return any(e[3] == day for e in self.entries)


def _dedupe(cands: Iterable[tuple[int, Connection]]) -> list[Connection]:
    """One representative per equivalence class, lowest preference value wins."""
    best: dict[tuple, tuple[int, int, int, Connection]] = {}
    for order, (pref, c) in enumerate(cands):
        k = equiv_key(c)
        cur = best.get(k)
        rank = (pref, c.ntr, order)
        if cur is None or rank < cur[:3]:
            best[k] = (*rank, c)
    return [v[3] for v in best.values()]


def sweep_filter(conns: list[Connection], tr1: int, tr2: int) -> list[Connection]:
    """Dominance closure of equivalence-free ``conns`` (any order) via a
    backward sweep, continued over earlier days for the periodic border."""
    items = sorted(conns, key=profile_key)
    n = len(items)
    if n <= 1:
        return items
    keep = [True] * n
    buf = SweepBuffer(tr1, tr2)
    max_len = max(c.arr - c.dep for c in items)
    last_day = -(max_len // DAY + 2)
    day = 0
    while day >= last_day:
        for i in range(n - 1, -1, -1):
            if day < 0 and not keep[i]:
                continue
            q = items[i]
            buf.advance(q.dep + day * DAY)
            if day < 0 and not buf.has_day(0):
                return [c for c, k in zip(items, keep) if k]
            if buf.dominated(q, day):
                keep[i] = False
            else:
                buf.add(q, day)
        day -= 1
    return [c for c, k in zip(items, keep) if k]


def closure(cands: Iterable[tuple[int, Connection]], tr1: int, tr2: int) -> list[Connection]:
    return sweep_filter(_dedupe(cands), tr1, tr2)


# ---------------------------------------------------------------- link / minimum (profile)

def _link_candidates(e1: ConnectionSet, e2: ConnectionSet, tt: Timetable,
                     max_len: Optional[int] = None, max_ntr: Optional[int] = None) -> list[Connection]:
    """Consistent links of ``e1`` then ``e2``, skipping provably dominated ones.

    ``max_len`` / ``max_ntr`` drop results that are longer / use more
    transfers (witness searches only).
    """
    out: list[Connection] = []
    if e1.n == 0 or e2.n == 0:
        return out
    mid = e1.s2
    tr1 = e1.tr1
    tr_mid = tt.transfer[mid]
    n2 = e2.n
    conns2 = e2.conns
    for i in range(e1.n - 1, -1, -1):
        p = e1.conns[i]
        a = p.arr
        start = e2.first_at_or_after(a)
        tix = e2.first_at_or_after(a + tr_mid)
        # a later departing connection of e1 that dominates p at the departure
        j0 = max(i + 1, e1.first_at_or_after(p.dep + tr1))
        qend = e2.first_at_or_after(e1.min_arrival_from(j0) + tr_mid)
        for j in range(start, min(tix, qend)):
            day, k = divmod(j, n2)
            x = conns2[k]
            if x.z1 == p.z2:
                off = day * DAY
                out.append(Connection(p.z1, x.z2, p.dep, x.arr + off, p.cd, x.ca,
                                      p.ntr + x.ntr, Link(mid, p, x, off)))
        if tix < qend:
            for j in range(tix, min(qend, e2.range_end(tix))):
                day, k = divmod(j, n2)
                x = conns2[k]
                off = day * DAY
                ntr = p.ntr + x.ntr + (x.z1 != p.z2)
                out.append(Connection(p.z1, x.z2, p.dep, x.arr + off, p.cd, x.ca,
                                      ntr, Link(mid, p, x, off)))
    if max_len is not None:
        out = [c for c in out if c.arr - c.dep <= max_len]
    if max_ntr is not None:
        out = [c for c in out if c.ntr <= max_ntr]
    return out


def link_edges(e1: ConnectionSet, e2: ConnectionSet, tt: Timetable) -> ConnectionSet:
    """Dominant set of all consistent connections ``s1 -> s2 -> s3``."""
    if e1.s2 != e2.s1:
        raise ValueError("edges do not share the middle station")
    cands = ((1, c) for c in _link_candidates(e1, e2, tt))
    return ConnectionSet(closure(cands, e1.tr1, e2.tr2), e1.s1, e2.s2, tt, check=False)


def minimum_connections(a: ConnectionSet, b: ConnectionSet, tt: Timetable) -> ConnectionSet:
    """Dominant union, preferring members of ``a`` among equivalent ones."""
    if b.n == 0:
        return a
    if a.n == 0:
        return b
    cands = [(0, c) for c in a.conns] + [(1, c) for c in b.conns]
    return ConnectionSet(closure(cands, a.tr1, a.tr2), a.s1, a.s2, tt, check=False)


def link_and_minimum(existing: Optional[ConnectionSet], e1: ConnectionSet, e2: ConnectionSet,
                     tt: Timetable, max_len: Optional[int] = None,
                     max_ntr: Optional[int] = None) -> tuple[ConnectionSet, bool]:
    """``minimum(existing, link(e1, e2))`` without materializing the link result."""
    linked = _link_candidates(e1, e2, tt, max_len, max_ntr)
    if existing is None or existing.n == 0:
        res = ConnectionSet(closure(((1, c) for c in linked), e1.tr1, e2.tr2),
                            e1.s1, e2.s2, tt, check=False)
        return res, res.n > 0
    if not linked:
        return existing, False
    cands = [(0, c) for c in existing.conns] + [(1, c) for c in linked]
    kept = closure(cands, existing.tr1, existing.tr2)
    if [c.key() for c in kept] == existing.keys():
        return existing, False
    return ConnectionSet(kept, existing.s1, existing.s2, tt, check=False), True


def connection_set(conns: Iterable[Connection], s1: int, s2: int, tt: Timetable) -> ConnectionSet:
    """Closed canonical set from arbitrary connections (departures normalized)."""
    norm = []
    for c in conns:
        off = -(c.dep // DAY) * DAY
        norm.append(c if off == 0 else c.shifted(off))
    return ConnectionSet(closure(((0, c) for c in norm), tt.transfer[s1], tt.transfer[s2]),
                         s1, s2, tt, check=False)


# ---------------------------------------------------------------- link / minimum (time)

def filter_arrivals(cands: Sequence[tuple[int, ArrivalConnection]], tr: int) -> list[ArrivalConnection]:
    """Dominant arrival set in arrival order (critical arrivals first on ties)."""
    ordered = sorted(cands, key=lambda pc: _arrival_sort_key(pc[1], pc[0]))
    out: list[ArrivalConnection] = []
    best = None
    for _, a in ordered:
        if best is None:
            out.append(a)
            best = a.arr
            continue
        if a.ca is None:
            continue  # dominated by (or equivalent to) the earliest arrival
        if a.arr + a.ca - best >= tr:
            continue
        if any(o.z2 == a.z2 for o in out):
            continue  # same stop event arriving no later
        out.append(a)
    return out


def link_time(ac: Sequence[ArrivalConnection], e: ConnectionSet, tt: Timetable,
              raw: bool = False) -> list[ArrivalConnection]:
    """Extend the arrival set ``ac`` at ``e.s1`` along edge ``e``."""
    if not ac or e.n == 0:
        return []
    tr_s = e.tr1
    tr_t = e.tr2
    n = e.n
    first = min(ac, key=_arrival_sort_key)
    edt = first.arr
    pn = e.first_at_or_after(edt)
    pt = e.first_at_or_after(edt + tr_s)
    out: list[ArrivalConnection] = []
    best = INF
    by_arr = sorted(ac, key=_arrival_sort_key)
    for j in range(pn, pt):
        day, k = divmod(j, n)
        x = e.conns[k]
        off = day * DAY
        xd = x.dep + off
        for lab in by_arr:
            if lab.arr > xd:
                break
            if lab.z2 == x.z1 or lab.z2 == ALL:
                r = ArrivalConnection(x.arr + off, x.z2, x.ca, lab, x, off, e.s2)
                out.append(r)
                best = min(best, r.arr)
                break
    for j in range(pt, e.range_end(pt)):
        day, k = divmod(j, n)
        x = e.conns[k]
        off = day * DAY
        if x.dep + off >= best + tr_t:
            break
        arr = x.arr + off
        if arr > best and (x.ca is None or arr + x.ca - best >= tr_t):
            continue
        out.append(ArrivalConnection(arr, x.z2, x.ca, first, x, off, e.s2))
        best = min(best, arr)
    if raw:
        return out
    return filter_arrivals([(1, a) for a in out], tr_t)


def minimum_arrivals(existing: Sequence[ArrivalConnection], incoming: Sequence[ArrivalConnection],
                     tr: int) -> tuple[list[ArrivalConnection], bool]:
    if not incoming:
        return list(existing), False
    cands = [(0, a) for a in existing] + [(1, a) for a in incoming]
    res = filter_arrivals(cands, tr)
    changed = [a.key() for a in res] != [a.key() for a in existing]
    return (res if changed else list(existing)), changed


def link_and_minimum_time(existing: Sequence[ArrivalConnection], ac: Sequence[ArrivalConnection],
                          e: ConnectionSet, tt: Timetable) -> tuple[list[ArrivalConnection], bool]:
    return minimum_arrivals(existing, link_time(ac, e, tt, raw=True), e.tr2)
