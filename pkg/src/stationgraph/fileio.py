"""Timetable text format and the SGCH1 binary hierarchy format.

Text grammar, one directive per line, ``#`` starts a comment::

    STATION <id> <transfer-minutes> <name>
    TRAIN <id>
    STOP <station-id> <arr hh:mm|-> <dep hh:mm|->

Binary layout: magic ``SGCH1``, u16 version, then length-prefixed sequences
of little-endian i32 records (timetable, ranks, parameters, shortcut
triples, connection records in post order, edges).
"""
from __future__ import annotations

import io
import struct
from pathlib import Path
from typing import BinaryIO, Optional

from .connections import Connection, ConnectionSet, Link
from .contraction import ContractionParams, Hierarchy, StoredShortcut
from .graph import StationGraph
from .timetable import ElementaryConnection, Station, StopEvent, Timetable

MAGIC = b"SGCH1"
VERSION = 1


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# ---------------------------------------------------------------- text

def _hhmm(tok: str, line: int) -> Optional[int]:
    if tok == "-":
        return None
    try:
        h, m = tok.split(":")
        h, m = int(h), int(m)
    except ValueError:
        raise FormatError(f"bad time {tok!r}", line) from None
    if not (0 <= h < 24 and 0 <= m < 60):
        raise FormatError(f"time out of range {tok!r}", line)
    return h * 60 + m


def parse_timetable(text: str) -> Timetable:
    stations: list[Station] = []
    trains: list[tuple[int, list[tuple[int, Optional[int], Optional[int], int]]]] = []
    seen_trains: set[int] = set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0].upper()
        try:
            if kw == "STATION":
                if len(parts) < 4:
                    raise FormatError("expected STATION <id> <transfer> <name>", no)
                sid, tr = int(parts[1]), int(parts[2])
                if sid != len(stations):
                    raise FormatError(f"station ids must be contiguous from 0, got {sid}", no)
                if tr < 0:
                    raise FormatError("negative transfer time", no)
                name = line.split(None, 3)[3]
                stations.append(Station(sid, name, tr))
            elif kw == "TRAIN":
                if len(parts) != 2:
                    raise FormatError("expected TRAIN <id>", no)
                tid = int(parts[1])
                if tid in seen_trains:
                    raise FormatError(f"duplicate train {tid}", no)
                seen_trains.add(tid)
                trains.append((no, []))
            elif kw == "STOP":
                if not trains:
                    raise FormatError("STOP outside a TRAIN block", no)
                if len(parts) != 4:
                    raise FormatError("expected STOP <station> <arr> <dep>", no)
                st = int(parts[1])
                if not 0 <= st < len(stations):
                    raise FormatError(f"unknown station {st}", no)
                trains[-1][1].append((st, _hhmm(parts[2], no), _hhmm(parts[3], no), no))
            else:
                raise FormatError(f"unknown directive {parts[0]!r}", no)
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"bad integer in {line!r}", no) from None
    events: list[StopEvent] = []
    elementary: list[ElementaryConnection] = []
    for tid, (no, stops) in enumerate(trains):
        if len(stops) < 2:
            raise FormatError("a train needs at least two stops", no)
        for k, (st, a, d, ln) in enumerate(stops):
            first, last = k == 0, k == len(stops) - 1
            if (a is None) != first or (d is None) != last:
                raise FormatError("only the first arrival and the last departure may be '-'", ln)
            events.append(StopEvent(len(events), st, a, d, tid))
        base = len(events) - len(stops)
        for k in range(len(stops) - 1):
            z1, z2 = base + k, base + k + 1
            elementary.append(ElementaryConnection(z1, z2, stops[k][0], stops[k + 1][0],
                                                   stops[k][2], stops[k + 1][1]))
    return Timetable(stations, events, elementary)


def _fmt(t: Optional[int]) -> str:
    return "-" if t is None else f"{t // 60:02d}:{t % 60:02d}"


def print_timetable(tt: Timetable) -> str:
    """Canonical text form; ``parse_timetable(print_timetable(tt)) == tt``."""
    out = [f"STATION {s.id} {s.transfer} {s.name}" for s in tt.stations]
    by_train: dict[int, list[StopEvent]] = {}
    for z in tt.stop_events:
        by_train.setdefault(z.train, []).append(z)
    for k, tid in enumerate(sorted(by_train, key=lambda t: by_train[t][0].id)):
        out.append(f"TRAIN {k}")
        out.extend(f"STOP {z.station} {_fmt(z.arrival)} {_fmt(z.departure)}" for z in by_train[tid])
    return "\n".join(out) + "\n"


def read_timetable(path: str | Path) -> Timetable:
    return parse_timetable(Path(path).read_text())


def write_timetable(tt: Timetable, path: str | Path) -> None:
    Path(path).write_text(print_timetable(tt))


# ---------------------------------------------------------------- binary

class _Writer:
    def __init__(self):
        self.buf = io.BytesIO()

    def ints(self, *xs: int) -> None:
        self.buf.write(struct.pack(f"<{len(xs)}i", *xs))

    def f64(self, x: float) -> None:
        self.buf.write(struct.pack("<d", x))

    def text(self, s: str) -> None:
        b = s.encode("utf-8")
        self.ints(len(b))
        self.buf.write(b)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("truncated hierarchy file")
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def ints(self, k: int) -> tuple[int, ...]:
        return struct.unpack(f"<{k}i", self.take(4 * k))

    def int(self) -> int:
        return self.ints(1)[0]

    def count(self) -> int:
        n = self.int()
        if n < 0:
            raise FormatError("negative length")
        return n

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def text(self) -> str:
        return self.take(self.count()).decode("utf-8")


def _opt(x: Optional[int]) -> int:
    return -1 if x is None else x


def _unopt(x: int) -> Optional[int]:
    return None if x < 0 else x


def dump_hierarchy(h: Hierarchy) -> bytes:
    tt = h.tt
    w = _Writer()
    w.buf.write(MAGIC)
    w.buf.write(struct.pack("<H", VERSION))
    w.ints(len(tt.stations))
    for s in tt.stations:
        w.ints(s.transfer)
        w.text(s.name)
    w.ints(len(tt.stop_events))
    for z in tt.stop_events:
        w.ints(z.station, _opt(z.arrival), _opt(z.departure), _opt(z.train))
    w.ints(len(tt.elementary))
    for c in tt.elementary:
        w.ints(c.z1, c.z2, c.s1, c.s2, c.td, c.ta)
    w.ints(tt.traffic_days)
    w.ints(len(h.rank), *h.rank)
    p = h.params
    w.ints(p.hop_limit, p.transfer_limit, p.duration_slack, p.workers, p.max_loop_iterations)
    w.f64(p.edge_quotient_weight)
    w.f64(p.depth_weight)
    w.ints(len(h.shortcuts))
    for s in h.shortcuts:
        w.ints(s.src, s.dst, s.owner)

    # connection records in post order so constituents precede their users
    ids: dict[int, int] = {}
    records: list[tuple[int, ...]] = []

    def visit(root: Connection) -> int:
        stack = [(root, False)]
        while stack:
            c, expanded = stack.pop()
            if id(c) in ids:
                continue
            via = c.via
            if isinstance(via, Link) and not expanded:
                stack.append((c, True))
                stack.append((via.right, False))
                stack.append((via.left, False))
                continue
            head = (c.z1, c.z2, c.dep, c.arr, _opt(c.cd), _opt(c.ca), c.ntr)
            if isinstance(via, Link):
                rec = head + (1, via.mid, ids[id(via.left)], ids[id(via.right)], via.offset)
            elif isinstance(via, int):
                rec = head + (0, via, 0, 0, 0)
            else:
                rec = head + (2, 0, 0, 0, 0)
            ids[id(c)] = len(records)
            records.append(rec)
        return ids[id(root)]

    edges = [(u, v, [visit(c) for c in cs.conns]) for u, v, cs in h.graph.edges()]
    w.ints(len(records))
    for rec in records:
        w.ints(*rec)
    w.ints(len(edges))
    for u, v, cids in edges:
        w.ints(u, v, len(cids), *cids)
    return w.buf.getvalue()


def parse_hierarchy(data: bytes) -> Hierarchy:
    if data[:len(MAGIC)] != MAGIC:
        raise FormatError("not an SGCH1 file (bad magic)")
    r = _Reader(data)
    r.take(len(MAGIC))
    (version,) = struct.unpack("<H", r.take(2))
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    stations = []
    for i in range(r.count()):
        tr = r.int()
        stations.append(Station(i, r.text(), tr))
    events = []
    for i in range(r.count()):
        st, a, d, t = r.ints(4)
        events.append(StopEvent(i, st, _unopt(a), _unopt(d), _unopt(t)))
    elementary = [ElementaryConnection(*r.ints(6)) for _ in range(r.count())]
    tt = Timetable(stations, events, elementary, r.int())
    rank = list(r.ints(r.count()))
    hop, trl, slack, workers, loops = r.ints(5)
    params = ContractionParams(hop, trl, slack, r.f64(), r.f64(), workers, loops)
    shortcuts = [StoredShortcut(*r.ints(3)) for _ in range(r.count())]
    conns: list[Connection] = []
    for _ in range(r.count()):
        z1, z2, dep, arr, cd, ca, ntr, kind, a, b, c, off = r.ints(12)
        if kind == 0:
            via = a
        elif kind == 1:
            if not (0 <= b < len(conns) and 0 <= c < len(conns)):
                raise FormatError("connection record refers forward")
            via = Link(a, conns[b], conns[c], off)
        elif kind == 2:
            via = None
        else:
            raise FormatError(f"bad connection record kind {kind}")
        conns.append(Connection(z1, z2, dep, arr, _unopt(cd), _unopt(ca), ntr, via))
    g = StationGraph(tt)
    for _ in range(r.count()):
        u, v, k = r.ints(3)
        cids = r.ints(k)
        g.set_edge(u, v, ConnectionSet([conns[i] for i in cids], u, v, tt))
    if r.pos != len(data):
        raise FormatError("trailing bytes after hierarchy")
    order = sorted(range(len(rank)), key=rank.__getitem__)
    return Hierarchy(g, rank, order, shortcuts, params)


def save_hierarchy(h: Hierarchy, path: str | Path | BinaryIO) -> None:
    data = dump_hierarchy(h)
    if hasattr(path, "write"):
        path.write(data)
    else:
        Path(path).write_bytes(data)


def load_hierarchy(path: str | Path | BinaryIO) -> Hierarchy:
    data = path.read() if hasattr(path, "read") else Path(path).read_bytes()
    return parse_hierarchy(data)
