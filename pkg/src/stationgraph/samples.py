"""Small hand-made timetables used by the self test and the test suite."""
from __future__ import annotations

from .timetable import Timetable, TimetableBuilder, parse_time


def hm(text: str) -> int:
    return parse_time(text)


def overnight_network(transfer_c: int = 5) -> Timetable:
    """Train A-B-C-D leaving A at 23:05 plus two trains C-E (3:00, 4:00)."""
    b = TimetableBuilder()
    a, bb = b.station("A", 5), b.station("B", 5)
    c, d, e = b.station("C", transfer_c), b.station("D", 5), b.station("E", 5)
    b.train([(a, None, hm("23:05")), (bb, hm("0:55"), hm("1:02")),
             (c, hm("2:57"), hm("3:00")), (d, hm("4:20"), None)])
    b.train([(c, None, hm("3:00")), (e, hm("4:00"), None)])
    b.train([(c, None, hm("4:00")), (e, hm("5:00"), None)])
    return b.build()


def loop_network(transfer_b: int = 5) -> Timetable:
    """One train A-B-C-B-D, one minute per hop from 12:00."""
    b = TimetableBuilder()
    a, bb, c, d = b.station("A"), b.station("B", transfer_b), b.station("C"), b.station("D")
    b.train([(a, None, hm("12:00")), (bb, hm("12:01"), hm("12:01")), (c, hm("12:02"), hm("12:02")),
             (bb, hm("12:03"), hm("12:03")), (d, hm("12:04"), None)])
    return b.build()
