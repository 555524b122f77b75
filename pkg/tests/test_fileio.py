import io

import pytest
from hypothesis import given, settings, strategies as st

from stationgraph.chquery import ch_profile_query, ch_time_query
from stationgraph.contraction import build_hierarchy
from stationgraph.fileio import (
    FormatError, dump_hierarchy, load_hierarchy, parse_hierarchy, parse_timetable, print_timetable,
    save_hierarchy,
)
from stationgraph.graph import build_station_graph
from stationgraph.samples import loop_network, overnight_network
from stationgraph.synthetic import SyntheticSpec, generate_synthetic, random_timetable

OVERNIGHT = """\
# stations: id, transfer minutes, name
STATION 0 5 A
STATION 1 5 B
STATION 2 5 C
STATION 3 5 D
STATION 4 5 E
TRAIN 1
STOP 0 - 23:05
STOP 1 00:55 01:02
STOP 2 02:57 03:00
STOP 3 04:20 -
TRAIN 2
STOP 2 - 03:00
STOP 4 04:00 -
TRAIN 3
STOP 2 - 04:00
STOP 4 05:00 -
"""


def test_parse_overnight_file():
    tt = parse_timetable(OVERNIGHT)
    assert len(tt.stations) == 5
    assert len({z.train for z in tt.stop_events}) == 3
    assert len(tt.elementary) == 5
    assert tt == overnight_network()


def test_empty_file():
    tt = parse_timetable("# nothing here\n\n")
    assert tt.stations == [] and tt.elementary == []


@pytest.mark.parametrize("text,line", [
    ("STATION 0 5 A\nTRAIN 0\nSTOP 0 - 10:00\nSTOP 3 10:10 -\n", 4),
    ("STATION 0 5 A\nSTOP 0 - 10:00\n", 2),
    ("STATION 1 5 A\n", 1),
    ("STATION 0 5 A\nTRAIN 0\nSTOP 0 - 25:00\nSTOP 0 10:10 -\n", 3),
    ("STATION 0 5 A\nBOGUS\n", 2),
    ("STATION 0 5 A\nSTATION 1 2 B\nTRAIN 0\nSTOP 0 - 10:00\n", 3),
    ("STATION 0 5 A\nSTATION 1 2 B\nTRAIN 0\nSTOP 0 - 10:00\nSTOP 1 - 10:05\n", 5),
])
def test_syntax_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as err:
        parse_timetable(text)
    assert err.value.line == line


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_text_round_trip(seed):
    tt = random_timetable(seed, 6, 12)
    assert parse_timetable(print_timetable(tt)) == tt


def _same_answers(h1, h2):
    n = h1.tt.n_stations
    for a in range(n):
        for b in range(n):
            for t0 in (0, 400, 1000, 1500):
                assert ch_time_query(h1, a, b, t0).arrival == ch_time_query(h2, a, b, t0).arrival
            k1 = [c.key() for c in ch_profile_query(h1, a, b)]
            assert k1 == [c.key() for c in ch_profile_query(h2, a, b)]


@pytest.mark.parametrize("tt", [overnight_network(), loop_network(),
                                generate_synthetic(SyntheticSpec(stations=30, clusters=3))])
def test_binary_round_trip(tt, tmp_path):
    h = build_hierarchy(build_station_graph(tt))
    path = tmp_path / "h.sgch"
    save_hierarchy(h, path)
    h2 = load_hierarchy(path)
    assert h2.rank == h.rank and h2.shortcuts == h.shortcuts and h2.params == h.params
    assert dump_hierarchy(h2) == path.read_bytes()
    _same_answers(h, h2)


def test_empty_hierarchy_file():
    tt = parse_timetable("")
    h = build_hierarchy(build_station_graph(tt))
    buf = io.BytesIO()
    save_hierarchy(h, buf)
    assert buf.getvalue().startswith(b"SGCH1")
    assert parse_hierarchy(buf.getvalue()).rank == []


def test_binary_errors():
    data = dump_hierarchy(build_hierarchy(build_station_graph(overnight_network())))
    with pytest.raises(FormatError, match="magic"):
        parse_hierarchy(b"XXXXX" + data[5:])
    with pytest.raises(FormatError, match="version"):
        parse_hierarchy(data[:5] + b"\x09\x00" + data[7:])
    with pytest.raises(FormatError, match="truncated"):
        parse_hierarchy(data[:-3])
