import csv
import io

import pytest

from stationgraph import cli
from stationgraph.bench import BenchmarkMismatch, make_queries, run_benchmark
from stationgraph.contraction import build_hierarchy
from stationgraph.graph import build_station_graph
from stationgraph.samples import overnight_network
from stationgraph.synthetic import SyntheticSpec, generate_synthetic


@pytest.fixture(scope="module")
def small():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=30, clusters=3)))
    return g, build_hierarchy(g)


def test_synthetic_generator():
    a = generate_synthetic(SyntheticSpec(stations=20, seed=1, clusters=4))
    assert a == generate_synthetic(SyntheticSpec(stations=20, seed=1, clusters=4))
    assert all(2 <= s.transfer <= 10 for s in a.stations)
    with pytest.raises(ValueError):
        SyntheticSpec(stations=0)
    with pytest.raises(ValueError):
        SyntheticSpec(stations=5, clusters=6)


def test_synthetic_network_is_connected():
    tt = generate_synthetic(SyntheticSpec(stations=500, clusters=20))
    g = build_station_graph(tt)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w, _ in g.out_edges(u) + g.in_edges(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    assert len(seen) == tt.n_stations
    served = {c.s1 for c in tt.elementary} | {c.s2 for c in tt.elementary}
    assert served == set(range(tt.n_stations))


def test_query_sets_are_seeded():
    assert make_queries(50, 20, 7) == make_queries(50, 20, 7)
    assert make_queries(50, 20, 7) != make_queries(50, 20, 8)
    assert all(a != b for a, b, _ in make_queries(5, 100, 1))


def test_benchmark_report(small):
    g, h = small
    rep = run_benchmark(g, h, queries=40, seed=3)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert [(r["engine"], r["kind"]) for r in rows] == [
        ("dijkstra", "time"), ("ch", "time"), ("dijkstra", "profile"), ("ch", "profile")]
    assert rep.row("dijkstra", "time").speedup == 1.0
    assert rep.row("ch", "time").delete_mins_mean < rep.row("dijkstra", "time").delete_mins_mean
    assert run_benchmark(g, h, queries=0).rows == []


def test_benchmark_detects_wrong_engine(small):
    g, h = small
    other = build_hierarchy(build_station_graph(generate_synthetic(SyntheticSpec(stations=30, clusters=3, seed=9))))
    with pytest.raises(BenchmarkMismatch):
        run_benchmark(g, other, queries=40, seed=3)


def test_cli_round_trip(tmp_path, capsys):
    tt_path, h_path = tmp_path / "net.txt", tmp_path / "net.sgch"
    assert cli.main(["gen", "-o", str(tt_path), "--stations", "25", "--clusters", "3"]) == 0
    assert cli.main(["build", str(tt_path)]) == 0
    assert "stations=25" in capsys.readouterr().out
    assert cli.main(["contract", str(tt_path), "-o", str(h_path), "--hop-limit", "2",
                     "--transfer-limit", "3"]) == 0
    capsys.readouterr()
    assert cli.main(["query", "time", "0", "5", "08:00", "--engine", "ch", "--hierarchy", str(h_path)]) == 0
    ch_out = capsys.readouterr().out
    assert cli.main(["query", "time", "0", "5", "08:00", "--timetable", str(tt_path)]) == 0
    assert capsys.readouterr().out.splitlines()[0].split()[1] == ch_out.splitlines()[0].split()[1]
    assert cli.main(["query", "profile", "0", "5", "--engine", "ch", "--hierarchy", str(h_path)]) == 0
    assert "dominant connections" in capsys.readouterr().out
    assert cli.main(["bench", "--hierarchy", str(h_path), "--queries", "20", "--seed", "2"]) == 0
    assert capsys.readouterr().out.startswith("engine,kind,delete_mins_mean,time_us_mean,speedup")


def test_cli_selftest(capsys):
    assert cli.main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") == 6


def test_cli_reports_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("STATION 0 5 A\nTRAIN 0\nSTOP 7 - 10:00\n")
    assert cli.main(["build", str(bad)]) == 1
    assert "line 3" in capsys.readouterr().err
