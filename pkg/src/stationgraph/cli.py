"""Command line interface: ``python -m stationgraph <command> ...``."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Optional, Sequence

from .bench import BenchmarkMismatch, run_benchmark
from .chquery import ch_profile_query, ch_time_query
from .contraction import ContractionParams, Hierarchy, build_hierarchy
from .fileio import FormatError, load_hierarchy, read_timetable, save_hierarchy, write_timetable
from .graph import StationGraph, TimetableError, build_station_graph
from .queries import extract_journey, profile_query, time_query, unpack_connection
from .synthetic import SyntheticSpec, generate_synthetic
from .timetable import DAY, Timetable, check_consistency, fmt_time, parse_time


def _station(tt: Timetable, token: str) -> int:
    if token.isdigit():
        sid = int(token)
        if sid < tt.n_stations:
            return sid
    for s in tt.stations:
        if s.name == token:
            return s.id
    raise SystemExit(f"unknown station {token!r}")


def _load(args) -> tuple[StationGraph, Optional[Hierarchy]]:
    if args.hierarchy:
        h = load_hierarchy(args.hierarchy)
        return build_station_graph(h.tt), h
    if not args.timetable:
        raise SystemExit("need --timetable or --hierarchy")
    return build_station_graph(read_timetable(args.timetable)), None


def _hierarchy(g: StationGraph, h: Optional[Hierarchy], args) -> Hierarchy:
    if h is None:
        h = build_hierarchy(g, ContractionParams(workers=getattr(args, "workers", 1)))
    return h


def cmd_build(args) -> int:
    tt = read_timetable(args.timetable)
    g = build_station_graph(tt)
    print(f"stations={tt.n_stations} trains={len({z.train for z in tt.stop_events})} "
          f"elementary={len(tt.elementary)} edges={g.n_edges} connections={g.n_connections}")
    return 0


def cmd_contract(args) -> int:
    g = build_station_graph(read_timetable(args.timetable))
    params = ContractionParams(hop_limit=args.hop_limit, transfer_limit=args.transfer_limit,
                               duration_slack=args.duration_slack, workers=args.workers)
    t = time.perf_counter()
    h = build_hierarchy(g, params)
    print(f"contracted {g.n} stations in {time.perf_counter() - t:.2f}s: "
          f"{len(h.shortcuts)} shortcuts, {h.graph.n_edges} edges")
    save_hierarchy(h, args.output)
    return 0


def cmd_query(args) -> int:
    g, h = _load(args)
    tt = g.tt
    a, b = _station(tt, args.source), _station(tt, args.target)
    if args.kind == "time":
        t0 = parse_time(args.t0)
        res = ch_time_query(_hierarchy(g, h, args), a, b, t0) if args.engine == "ch" else time_query(g, a, b, t0)
        if not res.reachable:
            print("unreachable")
            return 0
        print(f"arrival {fmt_time(res.arrival)} (delete-mins {res.delete_mins})")
        for leg in extract_journey(res.best(), tt):
            c = leg.connection
            print(f"  {tt.stations[c.s1].name} {fmt_time(leg.dep)} -> "
                  f"{tt.stations[c.s2].name} {fmt_time(leg.arr)}  (train {tt.stop_events[c.z1].train})")
        return 0
    res = ch_profile_query(_hierarchy(g, h, args), a, b) if args.engine == "ch" else profile_query(g, a, b)
    print(f"{len(res)} dominant connections (delete-mins {res.delete_mins})")
    for c in res:
        legs = unpack_connection(c, tt)
        transfers = sum(1 for x, y in zip(legs, legs[1:]) if x.connection.z2 != y.connection.z1)
        print(f"  dep {fmt_time(c.dep)} arr {fmt_time(c.arr)} duration {c.arr - c.dep} transfers {transfers}")
    return 0


def cmd_gen(args) -> int:
    spec = SyntheticSpec(stations=args.stations, clusters=args.clusters,
                         backbone_degree=args.backbone_degree,
                         trains_per_route=args.trains_per_route, seed=args.seed)
    write_timetable(generate_synthetic(spec), args.output)
    return 0


def cmd_bench(args) -> int:
    g, h = _load(args)
    h = _hierarchy(g, h, args)
    try:
        report = run_benchmark(g, h, args.queries, args.seed, args.profile_queries)
    except BenchmarkMismatch as e:
        print(f"MISMATCH: {e}", file=sys.stderr)
        return 2
    text = report.to_csv()
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    print(text, end="")
    return 0


def selftest() -> list[tuple[str, bool]]:
    """Worked examples: overnight transfer network and the same-train loop."""
    from .samples import hm, loop_network, overnight_network
    from .timetable import TimedLeg

    out = []
    tt = overnight_network()
    g = build_station_graph(tt)
    h = build_hierarchy(g)
    a, e = 0, 4
    want = DAY + hm("5:00")
    out.append(("overnight time query", time_query(g, a, e, hm("23:05")).arrival == want))
    out.append(("overnight ch time query", ch_time_query(h, a, e, hm("23:05")).arrival == want))
    el = tt.elementary
    c3_0300 = next(c for c in el if c.s1 == 2 and c.s2 == 4 and c.td == hm("3:00"))
    legs = [TimedLeg(el[0], hm("23:05"), DAY + hm("0:55")), TimedLeg(el[1], DAY + hm("1:02"), DAY + hm("2:57")),
            TimedLeg(c3_0300, DAY + hm("3:00"), DAY + hm("4:00"))]
    out.append(("too-short transfer rejected", not check_consistency(legs, tt)))
    tt = loop_network()
    g = build_station_graph(tt)
    h = build_hierarchy(g)
    out.append(("loop network time query", time_query(g, 0, 3, hm("12:00")).arrival == hm("12:04")))
    out.append(("loop network ch time query", ch_time_query(h, 0, 3, hm("12:00")).arrival == hm("12:04")))
    out.append(("loop shortcut at B", any(s.src == s.dst == 1 for s in h.shortcuts)))
    return out


def cmd_selftest(args) -> int:
    results = selftest()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stationgraph", description="Station graph timetable routing")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", help="parse a timetable and report the station graph size")
    s.add_argument("timetable")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("contract", help="build and save a contraction hierarchy")
    s.add_argument("timetable")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--hop-limit", type=int, default=7)
    s.add_argument("--transfer-limit", type=int, default=5)
    s.add_argument("--duration-slack", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(fn=cmd_contract)

    s = sub.add_parser("query", help="time or profile query")
    qsub = s.add_subparsers(dest="kind", required=True)
    for kind in ("time", "profile"):
        q = qsub.add_parser(kind)
        q.add_argument("source")
        q.add_argument("target")
        if kind == "time":
            q.add_argument("t0", help="departure time, hh:mm or d+hh:mm")
        q.add_argument("--engine", choices=("dijkstra", "ch"), default="dijkstra")
        q.add_argument("--timetable")
        q.add_argument("--hierarchy")
        q.set_defaults(fn=cmd_query)

    s = sub.add_parser("gen", help="write a synthetic hierarchical timetable")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--stations", type=int, default=100)
    s.add_argument("--clusters", type=int, default=10)
    s.add_argument("--backbone-degree", type=int, default=2)
    s.add_argument("--trains-per-route", type=int, default=6)
    s.add_argument("--seed", type=int, default=1)
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("bench", help="random queries on both engines, CSV report")
    s.add_argument("--timetable")
    s.add_argument("--hierarchy")
    s.add_argument("--queries", type=int, default=1000)
    s.add_argument("--profile-queries", type=int, default=None)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_bench)

    s = sub.add_parser("selftest", help="run the worked examples")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.fn(args)
    except (FormatError, TimetableError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
