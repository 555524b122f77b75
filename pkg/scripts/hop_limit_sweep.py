"""Contraction cost and hierarchy size for several witness-search hop limits.

    python scripts/hop_limit_sweep.py --stations 100 500 --hop-limits 2 7 18
"""
import argparse
import csv
import sys
import time

from stationgraph.bench import make_queries
from stationgraph.chquery import ch_time_query
from stationgraph.contraction import ContractionParams, build_hierarchy
from stationgraph.graph import build_station_graph
from stationgraph.queries import time_query
from stationgraph.synthetic import SyntheticSpec, generate_synthetic


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--stations", type=int, nargs="+", default=[100, 500])
    p.add_argument("--hop-limits", type=int, nargs="+", default=[2, 7, 18])
    p.add_argument("--queries", type=int, default=200)
    args = p.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["stations", "hop_limit", "contract_s", "shortcuts", "edges", "ch_delete_mins", "base_delete_mins"])
    for n in args.stations:
        g = build_station_graph(generate_synthetic(SyntheticSpec(stations=n, clusters=max(1, n // 10))))
        qs = make_queries(n, args.queries, seed=n)
        base = sum(time_query(g, *q).delete_mins for q in qs) / len(qs)
        for hl in args.hop_limits:
            t = time.perf_counter()
            h = build_hierarchy(g, ContractionParams(hop_limit=hl))
            elapsed = time.perf_counter() - t
            ch = sum(ch_time_query(h, *q).delete_mins for q in qs) / len(qs)
            w.writerow([n, hl, f"{elapsed:.1f}", len(h.shortcuts), h.graph.n_edges, f"{ch:.1f}", f"{base:.1f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
