"""Random-query benchmark on a synthetic hierarchical network.

    python scripts/run_benchmark.py --stations 500 --queries 1000 --hop-limit 7
"""
import argparse
import time
from pathlib import Path

from stationgraph.bench import BenchmarkMismatch, run_benchmark
from stationgraph.contraction import ContractionParams, build_hierarchy
from stationgraph.graph import build_station_graph
from stationgraph.synthetic import SyntheticSpec, generate_synthetic


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--stations", type=int, default=500)
    p.add_argument("--clusters", type=int, default=None)
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--profile-queries", type=int, default=100)
    p.add_argument("--hop-limit", type=int, default=7)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default="results/benchmark.csv")
    args = p.parse_args()

    spec = SyntheticSpec(stations=args.stations, clusters=args.clusters or max(1, args.stations // 10),
                         seed=args.seed)
    g = build_station_graph(generate_synthetic(spec))
    print(f"network: {g.n} stations, {g.n_edges} edges, {g.n_connections} connections")
    t = time.perf_counter()
    h = build_hierarchy(g, ContractionParams(hop_limit=args.hop_limit))
    print(f"contraction: {time.perf_counter() - t:.1f}s, {len(h.shortcuts)} shortcuts")
    try:
        report = run_benchmark(g, h, args.queries, args.seed, args.profile_queries)
    except BenchmarkMismatch as e:
        raise SystemExit(f"answer mismatch: {e}")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_csv())
    print(report.to_csv(), end="")


if __name__ == "__main__":
    main()
