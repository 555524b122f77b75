"""Station graph: one node per station, one connection set per ordered station pair."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterator

from .connections import ConnectionSet, connection_set, elementary_connection, minimum_connections
from .timetable import Timetable, validate_timetable


class TimetableError(ValueError):
    pass


class StationGraph:
    def __init__(self, tt: Timetable):
        self.tt = tt
        self.n = tt.n_stations
        self.out: list[dict[int, ConnectionSet]] = [dict() for _ in range(self.n)]
        self.inc: list[dict[int, ConnectionSet]] = [dict() for _ in range(self.n)]

    def edge(self, u: int, w: int) -> ConnectionSet | None:
        return self.out[u].get(w)

    def edges(self) -> Iterator[tuple[int, int, ConnectionSet]]:
        for u in range(self.n):
            for w in sorted(self.out[u]):
                yield u, w, self.out[u][w]

    def out_edges(self, u: int) -> list[tuple[int, ConnectionSet]]:
        return sorted(self.out[u].items())

    def in_edges(self, w: int) -> list[tuple[int, ConnectionSet]]:
        return sorted(self.inc[w].items())

    @property
    def n_edges(self) -> int:
        return sum(len(d) for d in self.out)

    @property
    def n_connections(self) -> int:
        return sum(e.n for _, _, e in self.edges())

    def set_edge(self, u: int, w: int, cs: ConnectionSet) -> None:
        if cs.n == 0:
            self.out[u].pop(w, None)
            self.inc[w].pop(u, None)
            return
        self.out[u][w] = cs
        self.inc[w][u] = cs

    def merge_edge(self, u: int, w: int, incoming: ConnectionSet) -> bool:
        """Merge ``incoming`` into edge ``(u, w)``; returns whether the edge changed."""
        if incoming.n == 0:
            return False
        cur = self.out[u].get(w)
        if cur is None:
            self.set_edge(u, w, incoming)
            return True
        merged = minimum_connections(cur, incoming, self.tt)
        changed = merged.keys() != cur.keys()
        if changed:
            self.set_edge(u, w, merged)
        return changed

    def copy(self) -> "StationGraph":
        g = StationGraph(self.tt)
        for u, w, cs in self.edges():
            g.set_edge(u, w, cs)
        return g


def build_station_graph(tt: Timetable) -> StationGraph:
    problems = validate_timetable(tt)
    if problems:
        raise TimetableError("; ".join(f"{p.where}: {p.message}" for p in problems))
    g = StationGraph(tt)
    by_pair = defaultdict(list)
    for i, c in enumerate(tt.elementary):
        by_pair[c.s1, c.s2].append(elementary_connection(tt, i))
    for (u, w) in sorted(by_pair):
        g.set_edge(u, w, connection_set(by_pair[u, w], u, w, tt))
    return g
