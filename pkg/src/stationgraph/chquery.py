"""Queries on a contracted hierarchy.

Time queries search forward over upward edges, loops and the edges of the
downward corridor of the target.  Profile queries run a forward search over
upward edges and a backward search over downward edges in alternation and
combine the labels at every settled station.
"""
from __future__ import annotations

import heapq
from typing import Optional

from .connections import INF, ConnectionSet, link_and_minimum, link_edges, minimum_connections
from .contraction import Hierarchy
from .queries import (
    ProfileResult, TimeResult, _check_station, _new_min_length, max_duration, time_search,
)
from .timetable import DAY


def backward_corridor(h: Hierarchy, b: int) -> set[tuple[int, int]]:
    """Edges (x, y) with rank(x) > rank(y) on downward paths ending at ``b``."""
    g, rank = h.graph, h.rank
    marked: set[tuple[int, int]] = set()
    seen = {b}
    stack = [b]
    while stack:
        y = stack.pop()
        for x, _ in g.in_edges(y):
            if x != y and rank[x] > rank[y]:
                marked.add((x, y))
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
    return marked


def ch_time_query(h: Hierarchy, a: int, b: int, t0: int) -> TimeResult:
    tt = h.tt
    _check_station(tt, a, b)
    if t0 < 0:
        raise ValueError("departure time must be non-negative")
    g, rank = h.graph, h.rank
    corridor = backward_corridor(h, b)

    def out_edges(s):
        return [(t, e) for t, e in g.out_edges(s)
                if rank[t] > rank[s] or t == s or (s, t) in corridor]

    return time_search(tt, out_edges, a, b, t0)


def ch_profile_query(h: Hierarchy, a: int, b: int, *, slack: Optional[int] = None) -> ProfileResult:
    tt = h.tt
    _check_station(tt, a, b)
    if a == b:
        return ProfileResult(None, 0, {})
    g, rank = h.graph, h.rank
    if slack is None:
        slack = tt.transfer[a] + tt.transfer[b] + DAY
    fwd: dict[int, ConnectionSet] = {}
    bwd: dict[int, ConnectionSet] = {}
    keys = ({}, {})
    heaps: tuple[list, list] = ([], [])
    result: list[Optional[ConnectionSet]] = [None]
    bound = [INF]

    def offer(cs: Optional[ConnectionSet]):
        if cs is None or cs.n == 0:
            return
        cur = result[0]
        new = cs if cur is None else minimum_connections(cur, cs, tt)
        if cur is None or new.keys() != cur.keys():
            result[0] = new
            bound[0] = max_duration(new) + slack

    def push(side: int, t: int, old, new: ConnectionSet):
        kk = _new_min_length(old, new)
        if kk < keys[side].get(t, INF):
            keys[side][t] = kk
            heapq.heappush(heaps[side], (kk, t))

    def fold(m: int):
        f, bl = fwd.get(m), bwd.get(m)
        if m == b:
            offer(f)
        if m == a:
            offer(bl)
        if f is not None and bl is not None:
            offer(link_edges(f, bl, tt))

    for t, e in g.out_edges(a):
        if rank[t] > rank[a] or t == a:
            fwd[t] = e
            push(0, t, None, e)
    for x, e in g.in_edges(b):
        if rank[x] > rank[b] or x == b:
            bwd[x] = e
            push(1, x, None, e)
    fold(a)
    fold(b)
    pops = 0
    side = 0
    while True:
        live = [s for s in (0, 1) if heaps[s] and heaps[s][0][0] <= bound[0]]
        if not live:
            break
        if side not in live:
            side = live[0]
        k, s = heapq.heappop(heaps[side])
        if keys[side].get(s) != k:
            continue
        del keys[side][s]
        pops += 1
        fold(s)
        if side == 0:
            src = fwd[s]
            for t, e in g.out_edges(s):
                if rank[t] > rank[s] or t == s:
                    old = fwd.get(t)
                    new, changed = link_and_minimum(old, src, e, tt)
                    if changed:
                        fwd[t] = new
                        push(0, t, old, new)
                        fold(t)
        else:
            dst = bwd[s]
            for x, e in g.in_edges(s):
                if rank[x] > rank[s] or x == s:
                    old = bwd.get(x)
                    new, changed = link_and_minimum(old, e, dst, tt)
                    if changed:
                        bwd[x] = new
                        push(1, x, old, new)
                        fold(x)
        side = 1 - side
    return ProfileResult(result[0], pops, fwd)
