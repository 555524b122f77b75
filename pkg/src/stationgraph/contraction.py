"""Node contraction of a station graph.

Necessary shortcuts are determined ahead of contraction ("stored
shortcuts"): one bounded one-to-many profile search from ``u`` decides, for
every neighbor ``v`` of ``u`` and every out-neighbor ``w`` of ``v``, whether
the connections ``u -> v (-> v) -> w`` are all strictly dominated by the
search's ``u -> w`` profile.  Only the pairs are stored; the connections are
recomputed when ``v`` is contracted.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .connections import (
    Connection, ConnectionSet, dominates_periodic, link_edges, minimum_connections,
)
from .graph import StationGraph
from .queries import profile_search

log = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class ContractionParams:
    hop_limit: int = 7
    transfer_limit: int = 5
    duration_slack: int = 0
    edge_quotient_weight: float = 10.0
    depth_weight: float = 1.0
    workers: int = 1
    max_loop_iterations: int = 32

    def __post_init__(self):
        if self.hop_limit < 1:
            raise ValueError("hop_limit must be >= 1")
        if self.transfer_limit < 0 or self.duration_slack < 0 or self.workers < 1:
            raise ValueError("invalid contraction parameters")


@dataclass(frozen=True)
class StoredShortcut:
    src: int
    dst: int
    owner: int


@dataclass
class Witness:
    """An omitted candidate connection and the search label that dominated it."""

    src: int
    dst: int
    via: int
    candidate: Connection
    witness: Connection


@dataclass
class Hierarchy:
    graph: StationGraph
    rank: list[int]
    order: list[int]
    shortcuts: list[StoredShortcut]
    params: ContractionParams

    @property
    def tt(self):
        return self.graph.tt


def strictly_dominated(c: Connection, pool: Optional[ConnectionSet], tr1: int, tr2: int
                       ) -> Optional[Connection]:
    if pool is None:
        return None
    for d in pool.conns:
        if dominates_periodic(d, c, tr1, tr2) and not dominates_periodic(c, d, tr1, tr2):
            return d
    return None


def close_loop(g: StationGraph, x: int, max_iter: int = 32) -> bool:
    """Make the loop at ``x`` closed under riding it repeatedly."""
    lp = g.edge(x, x)
    if lp is None:
        return False
    changed = False
    for _ in range(max_iter):
        twice = link_edges(lp, lp, g.tt)
        merged = minimum_connections(lp, twice, g.tt)
        if merged.keys() == lp.keys():
            break
        lp = merged
        changed = True
    if changed:
        g.set_edge(x, x, lp)
    return changed


class Contractor:
    def __init__(self, g: StationGraph, params: ContractionParams = ContractionParams(),
                 record_witnesses: bool = False):
        self.g = g.copy()
        self.tt = g.tt
        self.p = params
        n = g.n
        self.contracted = [False] * n
        self.depth = [0] * n
        self.rank = [-1] * n
        self.order: list[int] = []
        self.stored: list[set[Pair]] = [set() for _ in range(n)]
        self.shortcuts: list[StoredShortcut] = []
        self.record_witnesses = record_witnesses
        self.witnesses: list[Witness] = []
        self.rounds = 0
        for x in range(n):
            close_loop(self.g, x, params.max_loop_iterations)

    # ------------------------------------------------------------ remaining graph
    def remaining_out(self, u: int) -> list[tuple[int, ConnectionSet]]:
        c = self.contracted
        return [(w, e) for w, e in self.g.out_edges(u) if not c[w]]

    def remaining_in(self, w: int) -> list[tuple[int, ConnectionSet]]:
        c = self.contracted
        return [(u, e) for u, e in self.g.in_edges(w) if not c[u]]

    def neighbors(self, v: int) -> set[int]:
        return ({w for w, _ in self.remaining_out(v)} | {u for u, _ in self.remaining_in(v)}) - {v}

    def remaining(self) -> list[int]:
        return [v for v in range(self.g.n) if not self.contracted[v]]

    # ------------------------------------------------------------ shortcuts
    def via_connections(self, u: int, v: int, w: int) -> ConnectionSet:
        """Dominant connections u -> v -> w, optionally riding the loop at v."""
        g = self.g
        e_uv, e_vw = g.edge(u, v), g.edge(v, w)
        res = link_edges(e_uv, e_vw, self.tt)
        lp = g.edge(v, v)
        if lp is not None:
            res = minimum_connections(res, link_edges(link_edges(e_uv, lp, self.tt), e_vw, self.tt), self.tt)
        return res

    def stored_from(self, u: int, only: Optional[set[int]] = None) -> dict[int, set[Pair]]:
        """Necessary shortcuts ``(u, w)`` for each remaining out-neighbor ``v`` of ``u``."""
        cands: dict[tuple[int, int], ConnectionSet] = {}
        for v, _ in self.remaining_out(u):
            if v == u or (only is not None and v not in only):
                continue
            for w, _ in self.remaining_out(v):
                if w == v:
                    continue
                cs = self.via_connections(u, v, w)
                if cs.n:
                    cands[v, w] = cs
        out: dict[int, set[Pair]] = {}
        if not cands:
            return out
        limit = max(c.arr - c.dep for cs in cands.values() for c in cs.conns) + self.p.duration_slack
        tr_u = self.tt.transfer[u]
        pending: dict[int, list[tuple[int, int]]] = {}
        for v, w in cands:
            pending.setdefault(w, []).append((v, w))

        def witnessed(v, w, pool) -> Optional[list[Witness]]:
            found = []
            for c in cands[v, w].conns:
                d = strictly_dominated(c, pool, tr_u, self.tt.transfer[w])
                if d is None:
                    return None
                found.append(Witness(u, w, v, c, d))
            return found

        def settle(w: int, pool: ConnectionSet) -> bool:
            # domination is transitive and labels only improve, so a witnessed
            # pair stays witnessed for the rest of the search
            if w in pending:
                pending[w] = [vw for vw in pending[w] if witnessed(*vw, pool) is None]
                if not pending[w]:
                    del pending[w]
            return not pending

        search = profile_search(self.tt, self.remaining_out, u, None, prune=False, max_len=limit,
                                hop_limit=self.p.hop_limit, max_ntr=self.p.transfer_limit,
                                stop=settle)
        for (v, w) in cands:
            found = witnessed(v, w, search.labels.get(w))
            if found is None:
                out.setdefault(v, set()).add((u, w))
            elif self.record_witnesses:
                self.witnesses.extend(found)
        return out

    def _map(self, fn, items):
        if self.p.workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(self.p.workers) as ex:
                return list(ex.map(fn, items))
        return [fn(x) for x in items]

    def refresh_stored(self, nodes: set[int]) -> None:
        nodes = {x for x in nodes if not self.contracted[x]}
        sources = sorted({u for x in nodes for u, _ in self.remaining_in(x) if u != x})
        results = self._map(lambda u: self.stored_from(u, nodes), sources)
        for x in nodes:
            self.stored[x] = set()
        for res in results:
            for v, pairs in res.items():
                if v in nodes:
                    self.stored[v] |= pairs

    # ------------------------------------------------------------ ordering
    def priority(self, v: int) -> float:
        removed = len(self.remaining_out(v)) + sum(1 for u, _ in self.remaining_in(v) if u != v)
        quotient = len(self.stored[v]) / removed if removed else 0.0
        return self.p.edge_quotient_weight * quotient + self.p.depth_weight * self.depth[v]

    def independent_set(self, prio: dict[int, float]) -> list[int]:
        nb = {v: self.neighbors(v) for v in prio}
        sel = []
        for v in sorted(prio):
            key = (prio[v], v)
            ring = set(nb[v])
            for x in nb[v]:
                ring |= nb[x]
            ring.discard(v)
            if all(key < (prio[x], x) for x in ring):
                sel.append(v)
        return sel

    # ------------------------------------------------------------ contraction
    def shortcut_sets(self, v: int) -> list[tuple[int, int, ConnectionSet]]:
        out = []
        for u, w in sorted(self.stored[v]):
            if self.g.edge(u, v) is None or self.g.edge(v, w) is None:
                continue
            cs = self.via_connections(u, v, w)
            if cs.n:
                out.append((u, w, cs))
        return out

    def apply(self, v: int, sets: list[tuple[int, int, ConnectionSet]]) -> set[int]:
        """Insert computed shortcuts of ``v`` and remove ``v``; returns touched nodes."""
        touched = self.neighbors(v)
        for u, w, cs in sets:
            self.g.merge_edge(u, w, cs)
            if u == w:
                close_loop(self.g, u, self.p.max_loop_iterations)
            self.shortcuts.append(StoredShortcut(u, w, v))
        self.contracted[v] = True
        self.rank[v] = len(self.order)
        self.order.append(v)
        for u in touched:
            self.depth[u] = max(self.depth[u], self.depth[v] + 1)
        return touched

    def contract_node(self, v: int) -> list[tuple[int, int, ConnectionSet]]:
        sets = self.shortcut_sets(v)
        touched = self.apply(v, sets)
        self.refresh_stored(touched)
        return sets

    def run(self, on_round: Optional[Callable[["Contractor"], None]] = None) -> Hierarchy:
        self.refresh_stored(set(self.remaining()))
        prio = {v: self.priority(v) for v in self.remaining()}
        while prio:
            sel = self.independent_set(prio)
            sets = self._map(self.shortcut_sets, sel)
            touched: set[int] = set()
            for v, s in zip(sel, sets):
                touched |= self.apply(v, s)
                del prio[v]
            touched = {x for x in touched if not self.contracted[x]}
            self.refresh_stored(touched)
            for x in touched:
                prio[x] = self.priority(x)
            self.rounds += 1
            log.debug("round %d: contracted %d, remaining %d", self.rounds, len(sel), len(prio))
            if on_round is not None:
                on_round(self)
        return Hierarchy(self.g, self.rank, self.order, self.shortcuts, self.p)


def precompute_stored_shortcuts(g: StationGraph, params: ContractionParams = ContractionParams()
                                ) -> list[set[Pair]]:
    c = Contractor(g, params)
    c.refresh_stored(set(c.remaining()))
    return c.stored


def node_priority(n_shortcuts: int, n_removed: int, depth: int,
                  params: ContractionParams = ContractionParams()) -> float:
    quotient = n_shortcuts / n_removed if n_removed else 0.0
    return params.edge_quotient_weight * quotient + params.depth_weight * depth


def build_hierarchy(g: StationGraph, params: ContractionParams = ContractionParams(),
                    on_round: Optional[Callable[[Contractor], None]] = None) -> Hierarchy:
    return Contractor(g, params).run(on_round)
