import random

import pytest
from hypothesis import given, settings, strategies as st

from stationgraph.connections import dominates_periodic, equiv_key
from stationgraph.contraction import (
    ContractionParams, Contractor, build_hierarchy, node_priority, precompute_stored_shortcuts,
)
from stationgraph.graph import build_station_graph
from stationgraph.queries import time_search, unpack_connection
from stationgraph.samples import hm, loop_network, overnight_network
from stationgraph.synthetic import SyntheticSpec, generate_synthetic, random_timetable
from stationgraph.timetable import TimetableBuilder, check_consistency


def path_graph():
    b = TimetableBuilder()
    u, v, w = b.station("u", 2), b.station("v", 2), b.station("w", 2)
    b.train([(u, None, 600), (v, 610, 611), (w, 620, None)])
    return build_station_graph(b.build())


def triangle_graph():
    """u -> w direct train beats every u -> v -> w option."""
    b = TimetableBuilder()
    u, v, w = b.station("u", 2), b.station("v", 2), b.station("w", 2)
    b.train([(u, None, 600), (v, 610, None)])
    b.train([(v, None, 615), (w, 640, None)])
    b.train([(u, None, 601), (w, 620, None)])
    return build_station_graph(b.build())


def test_params_validation():
    with pytest.raises(ValueError):
        ContractionParams(hop_limit=0)
    with pytest.raises(ValueError):
        ContractionParams(workers=0)


def test_priority_formula():
    assert node_priority(1, 2, 0) == 5.0
    assert node_priority(1, 2, 2) == 7.0
    assert node_priority(0, 0, 3) == 3.0


def test_path_needs_shortcut():
    stored = precompute_stored_shortcuts(path_graph())
    assert stored[1] == {(0, 2)}


def test_triangle_has_witness():
    stored = precompute_stored_shortcuts(triangle_graph())
    assert stored[1] == set()


def test_loop_shortcut_for_revisited_station():
    g = build_station_graph(loop_network())
    stored = precompute_stored_shortcuts(g)
    assert (1, 1) in stored[2]
    c = Contractor(g)
    c.refresh_stored(set(c.remaining()))
    added = c.contract_node(2)
    assert [(u, w) for u, w, _ in added] == [(1, 1)]
    lp = c.g.edge(1, 1)
    assert [(x.dep, x.arr) for x in lp.conns] == [(hm("12:01"), hm("12:03"))]
    res = time_search(g.tt, c.remaining_out, 0, 3, hm("12:00"))
    assert res.arrival == hm("12:04")


def test_contracting_isolated_node():
    b = TimetableBuilder()
    x, y, _ = b.station("x"), b.station("y"), b.station("lonely")
    b.train([(x, None, 10), (y, 20, None)])
    c = Contractor(build_station_graph(b.build()))
    assert c.contract_node(2) == []
    assert c.priority(0) == 0.0


def test_independent_set_tie_rule():
    b = TimetableBuilder()
    ids = [b.station(f"s{i}") for i in range(5)]
    b.train([(s, None if i == 0 else 10 * i, None if i == 4 else 10 * i + 1) for i, s in enumerate(ids)])
    c = Contractor(build_station_graph(b.build()))
    # path s0 - s1 - s2 - s3 - s4: s3 loses to s1 inside its 2-neighborhood
    assert c.independent_set({v: 1.0 for v in ids}) == [0]
    assert c.independent_set({v: float(v) for v in ids}) == [0]
    assert c.independent_set({v: float(-v) for v in ids}) == [4]
    assert c.independent_set({0: 0.0, 1: 5.0, 2: 5.0, 3: 0.0, 4: 5.0}) == [0, 3]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_selected_nodes_are_three_hops_apart(seed):
    g = build_station_graph(random_timetable(seed, 12, 15))
    c = Contractor(g)
    rng = random.Random(seed)
    sel = c.independent_set({v: float(rng.randrange(4)) for v in range(g.n)})
    for v in sel:
        ring = set(c.neighbors(v))
        for x in list(ring):
            ring |= c.neighbors(x)
        assert not (ring - {v}) & set(sel)


def test_ranks_form_permutation():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=40, clusters=4)))
    h = build_hierarchy(g)
    assert sorted(h.rank) == list(range(g.n))
    assert all(h.rank[v] == i for i, v in enumerate(h.order))


def test_depth_grows_along_contracted_neighbors():
    c = Contractor(path_graph())
    c.refresh_stored(set(c.remaining()))
    c.contract_node(0)
    assert c.depth == [0, 1, 0]
    c.contract_node(1)
    assert c.depth == [0, 1, 2]


def test_shortcuts_unpack_consistently():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=40, clusters=4, seed=3)))
    h = build_hierarchy(g)
    assert h.shortcuts
    for s in h.shortcuts:
        for c in h.graph.edge(s.src, s.dst).conns:
            legs = unpack_connection(c, g.tt)
            assert check_consistency(legs, g.tt)
            assert (legs[0].dep, legs[-1].arr) == (c.dep, c.arr)
            assert legs[0].connection.s1 == s.src and legs[-1].connection.s2 == s.dst


def test_omitted_shortcuts_have_witnesses():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=40, clusters=4, seed=5)))
    c = Contractor(g, record_witnesses=True)
    c.run()
    assert c.witnesses
    for wit in c.witnesses:
        tr1, tr2 = g.tt.transfer[wit.src], g.tt.transfer[wit.dst]
        assert dominates_periodic(wit.witness, wit.candidate, tr1, tr2)
        assert not dominates_periodic(wit.candidate, wit.witness, tr1, tr2)
        legs = unpack_connection(wit.witness, g.tt)
        assert check_consistency(legs, g.tt)


def test_no_parallel_edges_and_remaining_graph_shrinks():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=30, clusters=3)))
    seen = []

    def check(c: Contractor):
        for u in range(g.n):
            targets = [w for w, _ in c.g.out_edges(u)]
            assert len(targets) == len(set(targets))
        seen.append(len(c.remaining()))

    build_hierarchy(g, on_round=check)
    assert seen == sorted(seen, reverse=True) and seen[-1] == 0


def test_worker_count_does_not_change_hierarchy():
    g = build_station_graph(generate_synthetic(SyntheticSpec(stations=50, clusters=5, seed=2)))
    h1 = build_hierarchy(g, ContractionParams(workers=1))
    h4 = build_hierarchy(g, ContractionParams(workers=4))
    assert h1.rank == h4.rank and h1.shortcuts == h4.shortcuts
    for (u, w, a), (u2, w2, b) in zip(h1.graph.edges(), h4.graph.edges()):
        assert (u, w) == (u2, w2) and [x.key() for x in a.conns] == [x.key() for x in b.conns]


def test_overnight_hierarchy_keeps_dominant_sets():
    g = build_station_graph(overnight_network())
    h = build_hierarchy(g)
    for u, w, e in g.edges():
        merged = h.graph.edge(u, w)
        assert sorted(map(equiv_key, e.conns)) == sorted(map(equiv_key, merged.conns))
