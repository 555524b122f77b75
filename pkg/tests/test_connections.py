import random

import pytest
from hypothesis import given, settings, strategies as st

from naive import (
    naive_filter, naive_link, naive_link_time, random_arrival_set, random_edge_pairs,
    same_arrivals, same_connections,
)
from stationgraph.connections import (
    Connection, ConnectionSet, connection_set, dominates, dominates_periodic, equiv_key,
    equivalent, link_and_minimum, link_and_minimum_time, link_edges, link_time,
    minimum_connections, profile_key,
)
from stationgraph.graph import build_station_graph
from stationgraph.samples import hm, overnight_network
from stationgraph.timetable import DAY

seeds = st.integers(0, 10**6)


def conn(z1, z2, dep, arr, cd=None, ca=None):
    return Connection(z1, z2, dep, arr, cd, ca)


def test_domination_basic():
    slow = conn(1, 2, 100, 200)
    fast = conn(3, 4, 110, 190)
    assert dominates(fast, slow, 5, 5)
    assert not dominates(slow, fast, 5, 5)
    assert dominates(slow, slow, 5, 5)


def test_critical_departure_blocks_domination():
    # q boards a train that was already dwelling 2 min (< transfer 5) at S1
    q = conn(1, 2, 100, 200, cd=2)
    later = conn(3, 4, 102, 190)
    assert not dominates(later, q, 5, 5)
    assert dominates(conn(3, 4, 103, 190), q, 5, 5)
    assert dominates(conn(1, 4, 100, 190), q, 5, 5)


def test_critical_arrival_blocks_domination():
    q = conn(1, 2, 100, 200, ca=1)
    assert not dominates(conn(3, 4, 100, 197), q, 5, 5)
    assert dominates(conn(3, 4, 100, 196), q, 5, 5)
    assert dominates(conn(3, 2, 100, 199), q, 5, 5)


def test_periodic_domination_uses_next_day_copy():
    q = conn(1, 2, DAY - 10, DAY + 100)
    p = conn(3, 4, 5, 80)  # tomorrow's 0:05 copy departs after q and arrives earlier
    assert not dominates(p, q, 0, 0)
    assert dominates_periodic(p, q, 0, 0)


# criticality belongs to the stop event: events 1 and 3 dwell below transfer time 5
DWELL = {0: None, 1: 2, 2: None, 3: 0}
connections = st.builds(
    lambda z1, z2, dep, ln: Connection(z1, z2, dep, dep + ln, DWELL[z1], DWELL[z2]),
    st.integers(0, 3), st.integers(0, 3), st.integers(0, 200), st.integers(0, 200))


@given(connections, connections, connections)
def test_domination_is_transitive(a, b, c):
    if dominates(a, b, 5, 5) and dominates(b, c, 5, 5):
        assert dominates(a, c, 5, 5)


@given(connections, connections)
def test_mutual_domination_is_equivalence(a, b):
    both = dominates(a, b, 5, 5) and dominates(b, a, 5, 5)
    assert both == equivalent(a, b)


def test_connection_set_index():
    tt = overnight_network()
    g = build_station_graph(tt)
    e = g.edge(2, 4)
    assert [c.dep for c in e.conns] == [hm("3:00"), hm("4:00")]
    assert e.min_len == 60
    assert e.first_at_or_after(hm("3:30")) == 1
    assert e.first_at_or_after(hm("4:01")) == 2  # wraps to tomorrow's 3:00
    c, offset = e.get(2)
    assert c.dep + offset == DAY + hm("3:00")
    with pytest.raises(ValueError):
        ConnectionSet([conn(0, 1, 50, 60), conn(0, 1, 10, 20)], 0, 1, tt)
    with pytest.raises(ValueError):
        ConnectionSet([conn(0, 1, DAY, DAY + 1)], 0, 1, tt)


def test_link_mismatched_middle_station():
    g = build_station_graph(overnight_network())
    with pytest.raises(ValueError):
        link_edges(g.edge(0, 1), g.edge(2, 4), g.tt)


def test_overnight_link():
    tt = overnight_network()
    g = build_station_graph(tt)
    ac = link_edges(g.edge(0, 1), g.edge(1, 2), tt)
    bc_e = link_edges(ac, g.edge(2, 4), tt)
    assert [(c.dep, c.arr) for c in bc_e.conns] == [(hm("23:05"), DAY + hm("5:00"))]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_link_edges_matches_naive(seed):
    tt, g, pairs = random_edge_pairs(seed, max_transfer=random.Random(seed).choice([6, 30]))
    for e1, e2 in pairs:
        assert same_connections(link_edges(e1, e2, tt).conns, naive_link(e1, e2, tt))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_minimum_and_link_and_minimum_match_naive(seed):
    tt, g, pairs = random_edge_pairs(seed)
    for e1, e2 in pairs:
        u, w = e1.s1, e2.s2
        linked = link_edges(e1, e2, tt)
        existing = g.edge(u, w)
        if existing is None:
            continue
        want = naive_filter(list(existing.conns) + list(linked.conns), tt.transfer[u], tt.transfer[w])
        assert same_connections(minimum_connections(existing, linked, tt).conns, want)
        merged, changed = link_and_minimum(existing, e1, e2, tt)
        assert same_connections(merged.conns, want)
        assert changed == (sorted(map(equiv_key, want)) != sorted(map(equiv_key, existing.conns)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_link_time_matches_naive(seed):
    tt, g, pairs = random_edge_pairs(seed)
    rng = random.Random(seed)
    for _, e in pairs:
        ac = random_arrival_set(rng, tt, e.s1, rng.randint(1, 5))
        assert same_arrivals(link_time(ac, e, tt), naive_link_time(ac, e, tt))
        merged, _ = link_and_minimum_time([], ac, e, tt)
        assert same_arrivals(merged, naive_link_time(ac, e, tt))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sets_are_canonical_and_closed(seed):
    tt, g, pairs = random_edge_pairs(seed)
    for e1, e2 in pairs:
        cs = link_edges(e1, e2, tt)
        keys = [profile_key(c) for c in cs.conns]
        assert keys == sorted(keys)
        assert all(0 <= c.dep < DAY for c in cs.conns)
        assert same_connections(cs.conns, naive_filter(cs.conns, cs.tr1, cs.tr2))
        again = connection_set(list(cs.conns), cs.s1, cs.s2, tt)
        assert [c.key() for c in again.conns] == [c.key() for c in cs.conns]
