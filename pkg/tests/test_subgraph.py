import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import corpus, cycle, path, random_graph
from qtedit.graph import Graph, PairMatrix
from qtedit.subgraph import (
    C4,
    P4,
    PairCounters,
    counters_init,
    editable_pairs,
    is_induced,
    is_quasi_threshold,
    list_global,
    list_near,
    omitted_pair,
    shape,
    subgraph_pairs,
)

# a C4 a-b-e-d plus c adjacent to a, b, d (nodes a..e = 0..4)
C4_PLUS = Graph(5, [(0, 1), (1, 4), (4, 3), (3, 0), (2, 0), (2, 1), (2, 3)])
# a {C4,P4}-free graph: a star with centre 0 and a triangle hanging off it
QT_GRAPH = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)])


def _listing(g):
    return sorted((s, omitted_pair(s)) for s in list_global(g))


def test_path_listed_once():
    subs = list(list_global(path(4)))
    assert subs == [(0, 1, 2, 3)]
    assert shape(path(4), subs[0]) == P4


def test_cycle_listed_four_times():
    g = cycle(4)
    subs = list(list_global(g))
    assert len(subs) == 4 and len(set(subs)) == 4
    assert all(shape(g, s) == C4 for s in subs)
    assert {omitted_pair(s) for s in subs} == set(g.edges())


def test_induced_c4_found():
    subs = {frozenset(s) for s in list_global(C4_PLUS) if shape(C4_PLUS, s) == C4}
    assert frozenset({0, 1, 3, 4}) in subs


def test_quasi_threshold_graph_has_no_subgraph():
    assert list(list_global(QT_GRAPH)) == []
    assert is_quasi_threshold(QT_GRAPH)


@pytest.mark.parametrize("pair, expected", [((1, 2), 1), ((0, 3), 0), ((0, 1), 1), ((1, 3), 1)])
def test_list_near_on_path(pair, expected):
    subs = list(list_near(path(4), *pair))
    assert len(subs) == expected
    assert all(s == (0, 1, 2, 3) for s in subs)


def test_list_near_endpoint_pair_with_omitted():
    assert list(list_near(path(4), 0, 3, with_omitted=True)) == [(0, 1, 2, 3)]


def test_editable_pairs():
    s = (0, 1, 2, 3)
    assert len(editable_pairs(s, None)) == 5
    assert (0, 3) not in editable_pairs(s, None)
    b = PairMatrix(4)
    b.set(1, 2)
    assert len(editable_pairs(s, b)) == 4 and (1, 2) not in editable_pairs(s, b)
    c = next(s for s in list_global(cycle(4)) if omitted_pair(s) == (0, 1))
    pairs = editable_pairs(c, None)
    assert len(pairs) == 5 and (0, 1) not in pairs
    assert {(0, 2), (1, 3)} <= set(pairs)


def test_pair_order_central_first():
    assert subgraph_pairs((0, 1, 2, 3))[0] == (1, 2)


@pytest.mark.parametrize("i", range(0, 200, 3))
def test_global_listing_matches_brute_force(i):
    g = random_graph(4 + i % 6, 0.5, i)
    assert _listing(g) == oracle.induced_forbidden(g.n, list(g.edges()))
    assert all(is_induced(g, s) for s in list_global(g))


@pytest.mark.parametrize("i", range(0, 60, 2))
def test_near_listing_matches_brute_force(i):
    g = random_graph(4 + i % 5, 0.5, 500 + i)
    full = oracle.induced_forbidden(g.n, list(g.edges()))
    for u, v in itertools.combinations(range(g.n), 2):
        got = sorted(list_near(g, u, v))
        want = sorted(
            t for t, om in full
            if {u, v} <= set(t) and (g.has(u, v) or tuple(sorted(om)) != (u, v))
        )
        assert got == want, (u, v)
        got_all = sorted(list_near(g, u, v, with_omitted=True))
        assert got_all == sorted(t for t, _ in full if {u, v} <= set(t))


def test_exclusion_is_best_effort_superset_filter():
    g = random_graph(8, 0.5, 3)
    ex = PairMatrix(8)
    ex.set(0, 1)
    ex.set(2, 5)
    kept = [s for s in list_global(g, exclude=ex)
            if not any(ex.has(*p) for p in subgraph_pairs(s))]
    want = [s for s in list_global(g) if not any(ex.has(*p) for p in subgraph_pairs(s))]
    assert kept == want


def test_counters_on_path_and_cycle():
    c = counters_init(path(4))
    assert c.total == 5 and c.get(0, 3) == 0
    assert all(c.get(*p) == 1 for p in subgraph_pairs((0, 1, 2, 3)))
    c = counters_init(cycle(4))
    assert c.total == 20
    assert all(c.get(*e) == 3 for e in cycle(4).edges())
    assert c.get(0, 2) == c.get(1, 3) == 4
    assert counters_init(QT_GRAPH).total == 0


def test_counter_edit_block_unblock():
    g = path(4)
    c = counters_init(g)
    c.edit(g, 1, 2, PairMatrix(4))
    assert c.total == 0
    g = path(4)
    c = counters_init(g)
    before = c.copy()
    c.block(0, 1)
    assert c.get(0, 1) == 0 and c.saved[-1][1] == 1
    c.unblock(0, 1)
    assert c.matches(before) and c.saved == []


def test_unblock_requires_stack_order():
    c = counters_init(path(4))
    with pytest.raises(IndexError):
        c.unblock(0, 1)
    c.block(0, 1)
    c.block(1, 2)
    with pytest.raises(ValueError):
        c.unblock(0, 1)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(4, 9), steps=st.integers(1, 40))
def test_incremental_counters_match_recount(seed, n, steps):
    rng = random.Random(seed)
    g = random_graph(n, 0.5, seed)
    blocked = PairMatrix(n)
    c = PairCounters.from_graph(g)
    stack = []
    for _ in range(steps):
        op = rng.random()
        if op < 0.25 and stack:
            u, v = stack.pop()
            c.unblock(u, v)
            blocked.clear(u, v)
        else:
            u, v = sorted(rng.sample(range(n), 2))
            if op < 0.5 and not blocked.has(u, v):
                blocked.set(u, v)
                c.block(u, v)
                stack.append((u, v))
            else:
                c.edit(g, u, v, blocked)
        assert c.matches(PairCounters.from_graph(g, blocked))
        assert c.total == sum(c.count)


@pytest.mark.parametrize("i,g", corpus(120))
def test_total_zero_iff_quasi_threshold(i, g):
    want = oracle.is_quasi_threshold(g.n, list(g.edges()))
    assert (counters_init(g).total == 0) == want == is_quasi_threshold(g)
