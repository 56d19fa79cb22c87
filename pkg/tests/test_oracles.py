import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhcycle import oracles
from bhcycle.faults import FaultSet
from bhcycle.search import SearchBudgetExceeded, SearchStats, reach, spanning_paths
from bhcycle.topology import build_direct, canonical
from bhcycle.verifier import verify_cycle, verify_path

T1 = build_direct(1)
T2 = build_direct(2)
T3 = build_direct(3)


def test_ham_cycle_fault_free():
    for t in (T1, T2, T3):
        c = oracles.ham_cycle(t)
        assert c is not None and not verify_cycle(t, (), c)


def test_ham_cycle_absent_on_f4_pattern():
    f = [(0, 5), (0, 7), (2, 5), (2, 7)]
    assert oracles.ham_cycle(T2, f) is None


def test_ham_cycle_absent_on_degree_one():
    f = [(0, 1), (0, 3), (0, 5)]
    assert oracles.ham_cycle(T2, f) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 6))
def test_ham_cycle_witness_is_valid(seed, k):
    rng = random.Random(seed)
    f = rng.sample(T2.edges, k)
    c = oracles.ham_cycle(T2, f)
    if c is not None:
        assert not verify_cycle(T2, f, c)


def test_through_edge():
    e = (0, 1)
    c = oracles.ham_cycle_through_edge(T3, [], e)
    assert canonical(c.vertices[0], c.vertices[-1]) == e
    assert not verify_cycle(T3, (), c)
    with pytest.raises(ValueError):
        oracles.ham_cycle_through_edge(T2, [(0, 1)], (0, 1))
    with pytest.raises(ValueError):
        oracles.ham_cycle_through_edge(T2, [], (0, 2))


def test_laceable_path():
    p = oracles.ham_path_laceable(T3, [], 0, 63)
    assert p.s == 0 and p.t == 63 and not verify_path(T3, (), p, 0, 63)
    with pytest.raises(ValueError):
        oracles.ham_path_laceable(T2, [], 0, 2)


def test_laceable_path_absent():
    # cut 0 off entirely except one edge: no path may end elsewhere
    f = [(0, 3), (0, 5), (0, 7)]
    assert oracles.ham_path_laceable(T2, f, 2, 1) is None


def test_two_disjoint_paths():
    pair = oracles.two_disjoint_paths(T2, [], 0, 1, 2, 3)
    assert pair.first.s == 0 and pair.first.t == 1
    assert pair.second.s == 2 and pair.second.t == 3
    assert not set(pair.first.vertices) & set(pair.second.vertices)
    assert len(pair.first) + len(pair.second) == 16
    with pytest.raises(ValueError):
        oracles.two_disjoint_paths(T2, [], 0, 1, 2, 2)
    with pytest.raises(ValueError):
        oracles.two_disjoint_paths(T2, [], 0, 1, 3, 2)


def test_minus_vertex():
    p = oracles.ham_path_minus_vertex(T2, 1, 0, 2)
    assert not verify_path(T2, (), p, 0, 2, skip=[1])
    with pytest.raises(ValueError):
        oracles.ham_path_minus_vertex(T2, 1, 0, 3)
    with pytest.raises(ValueError):
        oracles.ham_path_minus_vertex(T2, 1, 0, 0)


def test_over_bound_is_logged(caplog):
    caplog.set_level("INFO", logger="bhcycle.oracles")
    oracles.ham_path_laceable(T2, T2.edges[:3], 0, 1)
    assert "above the cited bound" in caplog.text


def test_budget_raises():
    with pytest.raises(SearchBudgetExceeded):
        oracles.ham_cycle(build_direct(4), budget=10)


def test_stats_count_nodes():
    stats = SearchStats()
    oracles.ham_path_laceable(T2, [], 0, 1, stats=stats)
    assert stats.nodes > 0


def test_spanning_paths_validation():
    adj = list(T2.adj_mask)
    full = (1 << 16) - 1
    with pytest.raises(ValueError):
        spanning_paths(adj, full, [])
    with pytest.raises(ValueError):
        spanning_paths(adj, full, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        spanning_paths(adj, full & ~1, [(0, 1)])
    # parity imbalance is refuted without search
    assert spanning_paths(adj, full, [(0, 2)]) is None


def test_reach():
    adj = list(T1.adj_mask)
    assert reach(adj, 0b1111, 0) == 0b1111
    assert reach(adj, 0b0101, 0) == 0b0001


def test_faultset_accepted():
    f = FaultSet.of(T2, [(0, 1)])
    assert oracles.ham_cycle(T2, f) is not None
