import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhcycle.faults import (
    EdgeClass,
    FaultFileError,
    FaultSet,
    classify_edge,
    find_f4_cycles,
    isolated_vertices,
    load_faults,
    local_faults,
    min_degree,
    partition,
    pivot_vertices,
    subcube_degree,
)
from bhcycle.topology import build_direct, canonical, encode

T2 = build_direct(2)
T3 = build_direct(3)

FIG1 = [((0, 0), (1, 1)), ((0, 0), (3, 1)), ((2, 0), (1, 1)), ((2, 0), (3, 1))]


def _fs(t, pairs):
    return FaultSet.of(t, [(encode(a), encode(b)) for a, b in pairs])


def test_faultset_canonical_and_contains():
    f = FaultSet.of(T2, [(5, 0), (0, 7)])
    assert f.sorted_edges() == [(0, 5), (0, 7)]
    assert (5, 0) in f and len(f) == 2
    assert f == FaultSet.of(T2, [(0, 5), (7, 0)])
    assert f.without((0, 5)).sorted_edges() == [(0, 7)]


def test_faultset_rejects_non_edges():
    with pytest.raises(ValueError):
        FaultSet.of(T2, [(0, 2)])


def test_load_faults_roundtrip():
    f = _fs(T2, FIG1)
    assert load_faults(T2, f.to_json()) == f


@pytest.mark.parametrize("text", ["not json", "{}", "[[1, 2]]", "[[[0, 0], [0, 9]]]", "[[[0, 0], [2, 0]]]",
                                  "[[[0], [1]]]"])
def test_load_faults_errors(text):
    with pytest.raises(FaultFileError):
        load_faults(T2, text)


def test_by_dimension_and_slice():
    f = _fs(T2, FIG1)
    assert f.by_dimension() == [0, 4]
    assert f.slice(1) == f.edges


def test_min_degree():
    assert min_degree(T3, FaultSet.of(T3)) == 6
    f = _fs(T2, FIG1)
    assert min_degree(T2, f) == 2


def test_partition_counts():
    t = T3
    edges = [e for e in t.edges if t.edge_dim[e] == 0][:3] + [e for e in t.edges if t.edge_dim[e] == 2][:2]
    part = partition(FaultSet.of(t, edges), 2)
    assert len(part.cross) == 2 and sum(part.counts) == 3
    with pytest.raises(ValueError):
        partition(FaultSet.of(t, edges), 0)
    for j in range(4):
        assert all(T2.has_edge(*e) for e in local_faults(part, j))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_partition_is_a_partition(seed):
    rng = random.Random(seed)
    f = FaultSet.of(T3, rng.sample(T3.edges, 8))
    for i in (1, 2):
        part = partition(f, i)
        pieces = [part.cross, *part.inside]
        assert frozenset().union(*pieces) == f.edges
        assert sum(len(p) for p in pieces) == len(f)


def test_classify_edge():
    t = T3
    v = 0
    cross = [canonical(v, w) for w, d in t.neighbors[v] if d == 2]
    inner = next(canonical(v, w) for w, d in t.neighbors[v] if d == 0)
    assert classify_edge(t, frozenset(), inner, 2) is EdgeClass.R_EDGE
    assert classify_edge(t, frozenset(cross[:1]), inner, 2) is EdgeClass.R_EDGE
    assert classify_edge(t, frozenset(cross), inner, 2) is EdgeClass.NON_R_EDGE
    with pytest.raises(ValueError):
        classify_edge(t, frozenset(), cross[0], 2)


def test_pivot_and_isolated():
    t = T3
    v = 0
    inner = [canonical(v, w) for w, d in t.neighbors[v] if d != 2]
    assert pivot_vertices(t, frozenset(inner[:-1]), 2) == [v]
    assert isolated_vertices(t, frozenset(inner), 2) == [v]
    assert subcube_degree(t, frozenset(inner), v, 2) == 0


def test_fig1_pattern_f4_cycles():
    # keeping two backup neighbours makes the dropped pair {(1,1), (3,1)} degree 2 as well
    f = _fs(T2, FIG1)
    cycles = find_f4_cycles(T2, f)
    assert [c.pair for c in cycles] == [(0, 2), (5, 7)]
    assert set(cycles[0].cycle) == {0, 1, 2, 3}
    assert cycles[0].labels(2)["pair"] == [[0, 0], [2, 0]]


def test_single_f4_cycle():
    f = FaultSet.of(T2, [(0, 3), (0, 7), (2, 3), (2, 7)])
    cycles = find_f4_cycles(T2, f)
    assert len(cycles) == 1 and cycles[0].pair == (0, 2)


def _f4_brute(t, faults):
    live = {v: {w for w, _ in t.neighbors[v] if canonical(v, w) not in faults} for v in t.vertices}
    out = set()
    for u, v in itertools.combinations(t.vertices, 2):
        if len(live[u]) == len(live[v]) == 2 and live[u] == live[v]:
            out.add((u, v))
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 10))
def test_f4_detector_matches_brute_force(seed, k):
    rng = random.Random(seed)
    faults = frozenset(rng.sample(T2.edges, k))
    assert {c.pair for c in find_f4_cycles(T2, faults)} == _f4_brute(T2, faults)
