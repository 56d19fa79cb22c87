import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from bhcycle import oracles
from bhcycle.constructor import (
    CaseTrace,
    PreconditionError,
    StitchError,
    check_preconditions,
    construct,
    inductive_construct,
    lemma8_construct,
    stitch,
)
from bhcycle.constructor.frame import Frame, FrameKey
from bhcycle.faults import FaultSet
from bhcycle.harness.generators import generate_faults
from bhcycle.topology import build_direct, canonical
from bhcycle.verifier import verify_cycle, verify_trace

T2, T3, T4 = build_direct(2), build_direct(3), build_direct(4)


def _ok(t, f):
    cycle, trace = construct(t, f)
    assert len(cycle) == t.order
    assert not verify_cycle(t, f, cycle)
    assert not verify_trace(t, f, trace)
    return cycle, trace


# --- preconditions ------------------------------------------------------------


def test_preconditions_pass_n3():
    f = generate_faults("uniform", 3, 8, seed=5)
    r = check_preconditions(T3, f)
    assert r.ok and r.bound == 8 and r.violations() == []


def test_preconditions_f4_witness():
    r = check_preconditions(T2, [(0, 5), (0, 7), (2, 5), (2, 7)])
    assert not r.f4_ok and r.degree_ok
    assert (0, 2) in [c.pair for c in r.f4_cycles]
    assert any("f4-cycle" in v for v in r.violations())
    assert r.to_json()["f4_cycles"][0]["pair"] == [0, 2]


def test_preconditions_size_bound():
    f = random.Random(1).sample(T3.edges, 5 * 3 - 6)
    r = check_preconditions(T3, f)
    assert not r.size_ok and "exceeds" in r.violations()[0]


def test_preconditions_low_degree():
    r = check_preconditions(T2, [(0, 1), (0, 3), (0, 5)])
    assert r.low_degree == [(0, 1)]


def test_construct_rejects_bad_input():
    with pytest.raises(PreconditionError) as exc:
        construct(T2, [(0, 5), (0, 7), (2, 5), (2, 7)])
    assert not exc.value.report.ok


# --- examples -------------------------------------------------------------------


def test_n2_empty():
    cycle, trace = _ok(T2, [])
    assert len(cycle) == 16 and trace.top.case == "n2/oracle"


def test_n3_concentrated_subcube_goes_through_case_1_3():
    for i in range(400):
        f = generate_faults("subcube-heavy", 3, 8, seed=0, index=i, inside=5)
        part = [len(x) for x in (f.slice(d) for d in range(3))]
        cycle, trace = _ok(T3, f)
        if trace.top.case.startswith("L8/1.3"):
            assert max(trace.top.counts) == 5 and len(cycle) == 64
            assert max(part) >= 3
            assert oracles.ham_cycle(T3, f) is not None
            return
    pytest.fail("no case 1.3 instance in 400 draws")


def test_n3_isolated_vertex_uses_two_cross_edges():
    for i in range(200):
        f = generate_faults("star", 3, 8, seed=0, index=i, centers=1, mode="isolated")
        cycle, trace = _ok(T3, f)
        top = trace.top
        if top.case == "L8/3" and top.via is None:
            (u,) = top.witnesses["isolated"]
            k = cycle.vertices.index(u)
            ends = cycle.vertices[k - 1], cycle.vertices[(k + 1) % 64]
            assert all(T3.dimension(u, w) == top.split_dim for w in ends)
            return
    pytest.fail("no case 3 instance")


def test_n3_two_pivots_on_a_faulty_edge():
    for i in range(200):
        f = generate_faults("star", 3, 8, seed=0, index=i, centers=2, mode="pivot")
        cycle, trace = _ok(T3, f)
        if trace.top.case == "L8/2.1.2":
            u, v = trace.top.witnesses["pivots"]
            assert canonical(u, v) in f.edges
            return
    pytest.fail("no case 2.1.2 instance")


def test_n4_thirteen_faults():
    f = generate_faults("dim-heavy", 4, 13, seed=0, dim=3, heavy=4)
    assert len(f.slice(3)) >= 4
    cycle, trace = _ok(T4, f)
    assert len(cycle) == 256
    assert trace.top.case.startswith("T/")
    # subcubes are solved by recursion, recorded one level down
    assert any(e.depth == 1 and e.n == 3 for e in trace.entries)


def test_n4_f4_inside_a_subcube():
    for i in range(50):
        f = generate_faults("f4-forge", 4, 13, seed=0, index=i, variant="inner")
        cycle, trace = _ok(T4, f)
        if trace.top.case == "T/1.2":
            return
    pytest.fail("no case 1.2 instance")


def test_wrong_n_entry_points():
    with pytest.raises(ValueError):
        lemma8_construct(T2, [])
    with pytest.raises(ValueError):
        inductive_construct(T3, [])
    cycle, _ = lemma8_construct(T3, [])
    assert len(cycle) == 64


def test_check_false_skips_preconditions():
    # four faults exceed 5n-7 at n = 2 but the cycle exists
    f = [(0, 1), (4, 5), (8, 9), (12, 13)]
    assert not check_preconditions(T2, f).ok
    cycle, _ = construct(T2, f, check=False)
    assert not verify_cycle(T2, f, cycle)


# --- trace ------------------------------------------------------------------------------


def test_trace_json_roundtrip():
    f = generate_faults("star", 4, 13, seed=0, index=0)
    cycle, trace = _ok(T4, f)
    again = CaseTrace.from_json(trace.to_json())
    assert again.to_json() == trace.to_json()
    assert again.case_path() == trace.case_path()
    assert not verify_trace(T4, f, again)


def test_trace_fields():
    f = generate_faults("uniform", 3, 8, seed=3)
    _, trace = _ok(T3, f)
    top = trace.top
    assert top.depth == 0 and top.n == 3 and top.split_dim in range(3)
    assert sum(top.counts) + top.cross_count == 8
    assert set(top.witnesses) >= {"cross_edges", "r_edges", "pivots", "isolated", "named"}
    assert not trace.has_fallback()


# --- stitch ----------------------------------------------------------------------------------


def _ring():
    # in BH_2 split on dimension 1: path 1-0-3-2 in each role, 2 -> 1 of the next role
    return [(j, [1, 0, 3, 2]) for j in range(4)]


def test_stitch_four_paths():
    fr = Frame(T2, frozenset(), FrameKey(1, 0, False))
    cyc = stitch(fr, _ring())
    assert sorted(cyc) == list(range(16))
    assert not verify_cycle(T2, (), cyc)


def test_stitch_missing_vertex():
    fr = Frame(T2, frozenset(), FrameKey(1, 0, False))
    segs = _ring()
    segs[0] = (0, [1, 0])
    with pytest.raises(StitchError) as exc:
        stitch(fr, segs)
    assert exc.value.kind in ("coverage", "junction")


def test_stitch_coverage_gap():
    fr = Frame(T2, frozenset(), FrameKey(1, 0, False))
    segs = _ring()[:3]
    with pytest.raises(StitchError) as exc:
        stitch(fr, segs)
    assert exc.value.kind == "coverage"


def test_stitch_faulty_junction():
    f = frozenset({canonical(2, 4 + 1)})
    fr = Frame(T2, f, FrameKey(1, 0, False))
    with pytest.raises(StitchError) as exc:
        stitch(fr, _ring())
    assert exc.value.kind == "junction"


def test_stitch_parity_mismatch():
    fr = Frame(T2, frozenset(), FrameKey(1, 0, False))
    segs = _ring()
    segs[1] = (1, [0, 3, 2, 1])
    with pytest.raises(StitchError) as exc:
        stitch(fr, segs)
    assert exc.value.kind == "parity"


def test_stitch_broken_segment():
    fr = Frame(T2, frozenset({(0, 1)}), FrameKey(1, 0, False))
    with pytest.raises(StitchError) as exc:
        stitch(fr, _ring())
    assert exc.value.kind == "broken-segment"


# --- soundness ------------------------------------------------------------------------------


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2 ** 32), st.integers(0, 8))
def test_n3_soundness(seed, k):
    rng = random.Random(seed)
    f = FaultSet.of(T3, rng.sample(T3.edges, k))
    if not check_preconditions(T3, f).ok:
        return
    _ok(T3, f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 3))
def test_n2_soundness(seed, k):
    f = random.Random(seed).sample(T2.edges, k)
    if check_preconditions(T2, f).ok:
        _ok(T2, f)
